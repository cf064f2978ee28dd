#include "televiz/lag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace televiz {

namespace {

// Pearson correlation of (input[n - k], output[n]); NaN if degenerate.
double correlation_at(std::span<const double> input, std::span<const double> output,
                      int k, std::size_t begin, std::size_t end) {
  const auto lo = static_cast<std::ptrdiff_t>(begin);
  const auto hi = static_cast<std::ptrdiff_t>(std::min(end, output.size()));
  const auto n_in = static_cast<std::ptrdiff_t>(input.size());
  const std::ptrdiff_t first = std::max(lo, static_cast<std::ptrdiff_t>(k));
  const std::ptrdiff_t last = std::min(hi, n_in + k);
  const std::ptrdiff_t count = last - first;
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::ptrdiff_t n = first; n < last; ++n) {
    mean_x += input[static_cast<std::size_t>(n - k)];
    mean_y += output[static_cast<std::size_t>(n)];
  }
  mean_x /= static_cast<double>(count);
  mean_y /= static_cast<double>(count);

  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::ptrdiff_t n = first; n < last; ++n) {
    const double dx = input[static_cast<std::size_t>(n - k)] - mean_x;
    const double dy = output[static_cast<std::size_t>(n)] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  constexpr double kTiny = 1e-24;
  if (sxx <= kTiny * static_cast<double>(count) || syy <= kTiny * static_cast<double>(count)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

int estimate_lag_samples(std::span<const double> input, std::span<const double> output,
                         int min_lag, int max_lag, std::size_t window_begin,
                         std::size_t window_end) {
  int best_lag = 0;
  double best = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (int k = min_lag; k <= max_lag; ++k) {
    const double c = correlation_at(input, output, k, window_begin, window_end);
    if (std::isnan(c)) continue;
    if (!found || c > best) {
      best = c;
      best_lag = k;
      found = true;
    }
  }
  if (!found) throw DegenerateSignal("signal has zero variance over every candidate shift");
  return best_lag;
}

double measure_head_latency(std::span<const double> operator_yaw,
                            std::span<const double> robot_yaw, double sample_period,
                            double max_lag_s) {
  const int max_lag = static_cast<int>(std::lround(max_lag_s / sample_period));
  const int k = estimate_lag_samples(operator_yaw, robot_yaw, -max_lag, max_lag);
  return k * sample_period;
}

}  // namespace televiz
