#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

namespace televiz {

class DegenerateSignal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample shift k in [min_lag, max_lag] maximizing the Pearson correlation of
/// pairs (input[n - k], output[n]) for n in [window_begin, window_end). Ties go
/// to the smallest shift. Throws DegenerateSignal when either side of every
/// candidate pairing has zero variance.
int estimate_lag_samples(std::span<const double> input, std::span<const double> output,
                         int min_lag, int max_lag, std::size_t window_begin,
                         std::size_t window_end);

inline int estimate_lag_samples(std::span<const double> input,
                                std::span<const double> output, int min_lag,
                                int max_lag) {
  return estimate_lag_samples(input, output, min_lag, max_lag, 0, output.size());
}

/// Head-to-head latency of robot yaw behind operator yaw, in seconds, both
/// traces sampled every `sample_period` on the same clock.
double measure_head_latency(std::span<const double> operator_yaw,
                            std::span<const double> robot_yaw, double sample_period,
                            double max_lag_s = 3.0);

}  // namespace televiz
