#include "televiz/smoothing.hpp"

#include "televiz/lag.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace televiz {

FilterState make_filter(const Pose& initial, double rate, double period) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("filter rate must be in (0, 1]");
  }
  if (!(period > 0.0)) throw std::invalid_argument("filter period must be positive");
  FilterState s;
  s.smoothed = initial;
  s.rate = rate;
  s.period = period;
  return s;
}

FilterState filter_step(const FilterState& state, const Pose& target) {
  FilterState next = state;
  if (state.rate == 1.0) {
    next.smoothed = target;
    return next;
  }
  const Vec3& t0 = state.smoothed.translation();
  const Vec3 t = state.filter_translation
                     ? Vec3(t0 + state.rate * (target.translation() - t0))
                     : target.translation();
  const Quat q = state.filter_rotation
                     ? state.smoothed.rotation().slerp(state.rate, target.rotation())
                     : target.rotation();
  next.smoothed = Pose(q, t);
  return next;
}

double measure_filter_lag(double rate, double period, std::span<const Pose> signal,
                          double max_lag_s) {
  if (signal.empty()) throw DegenerateSignal("empty signal");
  FilterState state = make_filter(signal.front(), rate, period);
  std::vector<double> in;
  std::vector<double> out;
  in.reserve(signal.size());
  out.reserve(signal.size());
  for (const Pose& p : signal) {
    state = filter_step(state, p);
    in.push_back(yaw_of(p.rotation()));
    out.push_back(yaw_of(state.smoothed.rotation()));
  }
  const int max_lag = static_cast<int>(std::lround(max_lag_s / period));
  return estimate_lag_samples(in, out, -max_lag, max_lag) * period;
}

}  // namespace televiz
