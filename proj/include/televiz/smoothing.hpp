#pragma once

#include "televiz/geometry.hpp"

#include <span>

namespace televiz {

/// First-order low-pass state for the virtual tracking-space frame.
struct FilterState {
  Pose smoothed;
  double rate = 0.2;          // blend per update, (0, 1]; 1 passes through
  double period = 1.0 / 60.0; // seconds between updates
  bool filter_translation = true;
  bool filter_rotation = true;
};

/// Throws std::invalid_argument unless rate is in (0, 1] and period > 0.
FilterState make_filter(const Pose& initial, double rate, double period = 1.0 / 60.0);

/// smoothed += rate * (target - smoothed) on translation, slerp by `rate` on
/// rotation. Disabled channels follow the target directly.
FilterState filter_step(const FilterState& state, const Pose& target);

/// Delay the filter introduces on the yaw of `signal`, in seconds, found as
/// the shift maximizing input/output cross-correlation within `max_lag_s`.
/// Throws DegenerateSignal if the input yaw is constant.
double measure_filter_lag(double rate, double period, std::span<const Pose> signal,
                          double max_lag_s = 1.0);

}  // namespace televiz
