#include "televiz/lag.hpp"
#include "televiz/rng.hpp"
#include "televiz/smoothing.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace televiz;

namespace {

std::vector<Pose> yaw_sweep(double amplitude_deg, double period_s, double duration_s,
                            double dt = 1.0 / 60.0) {
  std::vector<Pose> out;
  const auto n = static_cast<int>(std::lround(duration_s / dt));
  for (int i = 0; i < n; ++i) {
    const double yaw = amplitude_deg * std::sin(2.0 * std::numbers::pi * i * dt / period_s);
    out.push_back(Pose::from_rotation(rotation_z(deg2rad(yaw))));
  }
  return out;
}

}  // namespace

TEST_CASE("rate validation") {
  CHECK_THROWS_AS(make_filter(Pose::identity(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_filter(Pose::identity(), 1.5), std::invalid_argument);
  CHECK_THROWS_AS(make_filter(Pose::identity(), 0.5, 0.0), std::invalid_argument);
  CHECK_NOTHROW(make_filter(Pose::identity(), 1.0));
}

TEST_CASE("rate 1 passes the target through exactly") {
  FilterState s = make_filter(Pose::identity(), 1.0);
  const Pose target(rotation_x(0.7) * rotation_z(0.2), Vec3(3, -1, 2));
  s = filter_step(s, target);
  CHECK(s.smoothed == target);
}

TEST_CASE("scalar recurrence") {
  FilterState s = make_filter(Pose::identity(), 0.2);
  const Pose target = Pose::from_translation(1, 0, 0);
  s = filter_step(s, target);
  CHECK(s.smoothed.translation().x() == doctest::Approx(0.2).epsilon(1e-15));
  s = filter_step(s, target);
  CHECK(s.smoothed.translation().x() == doctest::Approx(0.36).epsilon(1e-15));
}

TEST_CASE("error decays geometrically") {
  for (double rate : {0.05, 0.2, 0.7}) {
    FilterState s = make_filter(Pose::identity(), rate);
    const Pose target(rotation_z(1.0), Vec3(2, 0, 0));
    for (int n = 1; n <= 50; ++n) {
      s = filter_step(s, target);
      const double expected = std::pow(1.0 - rate, n);
      if (expected < 1e-6) break;  // below the precision of the distance itself
      CHECK(translation_distance(s.smoothed, target) / 2.0 == doctest::Approx(expected).epsilon(1e-9));
      CHECK(rotation_distance(s.smoothed, target) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("channel toggles") {
  FilterState s = make_filter(Pose::identity(), 0.2);
  s.filter_rotation = false;
  const Pose target(rotation_z(1.0), Vec3(1, 0, 0));
  s = filter_step(s, target);
  CHECK(rotation_distance(s.smoothed, target) < 1e-15);
  CHECK(s.smoothed.translation().x() == doctest::Approx(0.2));
  s.filter_rotation = true;
  s.filter_translation = false;
  s = filter_step(s, Pose::identity());
  CHECK(s.smoothed.translation().norm() == 0.0);
  CHECK(rotation_distance(s.smoothed, Pose::identity()) == doctest::Approx(0.8));
}

TEST_CASE("high-frequency input is attenuated") {
  const double dt = 1.0 / 60.0;
  for (double rate : {0.9, 0.5, 0.2, 0.05}) {
    for (double freq : {15.0, 20.0, 29.0}) {
      FilterState s = make_filter(Pose::identity(), rate, dt);
      double peak = 0.0;
      for (int i = 0; i < 600; ++i) {
        const double x = std::sin(2.0 * std::numbers::pi * freq * i * dt + 0.3);
        s = filter_step(s, Pose::from_translation(x, 0, 0));
        if (i > 300) peak = std::max(peak, std::abs(s.smoothed.translation().x()));
      }
      CHECK(peak < 1.0);
    }
  }
}

TEST_CASE("output stays inside the input's convex hull") {
  Rng rng(31);
  FilterState s = make_filter(Pose::identity(), 0.3);
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  for (int i = 0; i < 2000; ++i) {
    const Vec3 t(rng.uniform(-1, 4), rng.uniform(-2, 2), rng.uniform(0, 1));
    lo = lo.cwiseMin(t);
    hi = hi.cwiseMax(t);
    s = filter_step(s, Pose::from_translation(t));
    const Vec3& y = s.smoothed.translation();
    CHECK((y.array() >= lo.array() - 1e-12).all());
    CHECK((y.array() <= hi.array() + 1e-12).all());
  }
}

TEST_CASE("rotation never overshoots") {
  Rng rng(32);
  const double rate = 0.2;
  FilterState s = make_filter(Pose::identity(), rate);
  for (int i = 0; i < 1000; ++i) {
    const Pose target = Pose::from_rotation(
        Quat(rng.normal(), rng.normal(), rng.normal(), rng.normal()).normalized());
    const double gap = rotation_distance(s.smoothed, target);
    const FilterState next = filter_step(s, target);
    CHECK(rotation_distance(s.smoothed, next.smoothed) <= rate * gap + 1e-12);
    CHECK(std::abs(next.smoothed.rotation().norm() - 1.0) < 1e-12);
    s = next;
  }
}

TEST_CASE("filter lag") {
  const double dt = 1.0 / 60.0;
  const auto signal = yaw_sweep(75.0, 6.0, 12.0);
  SUBCASE("rate 1 has no lag") { CHECK(measure_filter_lag(1.0, dt, signal) == 0.0); }
  SUBCASE("rate 0.2 lands near its low-frequency group delay") {
    const double lag = measure_filter_lag(0.2, dt, signal);
    CHECK(lag >= 0.040);
    CHECK(lag <= 0.080);
    // (1 - rate) / rate samples, within one sample.
    CHECK(std::abs(lag - 4.0 * dt) <= dt + 1e-12);
  }
  SUBCASE("smaller rates lag more") {
    double previous = -1.0;
    for (double rate : {1.0, 0.5, 0.2, 0.1, 0.05}) {
      const double lag = measure_filter_lag(rate, dt, signal);
      CHECK(lag > previous);
      CHECK(std::abs(lag - (1.0 - rate) / rate * dt) <= dt + 1e-12);
      previous = lag;
    }
  }
  SUBCASE("constant input is degenerate") {
    const std::vector<Pose> flat(300, Pose::from_rotation(rotation_z(0.3)));
    CHECK_THROWS_AS(measure_filter_lag(0.2, dt, flat), DegenerateSignal);
  }
}
