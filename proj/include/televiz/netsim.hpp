#pragma once

#include "televiz/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace televiz {

/// Window of degraded network during which every send pays `extra_delay`.
struct InstabilityEpisode {
  double start = 0.0;
  double duration = 0.0;
  double extra_delay = 0.0;

  bool contains(double t) const { return t >= start && t < start + duration; }
  friend bool operator==(const InstabilityEpisode&, const InstabilityEpisode&) = default;
};

struct ChannelConfig {
  double base_delay = 0.0;     // seconds
  double jitter_stddev = 0.0;  // seconds, truncated Gaussian
  std::optional<InstabilityEpisode> instability;
  std::uint64_t seed = 0;

  friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

/// Time comparisons in poll() tolerate this much accumulated rounding.
inline constexpr double kDeliveryEpsilon = 1e-9;

/// One-way link with seeded delay and jitter. Delivery is FIFO: a payload
/// never overtakes an earlier one, even when its own draw is shorter.
template <class Payload>
class DelayedChannel {
 public:
  explicit DelayedChannel(ChannelConfig config)
      : config_(std::move(config)), rng_(config_.seed) {
    if (config_.base_delay < 0.0) throw std::invalid_argument("base_delay must be >= 0");
    if (config_.jitter_stddev < 0.0) throw std::invalid_argument("jitter_stddev must be >= 0");
  }

  void send(Payload payload, double now) {
    if (now < last_send_) throw std::invalid_argument("send time went backwards");
    last_send_ = now;
    double deliver = now + delay_at(now);
    deliver = std::max(deliver, last_deliver_);
    last_deliver_ = deliver;
    queue_.push_back({std::move(payload), now, deliver});
  }

  /// Removes and returns every payload due by `now`, in send order.
  std::vector<Payload> poll(double now) {
    std::vector<Payload> out;
    while (!queue_.empty() && queue_.front().deliver_time <= now + kDeliveryEpsilon) {
      out.push_back(std::move(queue_.front().payload));
      queue_.pop_front();
    }
    return out;
  }

  std::size_t in_flight() const { return queue_.size(); }
  const ChannelConfig& config() const { return config_; }

  /// Delivery time of the oldest in-flight payload, if any.
  std::optional<double> next_delivery() const {
    if (queue_.empty()) return std::nullopt;
    return queue_.front().deliver_time;
  }

 private:
  struct InFlight {
    Payload payload;
    double send_time;
    double deliver_time;
  };

  double delay_at(double now) {
    double delay = config_.base_delay;
    if (config_.jitter_stddev > 0.0) {
      delay += std::max(0.0, rng_.normal(0.0, config_.jitter_stddev));
    }
    if (config_.instability && config_.instability->contains(now)) {
      delay += config_.instability->extra_delay;
    }
    return delay;
  }

  ChannelConfig config_;
  Rng rng_;
  std::deque<InFlight> queue_;
  double last_send_ = -std::numeric_limits<double>::infinity();
  double last_deliver_ = -std::numeric_limits<double>::infinity();
};

}  // namespace televiz
