#pragma once

#include "televiz/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace televiz {

/// Every coordinate frame of the operator, robot and virtual spaces.
enum class FrameId : std::uint8_t {
  // Operator and robot space.
  Hmd,          // H
  Zed,          // Z
  Tracking,     // T
  Robot,        // R
  World,        // W
  RobotHead,    // Rh
  BaseStation,  // B
  // Virtual space.
  VirtualHmd,       // H'
  VirtualZed,       // Z'
  VirtualTracking,  // T'
  VirtualRobot,     // R'
  VirtualWorld,     // W'
  Mesh,             // S
};

inline constexpr std::size_t kFrameCount = 13;

std::string_view frame_symbol(FrameId id);

enum class EdgeKind : std::uint8_t { Static, Streamed };

class NoPathError : public std::runtime_error {
 public:
  NoPathError(FrameId child, FrameId parent);
};

class CycleError : public std::invalid_argument {
 public:
  CycleError(FrameId child, FrameId parent);
};

/// Directed acyclic registry of child->parent transforms. Queries walk edges in
/// either direction, inverting those traversed backwards.
class FrameGraph {
 public:
  struct Edge {
    Pose child_in_parent;
    EdgeKind kind = EdgeKind::Static;
  };

  /// Registers or overwrites the edge. Throws CycleError if the edge would
  /// close a directed cycle.
  void set(FrameId child, FrameId parent, const Pose& child_in_parent,
           EdgeKind kind = EdgeKind::Static);

  bool contains(FrameId child, FrameId parent) const;
  const std::optional<Edge>& edge(FrameId child, FrameId parent) const;

  /// Pose of `child` in `parent` along the shortest connecting path.
  Pose query(FrameId child, FrameId parent) const;

  /// Pose of path.front() in path.back(); consecutive frames must share an edge.
  Pose compose_path(std::span<const FrameId> path) const;

  /// Shortest undirected path, empty if disconnected.
  std::vector<FrameId> find_path(FrameId from, FrameId to) const;

 private:
  static std::size_t idx(FrameId f) { return static_cast<std::size_t>(f); }
  bool reaches(FrameId from, FrameId to) const;
  Pose step(FrameId from, FrameId to) const;

  std::array<std::array<std::optional<Edge>, kFrameCount>, kFrameCount> edges_{};
};

}  // namespace televiz
