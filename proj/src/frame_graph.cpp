#include "televiz/frame_graph.hpp"

#include <algorithm>
#include <deque>

namespace televiz {

namespace {

constexpr std::array<std::string_view, kFrameCount> kSymbols = {
    "H", "Z", "T", "R", "W", "Rh", "B", "H'", "Z'", "T'", "R'", "W'", "S"};

}  // namespace

std::string_view frame_symbol(FrameId id) {
  return kSymbols[static_cast<std::size_t>(id)];
}

NoPathError::NoPathError(FrameId child, FrameId parent)
    : std::runtime_error("no path from frame " + std::string(frame_symbol(child)) +
                         " to frame " + std::string(frame_symbol(parent))) {}

CycleError::CycleError(FrameId child, FrameId parent)
    : std::invalid_argument("edge " + std::string(frame_symbol(child)) + " -> " +
                            std::string(frame_symbol(parent)) +
                            " would create a cycle") {}

void FrameGraph::set(FrameId child, FrameId parent, const Pose& child_in_parent,
                     EdgeKind kind) {
  if (child == parent) throw CycleError(child, parent);
  auto& slot = edges_[idx(child)][idx(parent)];
  if (!slot && reaches(parent, child)) throw CycleError(child, parent);
  slot = Edge{child_in_parent, kind};
}

bool FrameGraph::contains(FrameId child, FrameId parent) const {
  return edges_[idx(child)][idx(parent)].has_value();
}

const std::optional<FrameGraph::Edge>& FrameGraph::edge(FrameId child,
                                                        FrameId parent) const {
  return edges_[idx(child)][idx(parent)];
}

bool FrameGraph::reaches(FrameId from, FrameId to) const {
  std::array<bool, kFrameCount> seen{};
  std::vector<std::size_t> stack{idx(from)};
  while (!stack.empty()) {
    const std::size_t f = stack.back();
    stack.pop_back();
    if (f == idx(to)) return true;
    if (seen[f]) continue;
    seen[f] = true;
    for (std::size_t p = 0; p < kFrameCount; ++p) {
      if (edges_[f][p]) stack.push_back(p);
    }
  }
  return false;
}

std::vector<FrameId> FrameGraph::find_path(FrameId from, FrameId to) const {
  constexpr std::size_t kNone = kFrameCount;
  std::array<std::size_t, kFrameCount> prev;
  prev.fill(kNone);
  std::array<bool, kFrameCount> seen{};
  std::deque<std::size_t> queue{idx(from)};
  seen[idx(from)] = true;
  while (!queue.empty()) {
    const std::size_t f = queue.front();
    queue.pop_front();
    if (f == idx(to)) break;
    for (std::size_t n = 0; n < kFrameCount; ++n) {
      if (seen[n] || !(edges_[f][n] || edges_[n][f])) continue;
      seen[n] = true;
      prev[n] = f;
      queue.push_back(n);
    }
  }
  if (!seen[idx(to)]) return {};
  std::vector<FrameId> path;
  for (std::size_t f = idx(to); f != kNone; f = prev[f]) {
    path.push_back(static_cast<FrameId>(f));
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Pose FrameGraph::step(FrameId from, FrameId to) const {
  if (const auto& e = edges_[idx(from)][idx(to)]) return e->child_in_parent;
  if (const auto& e = edges_[idx(to)][idx(from)]) return inverse(e->child_in_parent);
  throw NoPathError(from, to);
}

Pose FrameGraph::query(FrameId child, FrameId parent) const {
  if (child == parent) return Pose::identity();
  const auto path = find_path(child, parent);
  if (path.empty()) throw NoPathError(child, parent);
  return compose_path(path);
}

Pose FrameGraph::compose_path(std::span<const FrameId> path) const {
  if (path.size() < 2) return Pose::identity();
  // Start from the first edge so a single-edge path returns it untouched.
  Pose result = step(path[0], path[1]);
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    result = compose(step(path[i], path[i + 1]), result);
  }
  return result;
}

}  // namespace televiz
