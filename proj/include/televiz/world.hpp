#pragma once

#include "televiz/geometry.hpp"
#include "televiz/rng.hpp"

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace televiz {

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Color&, const Color&) = default;
};

inline constexpr Color kBlankColor{128, 128, 128};
inline constexpr Color kSepia{112, 66, 20};

/// Solid axis-aligned box. Rays starting inside see its inner faces, so a
/// large box doubles as a room.
struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
  Color color;
  friend bool operator==(const Box&, const Box&) = default;
};

/// Axis-aligned rectangle at `axis == offset`. Bounds are given in the two
/// remaining axes, in cyclic order ((axis+1)%3, (axis+2)%3).
struct Rect {
  int axis = 2;
  double offset = 0.0;
  Eigen::Vector2d min = Eigen::Vector2d::Zero();
  Eigen::Vector2d max = Eigen::Vector2d::Zero();
  Color color;
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct SceneModel {
  std::vector<Box> boxes;
  std::vector<Rect> planes;

  bool empty() const { return boxes.empty() && planes.empty(); }
  std::size_t surface_count() const { return boxes.size() * 6 + planes.size(); }
  Color surface_color(std::uint32_t surface) const;
  friend bool operator==(const SceneModel&, const SceneModel&) = default;
};

struct SurfaceHit {
  double distance = 0.0;
  Vec3 point = Vec3::Zero();
  std::uint32_t surface = 0;  // box faces first (6 per box), then planes
  Color color;
};

/// Nearest surface along a unit direction within (0, max_distance].
std::optional<SurfaceHit> cast_ray(const SceneModel& scene, const Vec3& origin,
                                   const Vec3& direction, double max_distance);

/// Pinhole frustum with a regular grid of rays on the image plane x = 1.
struct CameraModel {
  double horizontal_fov_deg = 90.0;
  double vertical_fov_deg = 60.0;
  double max_range = 10.0;
  int cols = 64;
  int rows = 64;

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
  /// Unit ray through the center of grid cell (col, row), camera frame.
  Vec3 ray_direction(int col, int row) const;
  /// Exact solid angle of grid cell (col, row), steradians.
  double cell_solid_angle(int col, int row) const;
  /// Direction (camera frame, any length) lies inside the frustum.
  bool contains_direction(const Vec3& d) const;
  double total_solid_angle() const;
  friend bool operator==(const CameraModel&, const CameraModel&) = default;
};

struct CloudPoint {
  Vec3 position = Vec3::Zero();  // camera frame
  Color color;
  std::uint32_t surface = 0;
};

struct PointCloudFrame {
  std::vector<CloudPoint> points;
  Pose capture_pose;  // camera in world at capture
  CameraModel camera;
  double timestamp = 0.0;
};

struct CaptureOptions {
  double depth_noise_stddev = 0.0;  // meters along the ray; 0 disables
  std::uint64_t noise_seed = 0;
};

PointCloudFrame capture_pointcloud(const SceneModel& scene, const CameraModel& camera,
                                   const Pose& pose, double timestamp = 0.0,
                                   const CaptureOptions& options = {});

/// Writes an ASCII PLY with one "x y z r g b" vertex per line, world frame.
void write_ply(std::ostream& os, const PointCloudFrame& frame);

/// Grid cell on one scene surface.
struct CellKey {
  std::uint32_t surface = 0;
  std::int32_t u = 0;
  std::int32_t v = 0;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

CellKey cell_of(const SceneModel& scene, std::uint32_t surface, const Vec3& point,
                double cell_size);

/// Every cell of every surface, for pre-scanned meshes and oracles.
std::vector<CellKey> all_surface_cells(const SceneModel& scene, double cell_size);

/// Blend toward sepia by `strength` in (0, 1]. The result always differs from
/// `base`; sepia-like inputs are pushed toward the opposite tone instead.
Color tint_color(Color base, double strength);

/// Occupancy of scanned surface cells; rendered tinted.
class MeshModel {
 public:
  explicit MeshModel(double cell_size = 0.05, double tint_strength = 0.35);

  double cell_size() const { return cell_size_; }
  double tint_strength() const { return tint_strength_; }
  std::size_t size() const { return count_; }
  bool contains(const CellKey& key) const {
    if (key.surface >= grids_.size()) return false;
    const Grid& g = grids_[key.surface];
    const std::int64_t du = std::int64_t{key.u} - g.u0;
    const std::int64_t dv = std::int64_t{key.v} - g.v0;
    return du >= 0 && du < g.nu && dv >= 0 && dv < g.nv && g.occupied[du * g.nv + dv] != 0;
  }
  void insert(const CellKey& key);
  /// Occupied cells in ascending order.
  std::vector<CellKey> cells() const;
  Color tinted(Color base) const { return tint_color(base, tint_strength_); }

  friend bool operator==(const MeshModel& a, const MeshModel& b);

 private:
  // Dense occupancy over the cell range seen so far on one surface.
  struct Grid {
    std::int32_t u0 = 0;
    std::int32_t v0 = 0;
    std::int32_t nu = 0;
    std::int32_t nv = 0;
    std::vector<std::uint8_t> occupied;
  };

  double cell_size_;
  double tint_strength_;
  std::vector<Grid> grids_;
  std::size_t count_ = 0;
};

/// Marks the cells holding any frame point; earlier cells are kept.
MeshModel scan_mesh(MeshModel mesh, const SceneModel& scene, const PointCloudFrame& frame);

/// Mesh with every surface cell already scanned.
MeshModel prescanned_mesh(const SceneModel& scene, double cell_size, double tint_strength);

enum class CoverageLabel : std::uint8_t { Live, Mesh, Blank };

struct CoverageReport {
  double live_fraction = 0.0;
  double mesh_fraction = 0.0;
  double blank_fraction = 1.0;
};

struct CoverageImage {
  int cols = 0;
  int rows = 0;
  std::vector<CoverageLabel> labels;  // row-major
  std::vector<Color> colors;
  CoverageReport report;
};

struct CoverageOptions {
  /// Camera image is locked to the HMD screen (fixed-RGB display): a ray only
  /// counts as live if it also falls inside the camera frustum in HMD frame.
  bool head_locked = false;
  bool use_mesh = true;
};

/// Labels each HMD ray live (surface point seen by the last frame), mesh
/// (scanned cell) or blank. Fractions are solid-angle weighted.
CoverageImage classify_coverage_image(const SceneModel& scene, const MeshModel& mesh,
                                      const CameraModel& hmd, const Pose& hmd_pose,
                                      const PointCloudFrame& last_frame,
                                      const CoverageOptions& options = {});

CoverageReport classify_coverage(const SceneModel& scene, const MeshModel& mesh,
                                 const CameraModel& hmd, const Pose& hmd_pose,
                                 const PointCloudFrame& last_frame,
                                 const CoverageOptions& options = {});

class PointBehindCamera : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Angular error, seen from the HMD, between a scene point and its flat
/// billboard image placed `billboard_depth` in front of the camera.
double billboard_distortion(const Vec3& scene_point, const Pose& camera_pose,
                            const Pose& hmd_pose, double billboard_depth = 1.0);

}  // namespace televiz
