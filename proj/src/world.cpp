#include "televiz/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>

namespace televiz {

namespace {

constexpr double kRayEpsilon = 1e-9;

std::int32_t cell_count(double extent, double cell_size) {
  return std::max<std::int32_t>(
      1, static_cast<std::int32_t>(std::ceil(extent / cell_size - 1e-9)));
}

// A surface rectangle in its own (u, v) axes, cut into mesh cells.
struct SurfacePatch {
  SurfacePatch(int axis, double origin_u, double origin_v, double extent_u, double extent_v,
               double cell_size)
      : u_axis((axis + 1) % 3),
        v_axis((axis + 2) % 3),
        origin_u(origin_u),
        origin_v(origin_v),
        cell_size(cell_size),
        nu(cell_count(extent_u, cell_size)),
        nv(cell_count(extent_v, cell_size)) {}
  int u_axis;
  int v_axis;
  double origin_u;
  double origin_v;
  double cell_size;
  std::int32_t nu;
  std::int32_t nv;
};

SurfacePatch patch_of(const SceneModel& scene, std::uint32_t surface, double cell_size) {
  const std::size_t box_faces = scene.boxes.size() * 6;
  if (surface < box_faces) {
    const Box& b = scene.boxes[surface / 6];
    const int axis = static_cast<int>((surface % 6) / 2);
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    return {axis, b.min[u], b.min[v], b.max[u] - b.min[u], b.max[v] - b.min[v], cell_size};
  }
  if (surface - box_faces >= scene.planes.size()) {
    throw std::out_of_range("surface index out of range");
  }
  const Rect& r = scene.planes[surface - box_faces];
  return {r.axis, r.min.x(), r.min.y(), r.max.x() - r.min.x(), r.max.y() - r.min.y(), cell_size};
}

std::vector<SurfacePatch> all_patches(const SceneModel& scene, double cell_size) {
  std::vector<SurfacePatch> out;
  out.reserve(scene.surface_count());
  for (std::uint32_t i = 0; i < scene.surface_count(); ++i) {
    out.push_back(patch_of(scene, i, cell_size));
  }
  return out;
}

CellKey cell_in_patch(const SurfacePatch& patch, std::uint32_t surface, const Vec3& point) {
  const auto iu = static_cast<std::int32_t>(
      std::floor((point[patch.u_axis] - patch.origin_u) / patch.cell_size));
  const auto iv = static_cast<std::int32_t>(
      std::floor((point[patch.v_axis] - patch.origin_v) / patch.cell_size));
  return {surface, std::clamp(iu, 0, patch.nu - 1), std::clamp(iv, 0, patch.nv - 1)};
}

struct Ray {
  Ray(const Vec3& origin, const Vec3& direction) {
    any_parallel = false;
    for (int a = 0; a < 3; ++a) {
      o[a] = origin[a];
      d[a] = direction[a];
      parallel[a] = std::abs(d[a]) < 1e-15;
      any_parallel = any_parallel || parallel[a];
      inv[a] = parallel[a] ? 0.0 : 1.0 / d[a];
      sign[a] = d[a] < 0.0 ? 1 : 0;
    }
  }
  Vec3 at(double t) const { return Vec3(o[0] + t * d[0], o[1] + t * d[1], o[2] + t * d[2]); }
  double o[3];
  double d[3];
  double inv[3];
  int sign[3];
  bool parallel[3];
  bool any_parallel;
};

// Scene boxes as flat {min, max} bounds for the slab test.
class Tracer {
 public:
  explicit Tracer(const SceneModel& scene) : scene_(scene) {
    slabs_.reserve(scene.boxes.size());
    for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
      const Box& b = scene.boxes[i];
      slabs_.push_back(
          {{{b.min.x(), b.min.y(), b.min.z()}, {b.max.x(), b.max.y(), b.max.z()}}, i});
    }
  }

  /// Copy that drops boxes wholly outside the pyramid from `origin` along +x of
  /// `rotation` with half-angle tangents `ty`, `tz`. Rays inside it hit the same.
  Tracer culled(const Vec3& origin, const Eigen::Matrix3d& rotation, double ty,
                double tz) const {
    constexpr double kSlack = 1e-9;
    Tracer out(scene_, {});
    for (const Slab& s : slabs_) {
      bool outside[4] = {true, true, true, true};
      for (int corner = 0; corner < 8; ++corner) {
        const Vec3 w(s.b[corner & 1][0], s.b[(corner >> 1) & 1][1], s.b[(corner >> 2) & 1][2]);
        const Vec3 c = rotation.transpose() * (w - origin);
        const double slack = kSlack * (1.0 + c.norm());
        outside[0] = outside[0] && ty * c.x() - c.y() < -slack;
        outside[1] = outside[1] && ty * c.x() + c.y() < -slack;
        outside[2] = outside[2] && tz * c.x() - c.z() < -slack;
        outside[3] = outside[3] && tz * c.x() + c.z() < -slack;
      }
      if (!(outside[0] || outside[1] || outside[2] || outside[3])) out.slabs_.push_back(s);
    }
    return out;
  }

  /// Nearest surface within `max_distance`; earlier surfaces win ties.
  bool nearest(const Ray& r, double max_distance, SurfaceHit& best) const {
    double limit = max_distance;
    std::size_t best_box = slabs_.size();
    bool best_entering = false;
    for (std::size_t i = 0; i < slabs_.size(); ++i) {
      double t_near, t_far;
      if (!span(slabs_[i], r, t_near, t_far)) continue;
      const bool entering = t_near > kRayEpsilon;
      const double t = entering ? t_near : t_far;
      if (t <= kRayEpsilon || t > limit) continue;
      if (best_box != slabs_.size() && !(t < limit)) continue;
      limit = t;
      best_box = i;
      best_entering = entering;
    }
    bool found = best_box < slabs_.size();
    if (found) best = box_hit(slabs_[best_box], r, limit, best_entering);
    const auto first_plane = static_cast<std::uint32_t>(scene_.boxes.size() * 6);
    SurfaceHit h;
    for (std::size_t i = 0; i < scene_.planes.size(); ++i) {
      if (hit_rect(scene_.planes[i], first_plane + static_cast<std::uint32_t>(i), r, limit, h) &&
          (!found || h.distance < best.distance)) {
        best = h;
        found = true;
        limit = h.distance;
      }
    }
    return found;
  }

  /// Any surface strictly between kRayEpsilon and `limit`.
  bool blocked(const Ray& r, double limit) const {
    for (const Slab& s : slabs_) {
      double t_near, t_far;
      if (!span(s, r, t_near, t_far)) continue;
      if ((t_near > kRayEpsilon && t_near < limit) || (t_far > kRayEpsilon && t_far < limit)) {
        return true;
      }
    }
    SurfaceHit h;
    for (const Rect& p : scene_.planes) {
      if (hit_rect(p, 0, r, limit, h) && h.distance < limit) return true;
    }
    return false;
  }

 private:
  struct Slab {
    double b[2][3];  // min, max
    std::size_t box;
  };

  Tracer(const SceneModel& scene, std::vector<Slab> slabs)
      : scene_(scene), slabs_(std::move(slabs)) {}

  static bool span(const Slab& s, const Ray& r, double& t_near, double& t_far) {
    if (r.any_parallel) return span_with_parallel(s, r, t_near, t_far);
    // Branch-free: both slab distances per axis, then the inner pair.
    double lo[3];
    double hi[3];
    for (int a = 0; a < 3; ++a) {
      const double t0 = (s.b[0][a] - r.o[a]) * r.inv[a];
      const double t1 = (s.b[1][a] - r.o[a]) * r.inv[a];
      lo[a] = t0 < t1 ? t0 : t1;
      hi[a] = t0 < t1 ? t1 : t0;
    }
    t_near = std::max(std::max(lo[0], lo[1]), lo[2]);
    t_far = std::min(std::min(hi[0], hi[1]), hi[2]);
    return t_near <= t_far;
  }

  static bool span_with_parallel(const Slab& s, const Ray& r, double& t_near, double& t_far) {
    t_near = -std::numeric_limits<double>::infinity();
    t_far = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
      if (r.parallel[a]) {
        if (r.o[a] < s.b[0][a] || r.o[a] > s.b[1][a]) return false;
        continue;
      }
      t_near = std::max(t_near, (s.b[r.sign[a]][a] - r.o[a]) * r.inv[a]);
      t_far = std::min(t_far, (s.b[1 - r.sign[a]][a] - r.o[a]) * r.inv[a]);
    }
    return t_near <= t_far;
  }

  SurfaceHit box_hit(const Slab& s, const Ray& r, double t, bool entering) const {
    // The face is the slab that set t; ties go to the lowest axis.
    int axis = -1;
    double best = entering ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
      if (r.parallel[a]) continue;
      const double v = entering ? (s.b[r.sign[a]][a] - r.o[a]) * r.inv[a]
                                : (s.b[1 - r.sign[a]][a] - r.o[a]) * r.inv[a];
      if (entering ? v > best : v < best) {
        best = v;
        axis = a;
      }
    }
    // Entering through the min face when moving up an axis, leaving through the max face.
    const int side = (r.d[axis] > 0.0) == entering ? 0 : 1;
    SurfaceHit out;
    out.distance = t;
    out.point = r.at(t);
    out.point[axis] = s.b[side][axis];
    out.surface = static_cast<std::uint32_t>(s.box * 6 + axis * 2 + side);
    out.color = scene_.boxes[s.box].color;
    return out;
  }

  static bool hit_rect(const Rect& rect, std::uint32_t surface, const Ray& r, double limit,
                       SurfaceHit& out) {
    const int a = rect.axis;
    if (r.parallel[a]) return false;
    const double t = (rect.offset - r.o[a]) * r.inv[a];
    if (t <= kRayEpsilon || t > limit) return false;
    Vec3 p = r.at(t);
    p[a] = rect.offset;
    const double pu = p[(a + 1) % 3];
    const double pv = p[(a + 2) % 3];
    if (pu < rect.min.x() || pu > rect.max.x() || pv < rect.min.y() || pv > rect.max.y()) {
      return false;
    }
    out = SurfaceHit{t, p, surface, rect.color};
    return true;
  }

  const SceneModel& scene_;
  std::vector<Slab> slabs_;
};

struct RayGrid {
  CameraModel model;
  std::vector<Vec3> directions;
  std::vector<double> weights;
};

// Directions and cell solid angles depend only on the camera model.
const RayGrid& ray_grid(const CameraModel& cam) {
  thread_local std::vector<std::unique_ptr<RayGrid>> cache;
  for (const auto& g : cache) {
    if (g->model == cam) return *g;
  }
  if (cache.size() >= 8) cache.erase(cache.begin());
  auto g = std::make_unique<RayGrid>();
  g->model = cam;
  const auto n = static_cast<std::size_t>(cam.cols) * static_cast<std::size_t>(cam.rows);
  g->directions.reserve(n);
  g->weights.reserve(n);
  for (int row = 0; row < cam.rows; ++row) {
    for (int col = 0; col < cam.cols; ++col) {
      g->directions.push_back(cam.ray_direction(col, row));
      g->weights.push_back(cam.cell_solid_angle(col, row));
    }
  }
  cache.push_back(std::move(g));
  return *cache.back();
}

// Frustum test with the half-angle tangents hoisted out of the loop.
struct Frustum {
  explicit Frustum(const CameraModel& c)
      : ty(std::tan(deg2rad(c.horizontal_fov_deg) / 2.0)),
        tz(std::tan(deg2rad(c.vertical_fov_deg) / 2.0)) {}
  bool contains(const Vec3& d) const {
    constexpr double kSlack = 1.0 + 1e-12;
    return d.x() > 0.0 && std::abs(d.y()) <= d.x() * ty * kSlack &&
           std::abs(d.z()) <= d.x() * tz * kSlack;
  }
  double ty;
  double tz;
};

double rect_solid_angle_term(double y, double z) {
  return std::atan(y * z / std::sqrt(1.0 + y * y + z * z));
}

Color blend(Color base, Color toward, double s) {
  auto mix = [s](std::uint8_t a, std::uint8_t b) {
    const double v = a + s * (static_cast<double>(b) - a);
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  };
  return {mix(base.r, toward.r), mix(base.g, toward.g), mix(base.b, toward.b)};
}

}  // namespace

Color SceneModel::surface_color(std::uint32_t surface) const {
  const std::size_t box_faces = boxes.size() * 6;
  if (surface < box_faces) return boxes[surface / 6].color;
  return planes.at(surface - box_faces).color;
}

std::optional<SurfaceHit> cast_ray(const SceneModel& scene, const Vec3& origin,
                                   const Vec3& direction, double max_distance) {
  SurfaceHit hit;
  if (!Tracer(scene).nearest(Ray(origin, direction), max_distance, hit)) return std::nullopt;
  return hit;
}

void CameraModel::validate() const {
  if (!(horizontal_fov_deg > 0.0 && horizontal_fov_deg < 180.0) ||
      !(vertical_fov_deg > 0.0 && vertical_fov_deg < 180.0)) {
    throw std::invalid_argument("field of view must be in (0, 180) degrees");
  }
  if (!(max_range > 0.0)) throw std::invalid_argument("max_range must be positive");
  if (cols < 1 || rows < 1) throw std::invalid_argument("ray grid must be at least 1x1");
}

Vec3 CameraModel::ray_direction(int col, int row) const {
  const double ty = std::tan(deg2rad(horizontal_fov_deg) / 2.0);
  const double tz = std::tan(deg2rad(vertical_fov_deg) / 2.0);
  // Column 0 is the left edge (+y), row 0 the top edge (+z).
  const double y = ty * (1.0 - (2.0 * col + 1.0) / cols);
  const double z = tz * (1.0 - (2.0 * row + 1.0) / rows);
  return Vec3(1.0, y, z).normalized();
}

double CameraModel::cell_solid_angle(int col, int row) const {
  const double ty = std::tan(deg2rad(horizontal_fov_deg) / 2.0);
  const double tz = std::tan(deg2rad(vertical_fov_deg) / 2.0);
  const double y1 = ty * (1.0 - 2.0 * (col + 1) / cols);
  const double y2 = ty * (1.0 - 2.0 * col / cols);
  const double z1 = tz * (1.0 - 2.0 * (row + 1) / rows);
  const double z2 = tz * (1.0 - 2.0 * row / rows);
  return rect_solid_angle_term(y2, z2) - rect_solid_angle_term(y1, z2) -
         rect_solid_angle_term(y2, z1) + rect_solid_angle_term(y1, z1);
}

double CameraModel::total_solid_angle() const {
  const double ty = std::tan(deg2rad(horizontal_fov_deg) / 2.0);
  const double tz = std::tan(deg2rad(vertical_fov_deg) / 2.0);
  return 4.0 * rect_solid_angle_term(ty, tz);
}

bool CameraModel::contains_direction(const Vec3& d) const { return Frustum(*this).contains(d); }

PointCloudFrame capture_pointcloud(const SceneModel& scene, const CameraModel& camera,
                                   const Pose& pose, double timestamp,
                                   const CaptureOptions& options) {
  camera.validate();
  PointCloudFrame frame;
  frame.capture_pose = pose;
  frame.camera = camera;
  frame.timestamp = timestamp;
  if (scene.empty()) return frame;
  Rng rng(options.noise_seed);
  const RayGrid& grid = ray_grid(camera);
  const Eigen::Matrix3d rot = pose.rotation().toRotationMatrix();
  frame.points.reserve(grid.directions.size());
  const Frustum frustum(camera);
  const Tracer tracer = Tracer(scene).culled(pose.translation(), rot, frustum.ty, frustum.tz);
  SurfaceHit hit;
  for (const Vec3& d : grid.directions) {
    if (!tracer.nearest(Ray(pose.translation(), rot * d), camera.max_range, hit)) continue;
    double depth = hit.distance;
    if (options.depth_noise_stddev > 0.0) {
      depth = std::max(0.0, depth + rng.normal(0.0, options.depth_noise_stddev));
    }
    frame.points.push_back({d * depth, hit.color, hit.surface});
  }
  return frame;
}

void write_ply(std::ostream& os, const PointCloudFrame& frame) {
  os << "ply\nformat ascii 1.0\n"
     << "element vertex " << frame.points.size() << "\n"
     << "property float x\nproperty float y\nproperty float z\n"
     << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
     << "end_header\n";
  const auto old_precision = os.precision(9);
  for (const CloudPoint& p : frame.points) {
    const Vec3 w = apply(frame.capture_pose, p.position);
    os << w.x() << ' ' << w.y() << ' ' << w.z() << ' ' << int{p.color.r} << ' '
       << int{p.color.g} << ' ' << int{p.color.b} << '\n';
  }
  os.precision(old_precision);
}

CellKey cell_of(const SceneModel& scene, std::uint32_t surface, const Vec3& point,
                double cell_size) {
  return cell_in_patch(patch_of(scene, surface, cell_size), surface, point);
}

std::vector<CellKey> all_surface_cells(const SceneModel& scene, double cell_size) {
  std::vector<CellKey> cells;
  const auto count = static_cast<std::uint32_t>(scene.surface_count());
  for (std::uint32_t s = 0; s < count; ++s) {
    const SurfacePatch patch = patch_of(scene, s, cell_size);
    for (std::int32_t u = 0; u < patch.nu; ++u) {
      for (std::int32_t v = 0; v < patch.nv; ++v) cells.push_back({s, u, v});
    }
  }
  return cells;
}

Color tint_color(Color base, double strength) {
  if (!(strength > 0.0)) throw std::invalid_argument("tint strength must be positive");
  const double s = std::min(strength, 1.0);
  constexpr Color kCounterTone{255 - kSepia.r, 255 - kSepia.g, 255 - kSepia.b};
  Color out = blend(base, kSepia, s);
  if (out == base) out = blend(base, kCounterTone, s);
  if (out == base) out.r = base.r < 255 ? base.r + 1 : base.r - 1;
  return out;
}

MeshModel::MeshModel(double cell_size, double tint_strength)
    : cell_size_(cell_size), tint_strength_(tint_strength) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("mesh cell size must be positive");
  if (!(tint_strength > 0.0 && tint_strength <= 1.0)) {
    throw std::invalid_argument("mesh tint strength must be in (0, 1]");
  }
}

void MeshModel::insert(const CellKey& key) {
  if (key.surface >= grids_.size()) grids_.resize(key.surface + std::size_t{1});
  Grid& g = grids_[key.surface];
  if (g.nu == 0) {
    g = Grid{key.u, key.v, 1, 1, {0}};
  } else if (key.u < g.u0 || key.u >= g.u0 + g.nu || key.v < g.v0 || key.v >= g.v0 + g.nv) {
    // Grow to cover the key with room to spare so repeated growth stays cheap.
    auto grow = [](std::int32_t lo, std::int32_t n, std::int32_t k, std::int32_t& new_lo,
                   std::int32_t& new_n) {
      using Limits = std::numeric_limits<std::int32_t>;
      std::int64_t low = std::min(lo, k);
      std::int64_t high = std::max<std::int64_t>(std::int64_t{lo} + n, std::int64_t{k} + 1);
      if (k < lo) {
        low = std::max<std::int64_t>(low - n, Limits::min());
      } else {
        high = std::min<std::int64_t>(high + n, Limits::max());
      }
      new_lo = static_cast<std::int32_t>(low);
      new_n = static_cast<std::int32_t>(high - low);
    };
    Grid bigger;
    const bool u_out = key.u < g.u0 || key.u >= g.u0 + g.nu;
    const bool v_out = key.v < g.v0 || key.v >= g.v0 + g.nv;
    bigger.u0 = g.u0;
    bigger.nu = g.nu;
    bigger.v0 = g.v0;
    bigger.nv = g.nv;
    if (u_out) grow(g.u0, g.nu, key.u, bigger.u0, bigger.nu);
    if (v_out) grow(g.v0, g.nv, key.v, bigger.v0, bigger.nv);
    bigger.occupied.assign(static_cast<std::size_t>(bigger.nu) * bigger.nv, 0);
    for (std::int32_t u = 0; u < g.nu; ++u) {
      for (std::int32_t v = 0; v < g.nv; ++v) {
        const std::size_t to = static_cast<std::size_t>(u + g.u0 - bigger.u0) * bigger.nv +
                               static_cast<std::size_t>(v + g.v0 - bigger.v0);
        bigger.occupied[to] = g.occupied[static_cast<std::size_t>(u) * g.nv + v];
      }
    }
    g = std::move(bigger);
  }
  std::uint8_t& cell = g.occupied[static_cast<std::size_t>(key.u - g.u0) * g.nv +
                                  static_cast<std::size_t>(key.v - g.v0)];
  if (cell == 0) {
    cell = 1;
    ++count_;
  }
}

std::vector<CellKey> MeshModel::cells() const {
  std::vector<CellKey> out;
  out.reserve(count_);
  for (std::size_t s = 0; s < grids_.size(); ++s) {
    const Grid& g = grids_[s];
    for (std::int32_t u = 0; u < g.nu; ++u) {
      for (std::int32_t v = 0; v < g.nv; ++v) {
        if (g.occupied[static_cast<std::size_t>(u) * g.nv + v] != 0) {
          out.push_back({static_cast<std::uint32_t>(s), g.u0 + u, g.v0 + v});
        }
      }
    }
  }
  return out;
}

bool operator==(const MeshModel& a, const MeshModel& b) {
  return a.cell_size_ == b.cell_size_ && a.tint_strength_ == b.tint_strength_ &&
         a.count_ == b.count_ && a.cells() == b.cells();
}

MeshModel scan_mesh(MeshModel mesh, const SceneModel& scene, const PointCloudFrame& frame) {
  const std::vector<SurfacePatch> patches = all_patches(scene, mesh.cell_size());
  const Eigen::Matrix3d rot = frame.capture_pose.rotation().toRotationMatrix();
  const Vec3& origin = frame.capture_pose.translation();
  for (const CloudPoint& p : frame.points) {
    mesh.insert(cell_in_patch(patches.at(p.surface), p.surface, rot * p.position + origin));
  }
  return mesh;
}

MeshModel prescanned_mesh(const SceneModel& scene, double cell_size, double tint_strength) {
  MeshModel mesh(cell_size, tint_strength);
  for (const CellKey& k : all_surface_cells(scene, cell_size)) mesh.insert(k);
  return mesh;
}

namespace {

// Distance from p to the nearest point on any scene surface.
double distance_to_surfaces(const SceneModel& scene, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Box& b : scene.boxes) {
    const Vec3 outside = (b.min - p).cwiseMax(p - b.max).cwiseMax(0.0);
    const double inside = std::min((p - b.min).minCoeff(), (b.max - p).minCoeff());
    best = std::min(best, inside > 0.0 ? inside : outside.norm());
  }
  for (const Rect& r : scene.planes) {
    const int u = (r.axis + 1) % 3;
    const int v = (r.axis + 2) % 3;
    const double du = std::max({r.min.x() - p[u], p[u] - r.max.x(), 0.0});
    const double dv = std::max({r.min.y() - p[v], p[v] - r.max.y(), 0.0});
    const double da = p[r.axis] - r.offset;
    best = std::min(best, std::sqrt(du * du + dv * dv + da * da));
  }
  return best;
}

// Rejects eye rays whose hit cannot land in the camera frustum. With the eye
// `offset` from the camera and every surface at least `clearance` away, the
// camera sees the hit within asin(offset / clearance) of the eye ray.
class LiveBound {
 public:
  LiveBound(const CameraModel& cam, double offset, double clearance)
      : ty_(std::tan(deg2rad(cam.horizontal_fov_deg) / 2.0)),
        tz_(std::tan(deg2rad(cam.vertical_fov_deg) / 2.0)),
        ny_(std::sqrt(1.0 + ty_ * ty_)),
        nz_(std::sqrt(1.0 + tz_ * tz_)),
        enabled_(2.0 * offset < clearance) {
    if (enabled_) margin_ = 2.0 * std::sin(std::asin(offset / clearance) / 2.0) + 1e-9;
  }
  /// False only when no point along unit direction `u` (camera frame) can be live.
  bool may_be_live(const Vec3& u) const {
    if (!enabled_) return true;
    return (ty_ * u.x() - std::abs(u.y())) >= -margin_ * ny_ &&
           (tz_ * u.x() - std::abs(u.z())) >= -margin_ * nz_;
  }

 private:
  double ty_;
  double tz_;
  double ny_;
  double nz_;
  bool enabled_;
  double margin_ = 0.0;
};

}  // namespace

CoverageImage classify_coverage_image(const SceneModel& scene, const MeshModel& mesh,
                                      const CameraModel& hmd, const Pose& hmd_pose,
                                      const PointCloudFrame& last_frame,
                                      const CoverageOptions& options) {
  hmd.validate();
  const CameraModel& cam = last_frame.camera;
  const Frustum cam_frustum(cam);
  const Eigen::Matrix3d to_camera = last_frame.capture_pose.rotation().toRotationMatrix().transpose();
  const Vec3& cam_origin = last_frame.capture_pose.translation();
  const Tracer tracer(scene);

  const Tracer cam_tracer =
      tracer.culled(cam_origin, to_camera.transpose(), cam_frustum.ty, cam_frustum.tz);

  // Live if the capture camera had a clear line of sight to the point.
  auto seen_live = [&](const Vec3& p) {
    const Vec3 pc = to_camera * (p - cam_origin);
    if (!cam_frustum.contains(pc)) return false;
    const double dist = pc.norm();
    if (dist > cam.max_range) return false;
    const double tol = 1e-6 * std::max(1.0, dist);
    return !cam_tracer.blocked(Ray(cam_origin, (p - cam_origin) / dist), dist - tol);
  };

  const RayGrid& grid = ray_grid(hmd);
  const Eigen::Matrix3d hmd_rot = hmd_pose.rotation().toRotationMatrix();
  const Frustum hmd_frustum(hmd);
  const Tracer eye_tracer =
      tracer.culled(hmd_pose.translation(), hmd_rot, hmd_frustum.ty, hmd_frustum.tz);
  const Eigen::Matrix3d hmd_to_camera = to_camera * hmd_rot;
  const LiveBound bound(cam, (hmd_pose.translation() - cam_origin).norm(),
                        distance_to_surfaces(scene, cam_origin));
  std::vector<SurfacePatch> patches;
  std::vector<Color> tints;
  if (options.use_mesh) {
    patches = all_patches(scene, mesh.cell_size());
    for (std::uint32_t s = 0; s < scene.surface_count(); ++s) {
      tints.push_back(mesh.tinted(scene.surface_color(s)));
    }
  }
  CoverageImage image;
  image.cols = hmd.cols;
  image.rows = hmd.rows;
  const std::size_t n = grid.directions.size();
  image.labels.resize(n, CoverageLabel::Blank);
  image.colors.resize(n, kBlankColor);

  double live = 0.0;
  double meshed = 0.0;
  double blank = 0.0;
  SurfaceHit hit;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = grid.weights[i];
    const Vec3& d_hmd = grid.directions[i];
    // A head-locked display has nothing outside the camera's frustum but mesh.
    const bool in_view = (!options.head_locked || cam_frustum.contains(d_hmd)) &&
                         bound.may_be_live(hmd_to_camera * d_hmd);
    if (!in_view && !options.use_mesh) {
      blank += w;
      continue;
    }
    const bool found =
        eye_tracer.nearest(Ray(hmd_pose.translation(), hmd_rot * d_hmd), hmd.max_range, hit);
    if (found && in_view && seen_live(hit.point)) {
      image.labels[i] = CoverageLabel::Live;
      image.colors[i] = hit.color;
      live += w;
    } else if (found && options.use_mesh &&
               mesh.contains(cell_in_patch(patches[hit.surface], hit.surface, hit.point))) {
      image.labels[i] = CoverageLabel::Mesh;
      image.colors[i] = tints[hit.surface];
      meshed += w;
    } else {
      blank += w;
    }
  }
  const double total = live + meshed + blank;
  image.report.live_fraction = live / total;
  image.report.mesh_fraction = meshed / total;
  image.report.blank_fraction = blank / total;
  return image;
}

CoverageReport classify_coverage(const SceneModel& scene, const MeshModel& mesh,
                                 const CameraModel& hmd, const Pose& hmd_pose,
                                 const PointCloudFrame& last_frame,
                                 const CoverageOptions& options) {
  return classify_coverage_image(scene, mesh, hmd, hmd_pose, last_frame, options).report;
}

double billboard_distortion(const Vec3& scene_point, const Pose& camera_pose,
                            const Pose& hmd_pose, double billboard_depth) {
  if (!(billboard_depth > 0.0)) throw std::invalid_argument("billboard depth must be positive");
  const Vec3 pc = apply(inverse(camera_pose), scene_point);
  if (!(pc.x() > 0.0)) throw PointBehindCamera("scene point is behind the camera");
  // From the camera center both points lie on one ray.
  if (hmd_pose.translation() == camera_pose.translation()) return 0.0;
  const Vec3 eye = apply(inverse(camera_pose), hmd_pose.translation());
  const Vec3 a = pc * (billboard_depth / pc.x()) - eye;
  const Vec3 b = pc - eye;
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace televiz
