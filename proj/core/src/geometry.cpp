#include "shadowtrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "shadowtrack/log.hpp"

namespace shadowtrack::geometry {

namespace {

// WGS-84 ellipsoid.
constexpr double kSemiMajor = 6378137.0;
constexpr double kFlattening = 1.0 / 298.257223563;
constexpr double kEccSq = kFlattening * (2.0 - kFlattening);

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

struct Ecef {
  double x, y, z;
};

Ecef to_ecef(const GeodeticCoord& g) {
  const double lat = deg2rad(g.latitude);
  const double lon = deg2rad(g.longitude);
  const double s = std::sin(lat);
  const double n = kSemiMajor / std::sqrt(1.0 - kEccSq * s * s);
  return {(n + g.altitude) * std::cos(lat) * std::cos(lon),
          (n + g.altitude) * std::cos(lat) * std::sin(lon),
          (n * (1.0 - kEccSq) + g.altitude) * s};
}

GeodeticCoord from_ecef(const Ecef& e) {
  const double lon = std::atan2(e.y, e.x);
  const double p = std::hypot(e.x, e.y);
  double lat = std::atan2(e.z, p * (1.0 - kEccSq));
  double h = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double s = std::sin(lat);
    const double n = kSemiMajor / std::sqrt(1.0 - kEccSq * s * s);
    h = p / std::cos(lat) - n;
    lat = std::atan2(e.z, p * (1.0 - kEccSq * n / (n + h)));
  }
  return {rad2deg(lon), rad2deg(lat), h};
}

void check_geodetic(const GeodeticCoord& g) {
  if (!std::isfinite(g.longitude) || !std::isfinite(g.latitude) || !std::isfinite(g.altitude) ||
      g.longitude < -180.0 || g.longitude > 180.0 || g.latitude < -90.0 || g.latitude > 90.0) {
    throw GeometryError("geodetic coordinate out of range");
  }
}

double signed_area(std::span<const Point2D> v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    twice += cross(v[i], v[(i + 1) % v.size()]);
  }
  return 0.5 * twice;
}

// True if the open segments (a,b) and (c,d) cross at a single interior point.
bool segments_cross(Point2D a, Point2D b, Point2D c, Point2D d) {
  const double o1 = 0.5 * orient(a, b, c);
  const double o2 = 0.5 * orient(a, b, d);
  const double o3 = 0.5 * orient(c, d, a);
  const double o4 = 0.5 * orient(c, d, b);
  const auto strictly_opposite = [](double x, double y) {
    return (x > kAreaEpsilon && y < -kAreaEpsilon) || (x < -kAreaEpsilon && y > kAreaEpsilon);
  };
  return strictly_opposite(o1, o2) && strictly_opposite(o3, o4);
}

bool on_segment(Point2D p, Point2D a, Point2D b) {
  if (std::abs(0.5 * orient(a, b, p)) > kAreaEpsilon) {
    return false;
  }
  return p.east >= std::min(a.east, b.east) - 1e-12 && p.east <= std::max(a.east, b.east) + 1e-12 &&
         p.north >= std::min(a.north, b.north) - 1e-12 && p.north <= std::max(a.north, b.north) + 1e-12;
}

std::vector<Point2D> drop_near_duplicates(std::vector<Point2D> v, double tol) {
  std::vector<Point2D> out;
  out.reserve(v.size());
  for (const Point2D& p : v) {
    if (out.empty() || distance(out.back(), p) > tol) {
      out.push_back(p);
    }
  }
  while (out.size() > 1 && distance(out.front(), out.back()) <= tol) {
    out.pop_back();
  }
  return out;
}

// Signed distance-style test against every edge line of a convex CCW polygon.
bool inside_convex_with_slack(Point2D p, const Polygon2D& convex, double slack) {
  const auto v = convex.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2D a = v[i];
    const Point2D b = v[(i + 1) % v.size()];
    if (orient(a, b, p) / distance(a, b) < -slack) {
      return false;
    }
  }
  return true;
}

std::optional<Polygon2D> try_cast_shadow(const Polygon2D& obstacle, Point2D sensor,
                                         const Polygon2D& boundary);

}  // namespace

EnuCoord geodetic_to_enu(const GeodeticCoord& coord, const GeodeticCoord& ref) {
  check_geodetic(coord);
  check_geodetic(ref);
  const Ecef p = to_ecef(coord);
  const Ecef o = to_ecef(ref);
  const double dx = p.x - o.x;
  const double dy = p.y - o.y;
  const double dz = p.z - o.z;
  const double lat = deg2rad(ref.latitude);
  const double lon = deg2rad(ref.longitude);
  const double sl = std::sin(lat), cl = std::cos(lat);
  const double so = std::sin(lon), co = std::cos(lon);
  EnuCoord out;
  out.horizontal.east = -so * dx + co * dy;
  out.horizontal.north = -sl * co * dx - sl * so * dy + cl * dz;
  out.up = cl * co * dx + cl * so * dy + sl * dz;
  return out;
}

GeodeticCoord enu_to_geodetic(const EnuCoord& enu, const GeodeticCoord& ref) {
  check_geodetic(ref);
  const Ecef o = to_ecef(ref);
  const double lat = deg2rad(ref.latitude);
  const double lon = deg2rad(ref.longitude);
  const double sl = std::sin(lat), cl = std::cos(lat);
  const double so = std::sin(lon), co = std::cos(lon);
  const double e = enu.horizontal.east, n = enu.horizontal.north, u = enu.up;
  const Ecef p{o.x - so * e - sl * co * n + cl * co * u, o.y + co * e - sl * so * n + cl * so * u,
               o.z + cl * n + sl * u};
  return from_ecef(p);
}

// --- Polygon2D -------------------------------------------------------------

Polygon2D::Polygon2D(std::vector<Point2D> vertices) {
  for (const Point2D& p : vertices) {
    if (!std::isfinite(p.east) || !std::isfinite(p.north)) {
      throw GeometryError("polygon vertex is not finite");
    }
  }
  vertices_ = drop_near_duplicates(std::move(vertices), 1e-9);
  if (vertices_.size() < 3) {
    throw GeometryError("polygon needs at least 3 distinct vertices");
  }
  double a = signed_area(vertices_);
  if (std::abs(a) <= kAreaEpsilon) {
    throw GeometryError("polygon has zero area");
  }
  if (a < 0.0) {
    std::reverse(vertices_.begin(), vertices_.end());
    a = -a;
  }
  area_ = a;

  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) {
        continue;  // adjacent through the closing edge
      }
      if (segments_cross(vertices_[i], vertices_[i + 1], vertices_[j], vertices_[(j + 1) % n])) {
        throw GeometryError("polygon is self-intersecting");
      }
    }
  }

  convex_ = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (0.5 * orient(vertices_[(i + n - 1) % n], vertices_[i], vertices_[(i + 1) % n]) < -kAreaEpsilon) {
      convex_ = false;
      break;
    }
  }

  bounds_ = {vertices_[0].east, vertices_[0].north, vertices_[0].east, vertices_[0].north};
  for (const Point2D& p : vertices_) {
    bounds_.min_east = std::min(bounds_.min_east, p.east);
    bounds_.min_north = std::min(bounds_.min_north, p.north);
    bounds_.max_east = std::max(bounds_.max_east, p.east);
    bounds_.max_north = std::max(bounds_.max_north, p.north);
  }
}

Point2D Polygon2D::centroid() const {
  double cx = 0.0, cy = 0.0, twice = 0.0;
  const std::size_t n = vertices_.size();
  // Relative to the first vertex to limit cancellation on far-off polygons.
  const Point2D o = vertices_[0];
  for (std::size_t i = 0; i < n; ++i) {
    const Point2D a = vertices_[i] - o;
    const Point2D b = vertices_[(i + 1) % n] - o;
    const double c = cross(a, b);
    twice += c;
    cx += (a.east + b.east) * c;
    cy += (a.north + b.north) * c;
  }
  return o + Point2D{cx / (3.0 * twice), cy / (3.0 * twice)};
}

bool point_in_polygon(Point2D p, const Polygon2D& poly) {
  if (!poly.bounds().contains(p, 1e-9)) {
    return false;
  }
  const auto v = poly.vertices();
  const std::size_t n = v.size();
  if (poly.is_convex()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (0.5 * orient(v[i], v[(i + 1) % n], p) < -kAreaEpsilon) {
        return false;
      }
    }
    return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2D a = v[j];
    const Point2D b = v[i];
    if (on_segment(p, a, b)) {
      return true;
    }
    if ((b.north > p.north) != (a.north > p.north)) {
      const double t = (p.north - b.north) / (a.north - b.north);
      if (p.east < b.east + t * (a.east - b.east)) {
        inside = !inside;
      }
    }
  }
  return inside;
}

Polygon2D convex_hull(std::span<const Point2D> points) {
  std::vector<Point2D> pts(points.begin(), points.end());
  for (const Point2D& p : pts) {
    if (!std::isfinite(p.east) || !std::isfinite(p.north)) {
      throw GeometryError("hull input is not finite");
    }
  }
  std::sort(pts.begin(), pts.end(), [](Point2D a, Point2D b) {
    return a.east < b.east || (a.east == b.east && a.north < b.north);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    throw GeometryError("convex hull needs at least 3 distinct points");
  }
  std::vector<Point2D> hull(2 * pts.size());
  std::size_t k = 0;
  const auto turn_ok = [&](Point2D p) {
    return 0.5 * orient(hull[k - 2], hull[k - 1], p) > kAreaEpsilon;
  };
  for (const Point2D& p : pts) {
    while (k >= 2 && !turn_ok(p)) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && !turn_ok(pts[i])) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) {
    throw GeometryError("convex hull input is collinear");
  }
  return Polygon2D(std::move(hull));
}

std::vector<Point2D> clip_to_convex(std::span<const Point2D> subject, const Polygon2D& clip) {
  if (!clip.is_convex()) {
    throw GeometryError("clip polygon must be convex");
  }
  std::vector<Point2D> out(subject.begin(), subject.end());
  const auto c = clip.vertices();
  for (std::size_t e = 0; e < c.size() && !out.empty(); ++e) {
    const Point2D a = c[e];
    const Point2D b = c[(e + 1) % c.size()];
    std::vector<Point2D> in = std::move(out);
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Point2D p = in[i];
      const Point2D q = in[(i + 1) % in.size()];
      const double op = orient(a, b, p);
      const double oq = orient(a, b, q);
      const bool p_in = 0.5 * op >= -kAreaEpsilon;
      const bool q_in = 0.5 * oq >= -kAreaEpsilon;
      if (p_in) {
        out.push_back(p);
      }
      if (p_in != q_in) {
        const double t = op / (op - oq);
        out.push_back(p + t * (q - p));
      }
    }
  }
  out = drop_near_duplicates(std::move(out), 1e-9);
  if (out.size() < 3 || std::abs(signed_area(out)) <= kAreaEpsilon) {
    return {};
  }
  return out;
}

namespace {

std::optional<Polygon2D> try_cast_shadow(const Polygon2D& obstacle, Point2D sensor,
                                         const Polygon2D& boundary) {
  if (!boundary.is_convex()) {
    throw GeometryError("surveillance boundary must be convex");
  }
  if (!obstacle.is_convex()) {
    throw GeometryError("shadow casting needs a convex obstacle");
  }
  if (point_in_polygon(sensor, obstacle)) {
    throw GeometryError("sensor is not strictly outside the obstacle");
  }
  const auto v = obstacle.vertices();
  const std::size_t n = v.size();

  // An edge faces the sensor when the sensor lies on its outer (right) side.
  std::vector<bool> front(n);
  for (std::size_t i = 0; i < n; ++i) {
    front[i] = 0.5 * orient(v[i], v[(i + 1) % n], sensor) < -kAreaEpsilon;
  }
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (front[(i + n - 1) % n] && !front[i]) {
      start = i;
      break;
    }
  }
  if (start == n) {
    throw GeometryError("could not find obstacle silhouette");
  }

  // Far-side chain between the two silhouette vertices, in increasing azimuth.
  std::vector<Point2D> ring;
  std::size_t idx = start;
  ring.push_back(v[idx]);
  while (!front[idx]) {
    idx = (idx + 1) % n;
    ring.push_back(v[idx]);
  }

  double reach = 0.0;
  for (const Point2D& p : boundary.vertices()) reach = std::max(reach, distance(sensor, p));
  for (const Point2D& p : v) reach = std::max(reach, distance(sensor, p));
  reach = 4.0 * reach + 1.0;

  const Point2D first = ring.front() - sensor;
  const Point2D last = ring.back() - sensor;
  const double span = std::atan2(cross(first, last), dot(first, last));
  const double last_angle = std::atan2(last.north, last.east);
  const int segments = std::max(1, static_cast<int>(std::ceil(std::abs(span) / (std::numbers::pi / 6.0))));
  const double step = span / segments;
  const double radius = reach / std::cos(0.5 * step);
  // Sweep back from the last silhouette ray to the first one, far outside the boundary.
  for (int s = 0; s <= segments; ++s) {
    const double a = last_angle - s * step;
    ring.push_back(sensor + radius * Point2D{std::cos(a), std::sin(a)});
  }

  std::vector<Point2D> clipped = clip_to_convex(ring, boundary);
  if (clipped.empty()) {
    return std::nullopt;
  }
  return Polygon2D(std::move(clipped));
}

}  // namespace

Polygon2D cast_shadow(const Polygon2D& obstacle, Point2D sensor, const Polygon2D& boundary) {
  auto shadow = try_cast_shadow(obstacle, sensor, boundary);
  if (!shadow) {
    throw GeometryError("shadow lies entirely outside the surveillance boundary");
  }
  return std::move(*shadow);
}

Polygon2D rectangle(Point2D min_corner, Point2D max_corner) {
  if (!(max_corner.east > min_corner.east) || !(max_corner.north > min_corner.north)) {
    throw GeometryError("rectangle corners must be ordered min < max");
  }
  return Polygon2D({min_corner,
                    {max_corner.east, min_corner.north},
                    max_corner,
                    {min_corner.east, max_corner.north}});
}

Polygon2D regular_polygon(Point2D center, double circumradius, int sides) {
  if (sides < 3 || !(circumradius > 0.0)) {
    throw GeometryError("regular polygon needs >= 3 sides and a positive radius");
  }
  std::vector<Point2D> v;
  v.reserve(static_cast<std::size_t>(sides));
  for (int i = 0; i < sides; ++i) {
    const double a = 2.0 * std::numbers::pi * i / sides;
    v.push_back(center + circumradius * Point2D{std::cos(a), std::sin(a)});
  }
  return Polygon2D(std::move(v));
}

// --- GeoModel --------------------------------------------------------------

GeoModel::GeoModel(Point2D sensor, double sensor_height, std::vector<Polygon2D> obstacles,
                   std::vector<Polygon2D> shadows, Polygon2D boundary)
    : sensor_(sensor),
      sensor_height_(sensor_height),
      obstacles_(std::move(obstacles)),
      shadows_(std::move(shadows)),
      boundary_(std::move(boundary)) {
  if (!std::isfinite(sensor_.east) || !std::isfinite(sensor_.north) || !std::isfinite(sensor_height_)) {
    throw GeometryError("sensor position is not finite");
  }
  if (!boundary_.is_convex()) {
    throw GeometryError("surveillance boundary must be convex");
  }
  if (!point_in_polygon(sensor_, boundary_)) {
    throw GeometryError("sensor lies outside the surveillance boundary");
  }
  if (obstacles_.size() != shadows_.size()) {
    throw GeometryError("every obstacle needs exactly one shadow");
  }
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    if (!obstacles_[i].is_convex()) {
      throw GeometryError("obstacle " + std::to_string(i) + " is not convex");
    }
    if (point_in_polygon(sensor_, obstacles_[i])) {
      throw GeometryError("sensor lies inside obstacle " + std::to_string(i));
    }
    for (const Point2D& p : shadows_[i].vertices()) {
      if (!inside_convex_with_slack(p, boundary_, 1e-6)) {
        throw GeometryError("shadow " + std::to_string(i) + " extends outside the boundary");
      }
    }
  }
}

bool GeoModel::in_obstacle(Point2D p) const {
  return std::any_of(obstacles_.begin(), obstacles_.end(),
                     [p](const Polygon2D& o) { return point_in_polygon(p, o); });
}

bool GeoModel::in_shadow(Point2D p) const {
  return std::any_of(shadows_.begin(), shadows_.end(),
                     [p](const Polygon2D& s) { return point_in_polygon(p, s); });
}

bool GeoModel::is_los(Point2D p) const {
  return point_in_polygon(p, boundary_) && !in_shadow(p) && !in_obstacle(p);
}

GeoModel build_geo_model(std::span<const BuildingRecord> buildings, Point2D sensor,
                         double sensor_height, double height_threshold, const Polygon2D& boundary) {
  if (!boundary.is_convex()) {
    throw GeometryError("surveillance boundary must be convex");
  }
  std::vector<Polygon2D> obstacles;
  std::vector<Polygon2D> shadows;
  for (std::size_t i = 0; i < buildings.size(); ++i) {
    const BuildingRecord& b = buildings[i];
    if (!(b.roof_height >= b.ground_height)) {
      throw GeometryError("building " + std::to_string(i) + " has roof below ground");
    }
    if (b.roof_height < height_threshold) {
      continue;
    }
    Polygon2D hull = convex_hull(b.footprint);
    if (clip_to_convex(hull.vertices(), boundary).empty()) {
      continue;
    }
    if (point_in_polygon(sensor, hull)) {
      throw GeometryError("sensor lies inside building " + std::to_string(i));
    }
    auto shadow = try_cast_shadow(hull, sensor, boundary);
    if (!shadow) {
      log::warn("building " + std::to_string(i) + " casts no shadow inside the boundary; dropped");
      continue;
    }
    obstacles.push_back(std::move(hull));
    shadows.push_back(std::move(*shadow));
  }
  return GeoModel(sensor, sensor_height, std::move(obstacles), std::move(shadows), boundary);
}

}  // namespace shadowtrack::geometry
