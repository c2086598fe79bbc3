#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shadowtrack::geometry {

/// Signed-area tolerance (m^2) used by every orientation predicate.
inline constexpr double kAreaEpsilon = 1e-9;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position in the local East-North plane, meters.
struct Point2D {
  double east = 0.0;
  double north = 0.0;

  friend Point2D operator+(Point2D a, Point2D b) { return {a.east + b.east, a.north + b.north}; }
  friend Point2D operator-(Point2D a, Point2D b) { return {a.east - b.east, a.north - b.north}; }
  friend Point2D operator*(double s, Point2D a) { return {s * a.east, s * a.north}; }
  friend bool operator==(Point2D a, Point2D b) = default;
};

inline double cross(Point2D a, Point2D b) { return a.east * b.north - a.north * b.east; }
inline double dot(Point2D a, Point2D b) { return a.east * b.east + a.north * b.north; }
inline double norm(Point2D a) { return std::hypot(a.east, a.north); }
inline double distance(Point2D a, Point2D b) { return norm(a - b); }

/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
inline double orient(Point2D a, Point2D b, Point2D c) { return cross(b - a, c - a); }

struct GeodeticCoord {
  double longitude = 0.0;  // degrees
  double latitude = 0.0;   // degrees
  double altitude = 0.0;   // meters above the WGS-84 ellipsoid
};

struct EnuCoord {
  Point2D horizontal;
  double up = 0.0;
};

/// WGS-84 geodetic -> ECEF -> local ENU anchored at `ref`.
EnuCoord geodetic_to_enu(const GeodeticCoord& coord, const GeodeticCoord& ref);

/// Inverse of geodetic_to_enu.
GeodeticCoord enu_to_geodetic(const EnuCoord& enu, const GeodeticCoord& ref);

struct BoundingBox {
  double min_east = 0.0, min_north = 0.0, max_east = 0.0, max_north = 0.0;

  [[nodiscard]] bool contains(Point2D p, double slack = 0.0) const {
    return p.east >= min_east - slack && p.east <= max_east + slack &&
           p.north >= min_north - slack && p.north <= max_north + slack;
  }
};

/// Closed simple polygon, stored counter-clockwise without repeating the
/// first vertex. Construction validates and normalizes the input.
class Polygon2D {
 public:
  /// Accepts either orientation and an optional closing duplicate vertex.
  /// Throws GeometryError on fewer than 3 distinct vertices, non-finite
  /// coordinates, zero area or self-intersection.
  explicit Polygon2D(std::vector<Point2D> vertices);

  [[nodiscard]] std::span<const Point2D> vertices() const { return vertices_; }
  [[nodiscard]] std::size_t size() const { return vertices_.size(); }
  [[nodiscard]] double area() const { return area_; }
  [[nodiscard]] bool is_convex() const { return convex_; }
  [[nodiscard]] const BoundingBox& bounds() const { return bounds_; }
  [[nodiscard]] Point2D centroid() const;

 private:
  std::vector<Point2D> vertices_;
  double area_ = 0.0;
  bool convex_ = false;
  BoundingBox bounds_;
};

/// Boundary-inclusive containment test.
bool point_in_polygon(Point2D p, const Polygon2D& poly);

/// Smallest convex polygon containing `points`, counter-clockwise, with no
/// collinear vertices. Throws GeometryError when all points are collinear.
Polygon2D convex_hull(std::span<const Point2D> points);

/// Intersection of `subject` with the convex polygon `clip`. Returns an
/// empty vector if the overlap has no area.
std::vector<Point2D> clip_to_convex(std::span<const Point2D> subject, const Polygon2D& clip);

/// Hard shadow of a convex obstacle seen from `sensor`, clipped to the
/// convex surveillance `boundary`. The polygon runs along the obstacle's far
/// side between the two silhouette vertices and out along the silhouette rays
/// to the boundary. Throws GeometryError if the sensor is not strictly outside
/// the obstacle, if the boundary is not convex, or if the shadow has no area
/// inside the boundary.
Polygon2D cast_shadow(const Polygon2D& obstacle, Point2D sensor, const Polygon2D& boundary);

/// Axis-aligned rectangle boundary.
Polygon2D rectangle(Point2D min_corner, Point2D max_corner);

/// Regular polygon whose first vertex lies due east of the center.
Polygon2D regular_polygon(Point2D center, double circumradius, int sides);

struct BuildingRecord {
  std::vector<Point2D> footprint;  // ENU meters; any order, hull taken later
  double ground_height = 0.0;      // meters
  double roof_height = 0.0;        // meters, same datum as ground_height
};

/// Sensor position, obstacles and their shadows inside a surveillance
/// boundary. Immutable; all queries are const and thread-safe.
class GeoModel {
 public:
  /// Validates every invariant: convex obstacles, one shadow per obstacle,
  /// sensor inside the boundary and outside every obstacle, shadows inside
  /// the boundary, convex boundary.
  GeoModel(Point2D sensor, double sensor_height, std::vector<Polygon2D> obstacles,
           std::vector<Polygon2D> shadows, Polygon2D boundary);

  [[nodiscard]] Point2D sensor() const { return sensor_; }
  [[nodiscard]] double sensor_height() const { return sensor_height_; }
  [[nodiscard]] std::span<const Polygon2D> obstacles() const { return obstacles_; }
  [[nodiscard]] std::span<const Polygon2D> shadows() const { return shadows_; }
  [[nodiscard]] const Polygon2D& boundary() const { return boundary_; }

  [[nodiscard]] bool in_obstacle(Point2D p) const;
  [[nodiscard]] bool in_shadow(Point2D p) const;
  [[nodiscard]] bool is_los(Point2D p) const;

 private:
  Point2D sensor_;
  double sensor_height_;
  std::vector<Polygon2D> obstacles_;
  std::vector<Polygon2D> shadows_;
  Polygon2D boundary_;
};

/// Offline model construction: keep buildings with roof_height at or above
/// `height_threshold` whose footprint overlaps the boundary, replace each by
/// its convex hull and cast one shadow per hull. A retained building whose
/// shadow falls entirely outside the boundary is dropped with a warning.
/// Throws GeometryError if the sensor is inside a retained building.
GeoModel build_geo_model(std::span<const BuildingRecord> buildings, Point2D sensor,
                         double sensor_height, double height_threshold, const Polygon2D& boundary);

inline bool in_obstacle(Point2D p, const GeoModel& model) { return model.in_obstacle(p); }
inline bool is_los(Point2D p, const GeoModel& model) { return model.is_los(p); }

}  // namespace shadowtrack::geometry
