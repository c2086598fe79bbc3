#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "shadowtrack/geojson.hpp"
#include "shadowtrack/geometry.hpp"

using namespace shadowtrack::geometry;

namespace {

// Star-shaped random polygon: one jittered angle per sector, random radii.
// Angular gaps stay below pi for n >= 4, so the ring is simple.
std::vector<Point2D> random_star(std::mt19937_64& gen, int n, Point2D c, double r_min, double r_max) {
  std::uniform_real_distribution<double> jitter(0.0, 0.8);
  std::uniform_real_distribution<double> rad(r_min, r_max);
  std::vector<double> a;
  for (int i = 0; i < n; ++i) a.push_back(2.0 * std::numbers::pi * (i + jitter(gen)) / n);
  std::vector<Point2D> out;
  for (double t : a) {
    const double r = rad(gen);
    out.push_back({c.east + r * std::cos(t), c.north + r * std::sin(t)});
  }
  return out;
}

bool same_point_set(std::vector<Point2D> a, std::vector<Point2D> b) {
  const auto less = [](Point2D p, Point2D q) { return p.east < q.east || (p.east == q.east && p.north < q.north); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("polygon normalizes orientation and drops the closing vertex") {
    Polygon2D cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}, {0, 0}});
    CHECK(cw.size() == 4);
    CHECK(cw.area() == doctest::Approx(1.0));
    const auto v = cw.vertices();
    double twice = 0;
    for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
    CHECK(twice > 0);
    CHECK(cw.is_convex());
    CHECK(cw.centroid().east == doctest::Approx(0.5));
  }

  TEST_CASE("polygon rejects degenerate input") {
    CHECK_THROWS_AS(Polygon2D({{0, 0}, {1, 1}}), GeometryError);
    CHECK_THROWS_AS(Polygon2D({{0, 0}, {1, 1}, {2, 2}}), GeometryError);
    CHECK_THROWS_AS(Polygon2D({{0, 0}, {2, 2}, {2, 0}, {0, 2}}), GeometryError);  // bow tie
    CHECK_THROWS_AS(Polygon2D({{0, 0}, {NAN, 1}, {1, 0}}), GeometryError);
  }

  TEST_CASE("point_in_polygon is boundary inclusive") {
    const Polygon2D sq = rectangle({0, 0}, {2, 2});
    CHECK(point_in_polygon({1, 1}, sq));
    CHECK(point_in_polygon({0, 0}, sq));
    CHECK(point_in_polygon({1, 0}, sq));
    CHECK(point_in_polygon({2, 1.5}, sq));
    CHECK_FALSE(point_in_polygon({2.001, 1}, sq));
    const Polygon2D ell({{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 4}, {0, 4}});
    CHECK_FALSE(ell.is_convex());
    CHECK(point_in_polygon({1, 2}, ell));
    CHECK(point_in_polygon({1, 1}, ell));
    CHECK_FALSE(point_in_polygon({2, 2}, ell));
  }

  TEST_CASE("point_in_polygon agrees with the winding-number oracle") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-60.0, 60.0);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto ring = random_star(gen, 3 + trial % 12, {0, 0}, 5.0, 50.0);
      Polygon2D poly(ring);
      for (int s = 0; s < 200; ++s) {
        const Point2D p{u(gen), u(gen)};
        if (oracle::boundary_distance(p, ring) < 1e-6) continue;
        REQUIRE(point_in_polygon(p, poly) == (oracle::winding_number(p, ring) != 0));
        ++checked;
      }
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point2D mid = 0.5 * (ring[i] + ring[(i + 1) % ring.size()]);
        CHECK(point_in_polygon(ring[i], poly));
        CHECK(point_in_polygon(mid, poly));
      }
    }
    CHECK(checked > 30000);
  }

  TEST_CASE("convex_hull matches the brute-force oracle on 100 random sets") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<Point2D> pts;
      const int n = 3 + trial % 28;
      if (trial % 2 == 0) {
        std::uniform_real_distribution<double> u(-100.0, 100.0);
        for (int i = 0; i < n; ++i) pts.push_back({u(gen), u(gen)});
      } else {
        // Small integer grid: duplicates and collinear boundary points.
        std::uniform_int_distribution<int> g(0, 5);
        for (int i = 0; i < n; ++i) pts.push_back({double(g(gen)), double(g(gen))});
      }
      const auto expected = oracle::hull_vertices(pts);
      if (expected.size() < 3) {
        CHECK_THROWS_AS(convex_hull(pts), GeometryError);
        continue;
      }
      const Polygon2D hull = convex_hull(pts);
      const std::vector<Point2D> got(hull.vertices().begin(), hull.vertices().end());
      CHECK(same_point_set(got, expected));
      CHECK(hull.is_convex());
      for (const Point2D& p : pts) CHECK(point_in_polygon(p, hull));
    }
  }

  TEST_CASE("convex_hull is idempotent") {
    std::mt19937_64 gen(3);
    const auto ring = random_star(gen, 20, {10, -5}, 1.0, 30.0);
    const Polygon2D once = convex_hull(ring);
    const Polygon2D twice = convex_hull(once.vertices());
    CHECK(same_point_set({once.vertices().begin(), once.vertices().end()},
                         {twice.vertices().begin(), twice.vertices().end()}));
  }

  TEST_CASE("clip_to_convex") {
    const Polygon2D clip = rectangle({0, 0}, {10, 10});
    const std::vector<Point2D> half{{5, -5}, {15, -5}, {15, 15}, {5, 15}};
    const Polygon2D clipped(clip_to_convex(half, clip));
    CHECK(clipped.area() == doctest::Approx(50.0));
    const std::vector<Point2D> outside{{20, 20}, {30, 20}, {30, 30}};
    CHECK(clip_to_convex(outside, clip).empty());
    const std::vector<Point2D> touching{{10, 0}, {20, 0}, {20, 10}, {10, 10}};
    CHECK(clip_to_convex(touching, clip).empty());
  }

  TEST_CASE("cast_shadow of a square seen along an axis") {
    const Polygon2D boundary = rectangle({-100, -100}, {100, 100});
    const Polygon2D box = rectangle({10, -5}, {20, 5});
    const Polygon2D shadow = cast_shadow(box, {0, 0}, boundary);
    // Far side x = 20 between the silhouette corners (10, +-5), rays out to x = 100.
    CHECK(point_in_polygon({50, 0}, shadow));
    CHECK(point_in_polygon({99, 49}, shadow));
    CHECK_FALSE(point_in_polygon({99, 51}, shadow));
    CHECK_FALSE(point_in_polygon({15, 0}, shadow));  // obstacle interior is not shadow
    CHECK_FALSE(point_in_polygon({5, 0}, shadow));
    // Wedge between the silhouette rays from x = 10 (|y| <= 5) to x = 100 (|y| <= 50), minus the box.
    CHECK(shadow.area() == doctest::Approx(0.5 * (10.0 + 100.0) * 90.0 - 100.0).epsilon(1e-9));
  }

  TEST_CASE("cast_shadow preconditions") {
    const Polygon2D boundary = rectangle({-100, -100}, {100, 100});
    const Polygon2D box = rectangle({10, -5}, {20, 5});
    CHECK_THROWS_AS(cast_shadow(box, {15, 0}, boundary), GeometryError);
    CHECK_THROWS_AS(cast_shadow(box, {10, 0}, boundary), GeometryError);
    const Polygon2D ell({{0, 30}, {4, 30}, {4, 31}, {1, 31}, {1, 34}, {0, 34}});
    CHECK_THROWS_AS(cast_shadow(ell, {0, 0}, boundary), GeometryError);
    const Polygon2D far_box = rectangle({200, 0}, {210, 10});
    CHECK_THROWS_AS(cast_shadow(far_box, {0, 0}, boundary), GeometryError);
  }

  TEST_CASE("cast_shadow agrees with the ray-march oracle") {
    std::mt19937_64 gen(19);
    std::uniform_real_distribution<double> pos(-1500.0, 1500.0);
    const Point2D sensor{37.0, -12.0};
    const Polygon2D rect_boundary = rectangle({-2000, -2000}, {2000, 2000});
    const Polygon2D round_boundary = regular_polygon({0, 0}, 2000.0, 48);
    for (int b = 0; b < 12; ++b) {
      Point2D c{pos(gen), pos(gen)};
      if (distance(c, sensor) < 200) c = c + Point2D{400, 400};
      const Polygon2D obstacle = convex_hull(random_star(gen, 8, c, 20.0, 90.0));
      const Polygon2D& boundary = b % 2 ? round_boundary : rect_boundary;
      const Polygon2D shadow = cast_shadow(obstacle, sensor, boundary);
      const std::vector<Point2D> ring(obstacle.vertices().begin(), obstacle.vertices().end());
      const std::vector<Point2D> sring(shadow.vertices().begin(), shadow.vertices().end());
      const BoundingBox& bb = boundary.bounds();
      std::uniform_real_distribution<double> ue(bb.min_east, bb.max_east), un(bb.min_north, bb.max_north);
      int agree = 0, total = 0;
      while (total < 10000) {
        const Point2D p{ue(gen), un(gen)};
        if (!point_in_polygon(p, boundary) || point_in_polygon(p, obstacle)) continue;
        ++total;
        const bool expected = oracle::ray_blocked(sensor, p, ring, 0.05);
        if (point_in_polygon(p, shadow) == expected) {
          ++agree;
        } else {
          CHECK(oracle::boundary_distance(p, sring) <= 0.2);
        }
      }
      CHECK(agree >= 9990);
    }
  }

  TEST_CASE("shadow is monotone along rays") {
    const Polygon2D boundary = rectangle({-2000, -2000}, {2000, 2000});
    const Polygon2D obstacle({{300, 200}, {380, 220}, {360, 300}, {290, 280}});
    const Polygon2D shadow = cast_shadow(obstacle, {0, 0}, boundary);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-2000, 2000);
    for (int i = 0; i < 5000; ++i) {
      const Point2D p{u(gen), u(gen)};
      if (!point_in_polygon(p, shadow)) continue;
      const Point2D further = 1.3 * p;
      if (point_in_polygon(further, boundary)) CHECK(point_in_polygon(further, shadow));
    }
  }

  TEST_CASE("geodetic conversion") {
    const GeodeticCoord ref{-73.9675, 40.781, 200.0};
    const EnuCoord zero = geodetic_to_enu(ref, ref);
    CHECK(std::abs(zero.horizontal.east) < 1e-6);
    CHECK(std::abs(zero.horizontal.north) < 1e-6);
    CHECK(std::abs(zero.up) < 1e-6);

    const EnuCoord north = geodetic_to_enu({ref.longitude, ref.latitude + 0.001, ref.altitude}, ref);
    CHECK(north.horizontal.north == doctest::Approx(111.0).epsilon(0.5 / 111.0));
    CHECK(std::abs(north.horizontal.east) < 1e-6);
    // One millidegree of longitude shrinks with cos(latitude).
    const EnuCoord east = geodetic_to_enu({ref.longitude + 0.001, ref.latitude, ref.altitude}, ref);
    CHECK(east.horizontal.east == doctest::Approx(111.32 * std::cos(40.781 * std::numbers::pi / 180)).epsilon(0.005));

    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-3000, 3000);
    for (int i = 0; i < 100; ++i) {
      const EnuCoord p{{u(gen), u(gen)}, u(gen) / 30};
      const EnuCoord back = geodetic_to_enu(enu_to_geodetic(p, ref), ref);
      CHECK(distance(back.horizontal, p.horizontal) < 1e-6);
      CHECK(std::abs(back.up - p.up) < 1e-6);
    }
    CHECK_THROWS_AS(geodetic_to_enu({200.0, 0.0, 0.0}, ref), GeometryError);
  }

  TEST_CASE("build_geo_model filters buildings") {
    const Polygon2D boundary = rectangle({-1000, -1000}, {1000, 1000});
    std::vector<BuildingRecord> buildings{
        {{{100, 100}, {150, 100}, {150, 150}, {100, 150}}, 10, 200},   // kept
        {{{-300, 0}, {-250, 0}, {-250, 40}, {-300, 40}}, 10, 100},     // too low
        {{{1500, 0}, {1550, 0}, {1550, 40}}, 0, 300},                  // outside
        {{{0, -400}, {60, -400}, {30, -380}, {60, -350}, {0, -350}}, 5, 115},  // non-convex, exactly at threshold
    };
    const GeoModel model = build_geo_model(buildings, {0, 0}, 200, 115, boundary);
    REQUIRE(model.obstacles().size() == 2);
    REQUIRE(model.shadows().size() == 2);
    for (const Polygon2D& o : model.obstacles()) CHECK(o.is_convex());
    CHECK(model.in_obstacle({120, 120}));
    CHECK_FALSE(model.is_los({120, 120}));
    CHECK(model.in_shadow({500, 500}));
    CHECK_FALSE(model.is_los({500, 500}));
    CHECK(model.is_los({-500, 500}));
    CHECK(model.is_los({-275, 20}));  // low building ignored
    CHECK(model.in_obstacle({45, -380}));  // hull fills the notch
    CHECK_FALSE(model.is_los({1200, 0}));  // outside the boundary

    std::vector<BuildingRecord> around_sensor{{{{-10, -10}, {10, -10}, {10, 10}, {-10, 10}}, 0, 300}};
    CHECK_THROWS_AS(build_geo_model(around_sensor, {0, 0}, 200, 115, boundary), GeometryError);
    std::vector<BuildingRecord> inverted{{{{100, 100}, {150, 100}, {150, 150}}, 50, 20}};
    CHECK_THROWS_AS(build_geo_model(inverted, {0, 0}, 200, 0, boundary), GeometryError);
  }

  TEST_CASE("geo model export round-trips and rebuilding is deterministic") {
    const Polygon2D boundary = regular_polygon({0, 0}, 1500, 32);
    std::vector<BuildingRecord> buildings{
        {{{300, 200}, {380, 220}, {360, 300}, {290, 280}}, 0, 150},
        {{{-400, -100}, {-350, -120}, {-330, -60}}, 0, 180},
    };
    const GeoModel a = build_geo_model(buildings, {10, 10}, 150, 115, boundary);
    const GeoModel b = build_geo_model(buildings, {10, 10}, 150, 115, boundary);
    CHECK(shadowtrack::geojson::export_geo_model(a) == shadowtrack::geojson::export_geo_model(b));
    const std::string text = shadowtrack::geojson::export_geo_model(a);
    const GeoModel c = shadowtrack::geojson::import_geo_model(text);
    CHECK(shadowtrack::geojson::export_geo_model(c) == text);
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(-1500, 1500);
    for (int i = 0; i < 2000; ++i) {
      const Point2D p{u(gen), u(gen)};
      CHECK(a.is_los(p) == c.is_los(p));
    }
  }
}
