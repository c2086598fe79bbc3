#pragma once

// Brute-force reference implementations used only by the tests. Each one is
// deliberately slow and shares no code with the library routine it checks.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "shadowtrack/geometry.hpp"
#include "shadowtrack/models.hpp"

namespace oracle {

using shadowtrack::geometry::Point2D;

inline double turn(Point2D a, Point2D b, Point2D c) {
  return (b.east - a.east) * (c.north - a.north) - (b.north - a.north) * (c.east - a.east);
}

/// Winding number of a closed ring around p; nonzero means inside.
inline int winding_number(Point2D p, std::span<const Point2D> ring) {
  int wn = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2D a = ring[i];
    const Point2D b = ring[(i + 1) % ring.size()];
    if (a.north <= p.north) {
      if (b.north > p.north && turn(a, b, p) > 0) ++wn;
    } else if (b.north <= p.north && turn(a, b, p) < 0) {
      --wn;
    }
  }
  return wn;
}

/// Distance from p to segment ab.
inline double segment_distance(Point2D p, Point2D a, Point2D b) {
  const double dx = b.east - a.east, dy = b.north - a.north;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.east - a.east) * dx + (p.north - a.north) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.east - (a.east + t * dx), p.north - (a.north + t * dy));
}

inline double boundary_distance(Point2D p, std::span<const Point2D> ring) {
  double d = INFINITY;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    d = std::min(d, segment_distance(p, ring[i], ring[(i + 1) % ring.size()]));
  }
  return d;
}

/// Points of `pts` that are not inside the closed hull of the others:
/// not in any closed triangle of three other points, nor on a segment between
/// two others. O(n^4).
inline std::vector<Point2D> hull_vertices(std::span<const Point2D> pts) {
  std::vector<Point2D> out;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2D p = pts[i];
    bool interior = false;
    for (std::size_t a = 0; a < n && !interior; ++a) {
      if (a == i || pts[a] == p) continue;
      for (std::size_t b = a + 1; b < n && !interior; ++b) {
        if (b == i || pts[b] == p) continue;
        // On the closed segment ab.
        if (turn(pts[a], pts[b], p) == 0.0 &&
            std::min(pts[a].east, pts[b].east) <= p.east && p.east <= std::max(pts[a].east, pts[b].east) &&
            std::min(pts[a].north, pts[b].north) <= p.north && p.north <= std::max(pts[a].north, pts[b].north)) {
          interior = true;
          break;
        }
        for (std::size_t c = b + 1; c < n; ++c) {
          if (c == i || pts[c] == p) continue;
          const double o1 = turn(pts[a], pts[b], p);
          const double o2 = turn(pts[b], pts[c], p);
          const double o3 = turn(pts[c], pts[a], p);
          if ((o1 >= 0 && o2 >= 0 && o3 >= 0) || (o1 <= 0 && o2 <= 0 && o3 <= 0)) {
            if (turn(pts[a], pts[b], pts[c]) != 0.0) {
              interior = true;
              break;
            }
          }
        }
      }
    }
    if (!interior && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

/// Ray-march visibility: true if any of the dense samples along the segment
/// sensor -> p (restricted to the obstacle's box) lies in the obstacle.
inline bool ray_blocked(Point2D sensor, Point2D p, std::span<const Point2D> obstacle, double step) {
  double lo_e = INFINITY, lo_n = INFINITY, hi_e = -INFINITY, hi_n = -INFINITY;
  for (Point2D v : obstacle) {
    lo_e = std::min(lo_e, v.east);
    hi_e = std::max(hi_e, v.east);
    lo_n = std::min(lo_n, v.north);
    hi_n = std::max(hi_n, v.north);
  }
  // Parameter interval where the segment is inside the bounding box (slab method).
  double t0 = 0.0, t1 = 1.0;
  const double d[2] = {p.east - sensor.east, p.north - sensor.north};
  const double o[2] = {sensor.east, sensor.north};
  const double lo[2] = {lo_e, lo_n}, hi[2] = {hi_e, hi_n};
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0.0) {
      if (o[axis] < lo[axis] || o[axis] > hi[axis]) return false;
      continue;
    }
    double a = (lo[axis] - o[axis]) / d[axis];
    double b = (hi[axis] - o[axis]) / d[axis];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (t0 > t1) return false;
  const double length = std::hypot(d[0], d[1]);
  const int samples = std::max(2, static_cast<int>(std::ceil((t1 - t0) * length / step)) + 1);
  for (int s = 0; s < samples; ++s) {
    const double t = t0 + (t1 - t0) * s / (samples - 1);
    const Point2D q{o[0] + t * d[0], o[1] + t * d[1]};
    if (winding_number(q, obstacle) != 0) return true;
  }
  return false;
}

/// OSPA by enumerating every assignment of the smaller set into the larger.
inline double ospa_permutations(std::vector<Point2D> x, std::vector<Point2D> y, double c, double p) {
  if (x.empty() && y.empty()) return 0.0;
  if (x.size() > y.size()) std::swap(x, y);
  const std::size_t m = x.size(), n = y.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = std::min(c, std::hypot(x[i].east - y[perm[i]].east, x[i].north - y[perm[i]].north));
      s += std::pow(d, p);
    }
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow((best + std::pow(c, p) * static_cast<double>(n - m)) / static_cast<double>(n), 1.0 / p);
}

/// Noiseless coordinated turn integrated with classical RK4.
inline shadowtrack::models::TargetState rk4_turn(shadowtrack::models::TargetState x, double T, int substeps) {
  const double w = x.omega;
  auto f = [w](const double s[4], double out[4]) {
    out[0] = s[1];
    out[1] = -w * s[3];
    out[2] = s[3];
    out[3] = w * s[1];
  };
  double s[4] = {x.p_east, x.v_east, x.p_north, x.v_north};
  const double h = T / substeps;
  for (int i = 0; i < substeps; ++i) {
    double k1[4], k2[4], k3[4], k4[4], t[4];
    f(s, k1);
    for (int j = 0; j < 4; ++j) t[j] = s[j] + 0.5 * h * k1[j];
    f(t, k2);
    for (int j = 0; j < 4; ++j) t[j] = s[j] + 0.5 * h * k2[j];
    f(t, k3);
    for (int j = 0; j < 4; ++j) t[j] = s[j] + h * k3[j];
    f(t, k4);
    for (int j = 0; j < 4; ++j) s[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return {s[0], s[1], s[2], s[3], w};
}

/// Exact existence recursion when no particle receives measurement support:
/// predict with (p_b, p_s), then q = (1 - D) q_pred / (1 - D q_pred).
inline std::vector<double> existence_decay(double q0, double p_birth, double p_survive, double delta, int steps) {
  std::vector<double> out;
  double q = q0;
  for (int i = 0; i < steps; ++i) {
    const double qp = p_birth * (1.0 - q) + p_survive * q;
    q = (1.0 - delta) * qp / (1.0 - delta * qp);
    out.push_back(q);
  }
  return out;
}

}  // namespace oracle
