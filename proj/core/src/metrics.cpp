#include "shadowtrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shadowtrack::metrics {

void OspaParams::validate() const {
  if (!(cutoff > 0.0) || !(order >= 1.0)) {
    throw std::invalid_argument("OSPA needs cutoff > 0 and order >= 1");
  }
}

double ospa(std::span<const Point2D> truth, std::span<const Point2D> estimates, const OspaParams& params) {
  params.validate();
  std::span<const Point2D> small = truth;
  std::span<const Point2D> large = estimates;
  if (small.size() > large.size()) std::swap(small, large);
  const std::size_t m = small.size();
  const std::size_t n = large.size();
  if (n == 0) {
    return 0.0;
  }
  if (n > kMaxOspaCardinality) {
    throw std::invalid_argument("OSPA set cardinality exceeds the exact-assignment limit");
  }
  const double c = params.cutoff;
  const double p = params.order;

  // best[mask] = cheapest assignment of the first popcount(mask) small-set
  // points onto the large-set points in mask.
  const std::size_t states = std::size_t{1} << n;
  std::vector<double> best(states, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::size_t mask = 0; mask < states; ++mask) {
    const auto used = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (used >= m || !std::isfinite(best[mask])) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::size_t{1} << j)) continue;
      const double d = std::min(geometry::distance(small[used], large[j]), c);
      const std::size_t next = mask | (std::size_t{1} << j);
      best[next] = std::min(best[next], best[mask] + std::pow(d, p));
    }
  }
  double assignment = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < states; ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) == m) {
      assignment = std::min(assignment, best[mask]);
    }
  }
  const double total = assignment + std::pow(c, p) * static_cast<double>(n - m);
  return std::min(std::pow(total / static_cast<double>(n), 1.0 / p), c);
}

std::vector<StepMetrics> aggregate(std::span<const std::vector<RunStep>> runs) {
  if (runs.empty()) {
    throw std::invalid_argument("aggregate needs at least one run");
  }
  const std::size_t steps = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != steps) {
      throw std::invalid_argument("runs have different lengths");
    }
  }
  std::vector<StepMetrics> out(steps);
  const double count = static_cast<double>(runs.size());
  for (std::size_t k = 0; k < steps; ++k) {
    double q = 0.0, d = 0.0;
    for (const auto& r : runs) {
      q += r[k].q;
      d += r[k].ospa;
    }
    out[k].k = runs.front()[k].k;
    out[k].q_mean = q / count;
    out[k].ospa_mean = d / count;
    out[k].truth_cardinality = runs.front()[k].truth_cardinality;
    out[k].truth_los = runs.front()[k].truth_los;
  }
  return out;
}

}  // namespace shadowtrack::metrics
