#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shadowtrack/geometry.hpp"

namespace shadowtrack::metrics {

using geometry::Point2D;

struct OspaParams {
  double cutoff = 100.0;  // c, meters
  double order = 1.0;     // p

  void validate() const;
};

/// Largest set size ospa() accepts; the assignment is solved exactly.
inline constexpr std::size_t kMaxOspaCardinality = 8;

/// Optimal subpattern assignment distance with cutoff c and order p.
/// Symmetric; two empty sets give 0. Throws std::invalid_argument for sets
/// larger than kMaxOspaCardinality.
double ospa(std::span<const Point2D> truth, std::span<const Point2D> estimates, const OspaParams& params);

/// One step of one run, as consumed by aggregate().
struct RunStep {
  int k = 0;
  double q = 0.0;
  double ospa = 0.0;
  int truth_cardinality = 0;
  bool truth_los = false;
};

struct StepMetrics {
  int k = 0;
  double q_mean = 0.0;
  double ospa_mean = 0.0;
  int truth_cardinality = 0;
  bool truth_los = false;
};

/// Per-step means over runs. Throws std::invalid_argument if there are no
/// runs or the runs differ in length.
std::vector<StepMetrics> aggregate(std::span<const std::vector<RunStep>> runs);

}  // namespace shadowtrack::metrics
