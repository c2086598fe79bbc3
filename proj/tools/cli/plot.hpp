#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shadowtrack::cli {

/// One aggregate CSV row.
struct AggregateRow {
  int k = 0;
  int truth_card = 0;
  bool truth_los = false;
  double q_geo = 0.0;
  double q_nogeo = 0.0;
  double ospa_geo = 0.0;
  double ospa_nogeo = 0.0;
};

/// Throws std::runtime_error naming the offending line.
std::vector<AggregateRow> read_aggregate_csv(std::istream& in);

/// Two stacked panels (existence probability and OSPA against k) with the
/// steps where the target exists outside line of sight shaded.
void write_svg(std::ostream& out, const std::vector<AggregateRow>& rows, double ospa_cutoff);

}  // namespace shadowtrack::cli
