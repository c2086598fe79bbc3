#include "plot.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace shadowtrack::cli {

namespace {

constexpr const char* kHeader = "k,truth_card,truth_los,q_mean_geo,q_mean_nogeo,ospa_mean_geo,ospa_mean_nogeo";

constexpr double kWidth = 720.0;
constexpr double kPanelHeight = 240.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kGap = 60.0;

struct Panel {
  double top;
  double y_max;
  double k_min;
  double k_max;

  [[nodiscard]] double x(double k) const {
    const double span = std::max(k_max - k_min, 1.0);
    return kLeft + (k - k_min) / span * (kWidth - kLeft - kRight);
  }
  [[nodiscard]] double y(double v) const { return top + kPanelHeight * (1.0 - std::clamp(v / y_max, 0.0, 1.0)); }
};

void polyline(std::ostream& out, const Panel& panel, const std::vector<AggregateRow>& rows,
              double AggregateRow::*field, const char* color, const char* dash) {
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
  if (dash[0] != '\0') out << " stroke-dasharray=\"" << dash << "\"";
  out << " points=\"";
  for (const AggregateRow& r : rows) {
    out << fmt::format("{:.2f},{:.2f} ", panel.x(r.k), panel.y(r.*field));
  }
  out << "\"/>\n";
}

void panel(std::ostream& out, const Panel& p, const std::vector<AggregateRow>& rows, const char* label,
           double AggregateRow::*geo, double AggregateRow::*nogeo) {
  const double half_step = rows.size() > 1 ? 0.5 * (p.x(rows[1].k) - p.x(rows[0].k)) : 5.0;
  for (const AggregateRow& r : rows) {
    if (r.truth_card > 0 && !r.truth_los) {
      out << fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#dddddd\"/>\n",
                         p.x(r.k) - half_step, p.top, 2.0 * half_step, kPanelHeight);
    }
  }
  out << fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
                     "stroke=\"black\"/>\n",
                     kLeft, p.top, kWidth - kLeft - kRight, kPanelHeight);
  for (int i = 0; i <= 4; ++i) {
    const double v = p.y_max * i / 4.0;
    out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" text-anchor=\"end\">{:g}</text>\n",
                       kLeft - 4.0, p.y(v) + 3.0, v);
  }
  for (int k = static_cast<int>(p.k_min); k <= static_cast<int>(p.k_max); ++k) {
    if (k % 10 != 0) continue;
    out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
                       p.x(k), p.top + kPanelHeight + 14.0, k);
  }
  out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">{}</text>\n", kLeft, p.top - 8.0, label);
  polyline(out, p, rows, nogeo, "#d62728", "5,3");
  polyline(out, p, rows, geo, "#1f77b4", "");
}

}  // namespace

std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error("aggregate CSV: unexpected header");
  }
  std::vector<AggregateRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string f[7];
    for (std::string& s : f) {
      if (!std::getline(fields, s, ',')) throw std::runtime_error(fmt::format("aggregate CSV line {}: too few fields", line_no));
    }
    try {
      AggregateRow r;
      r.k = std::stoi(f[0]);
      r.truth_card = std::stoi(f[1]);
      r.truth_los = std::stoi(f[2]) != 0;
      r.q_geo = std::stod(f[3]);
      r.q_nogeo = std::stod(f[4]);
      r.ospa_geo = std::stod(f[5]);
      r.ospa_nogeo = std::stod(f[6]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw std::runtime_error(fmt::format("aggregate CSV line {}: bad number", line_no));
    }
  }
  if (rows.empty()) throw std::runtime_error("aggregate CSV has no rows");
  return rows;
}

void write_svg(std::ostream& out, const std::vector<AggregateRow>& rows, double ospa_cutoff) {
  const double k_min = rows.front().k;
  const double k_max = rows.back().k;
  const double height = kTop + 2.0 * kPanelHeight + kGap + 40.0;
  out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:g}\" height=\"{:g}\" "
                     "font-family=\"sans-serif\">\n",
                     kWidth, height);
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const Panel q{kTop, 1.0, k_min, k_max};
  panel(out, q, rows, "mean existence probability q (solid: geo model, dashed: none; shaded: NLOS)",
        &AggregateRow::q_geo, &AggregateRow::q_nogeo);
  const Panel ospa{kTop + kPanelHeight + kGap, ospa_cutoff, k_min, k_max};
  panel(out, ospa, rows, "mean OSPA [m]", &AggregateRow::ospa_geo, &AggregateRow::ospa_nogeo);
  out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">k</text>\n",
                     0.5 * (kLeft + kWidth - kRight), height - 8.0);
  out << "</svg>\n";
}

}  // namespace shadowtrack::cli
