#include "cli.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "plot.hpp"
#include "shadowtrack/geojson.hpp"
#include "shadowtrack/harness.hpp"
#include "shadowtrack/log.hpp"

namespace shadowtrack::cli {

namespace {

std::vector<double> split_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != token.size()) {
      throw std::invalid_argument(fmt::format("{}: '{}' is not a number", what, token));
    }
    out.push_back(v);
  }
  if (out.size() != expected) {
    throw std::invalid_argument(fmt::format("{}: expected {} comma-separated numbers, got '{}'", what, expected, text));
  }
  return out;
}

/// Writes through a string buffer so a failed run never leaves a partial file.
void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  f.close();
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<AggregateRow> to_rows(const harness::MonteCarloResult& result) {
  std::vector<AggregateRow> rows;
  for (std::size_t i = 0; i < result.geo.size(); ++i) {
    const auto& g = result.geo[i];
    const auto& n = result.nogeo[i];
    rows.push_back({g.k, g.truth_cardinality, g.truth_los, g.q_mean, n.q_mean, g.ospa_mean, n.ospa_mean});
  }
  return rows;
}

struct GeoBuildArgs {
  std::string buildings, ref, sensor, boundary = "rect:-2000,-2000,2000,2000", out;
  double threshold = 115.0;
};

int geo_build(const GeoBuildArgs& a, std::ostream& out) {
  const auto ref = split_numbers(a.ref, 3, "--ref");
  const auto sensor = split_numbers(a.sensor, 3, "--sensor");
  const geometry::GeodeticCoord origin{ref[0], ref[1], ref[2]};
  const auto buildings = geojson::load_buildings(a.buildings, origin);
  const auto boundary = harness::BoundarySpec::parse(a.boundary).polygon();
  const geometry::GeoModel model =
      geometry::build_geo_model(buildings, {sensor[0], sensor[1]}, sensor[2], a.threshold, boundary);
  write_file(a.out, geojson::export_geo_model(model));
  out << fmt::format("buildings: {}\nobstacles: {}\nshadows: {}\n", buildings.size(), model.obstacles().size(),
                     model.shadows().size());
  return 0;
}

struct SimulateArgs {
  std::string config, out, measurements;
  std::optional<std::uint64_t> seed;
  bool no_geo = false;
};

int simulate(const SimulateArgs& a) {
  harness::ScenarioConfig config = harness::load_config(a.config);
  if (a.no_geo) config.use_geo_model = false;
  const std::uint64_t seed = a.seed.value_or(config.seed);
  const auto records = harness::run_scenario(config, seed);
  std::ostringstream steps;
  harness::write_steps_csv(steps, records);
  write_file(a.out, steps.str());
  if (!a.measurements.empty()) {
    std::ostringstream meas;
    harness::write_measurements_csv(meas, records);
    write_file(a.measurements, meas.str());
  }
  return 0;
}

struct McArgs {
  std::string config, out, svg, raw, raw_nogeo;
  int runs = 100;
  int jobs = 0;
};

int monte_carlo(const McArgs& a, std::ostream& out) {
  const harness::ScenarioConfig config = harness::load_config(a.config);
  const auto result = harness::run_monte_carlo(config, a.runs, a.jobs);
  std::ostringstream agg;
  harness::write_aggregate_csv(agg, result);
  write_file(a.out, agg.str());
  if (!a.raw.empty()) {
    std::ostringstream raw;
    harness::write_runs_csv(raw, result, true);
    write_file(a.raw, raw.str());
  }
  if (!a.raw_nogeo.empty()) {
    std::ostringstream raw;
    harness::write_runs_csv(raw, result, false);
    write_file(a.raw_nogeo, raw.str());
  }
  if (!a.svg.empty()) {
    std::ostringstream svg;
    write_svg(svg, to_rows(result), config.ospa.cutoff);
    write_file(a.svg, svg.str());
  }
  out << fmt::format("runs: {}\nsteps: {}\n", a.runs, result.geo.size());
  return 0;
}

struct PlotArgs {
  std::string in, out;
  double cutoff = 100.0;
};

int plot(const PlotArgs& a) {
  std::ifstream in(a.in);
  if (!in) throw std::runtime_error("cannot open '" + a.in + "'");
  const auto rows = read_aggregate_csv(in);
  std::ostringstream svg;
  write_svg(svg, rows, a.cutoff);
  write_file(a.out, svg.str());
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  log::init_from_env();

  CLI::App app{"Geospatially conditioned single-target tracking"};
  app.name("shadowtrack");
  app.require_subcommand(1);

  GeoBuildArgs gb;
  auto* gb_cmd = app.add_subcommand("geo-build", "build the obstacle/shadow model from building footprints");
  gb_cmd->add_option("--buildings", gb.buildings, "GeoJSON FeatureCollection")->required();
  gb_cmd->add_option("--ref", gb.ref, "geodetic reference lon,lat,alt")->required();
  gb_cmd->add_option("--sensor", gb.sensor, "sensor east,north,height in the local frame")->required();
  gb_cmd->add_option("--height-threshold", gb.threshold, "minimum roof height kept [m]");
  gb_cmd->add_option("--boundary", gb.boundary, "rect:min_e,min_n,max_e,max_n or regular:e,n,radius,sides");
  gb_cmd->add_option("--out", gb.out, "output model JSON")->required();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "run one realization and write the per-step log");
  sim_cmd->add_option("--config", sim.config, "scenario JSON")->required();
  sim_cmd->add_option("--seed", sim.seed, "run seed (default: config seed)");
  sim_cmd->add_flag("--no-geo", sim.no_geo, "filter without the geospatial model");
  sim_cmd->add_option("--out", sim.out, "per-step CSV")->required();
  sim_cmd->add_option("--measurements", sim.measurements, "optional per-return CSV");

  McArgs mc;
  auto* mc_cmd = app.add_subcommand("mc", "paired Monte-Carlo runs of both filter variants");
  mc_cmd->add_option("--config", mc.config, "scenario JSON")->required();
  mc_cmd->add_option("--runs", mc.runs, "number of runs")->required()->check(CLI::PositiveNumber);
  mc_cmd->add_option("--jobs", mc.jobs, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  mc_cmd->add_option("--out", mc.out, "aggregate CSV")->required();
  mc_cmd->add_option("--svg", mc.svg, "optional plot");
  mc_cmd->add_option("--raw", mc.raw, "optional per-run CSV of the geo-model variant");
  mc_cmd->add_option("--raw-nogeo", mc.raw_nogeo, "optional per-run CSV of the plain variant");

  PlotArgs pl;
  auto* plot_cmd = app.add_subcommand("plot", "render an aggregate CSV as SVG");
  plot_cmd->add_option("--in", pl.in, "aggregate CSV")->required();
  plot_cmd->add_option("--out", pl.out, "SVG file")->required();
  plot_cmd->add_option("--cutoff", pl.cutoff, "OSPA axis range [m]")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gb_cmd) return geo_build(gb, out);
    if (*sim_cmd) return simulate(sim);
    if (*mc_cmd) return monte_carlo(mc, out);
    if (*plot_cmd) return plot(pl);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace shadowtrack::cli
