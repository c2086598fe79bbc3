#include "shadowtrack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "shadowtrack/geojson.hpp"
#include "shadowtrack/log.hpp"

namespace shadowtrack::harness {

using nlohmann::json;

namespace {

constexpr std::uint64_t kMeasurementStream = 1;
constexpr std::uint64_t kFilterStream = 2;

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::string token;
  std::istringstream in{std::string(text)};
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + token + "'");
    }
  }
  return out;
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

const json& section(const json& obj, const char* key) {
  static const json empty = json::object();
  if (!obj.contains(key)) return empty;
  if (!obj[key].is_object()) throw ConfigError(std::string("config field '") + key + "' must be an object");
  return obj[key];
}

void read_span(const json& obj, const char* key, double& lo, double& hi) {
  if (!obj.contains(key)) return;
  const json& s = obj[key];
  if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
    throw ConfigError(std::string("config field '") + key + "' must be [min, max]");
  }
  lo = s[0].get<double>();
  hi = s[1].get<double>();
}

Point2D read_point(const json& obj, const char* key, Point2D fallback) {
  if (!obj.contains(key)) return fallback;
  const json& p = obj[key];
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
    throw ConfigError(std::string("config field '") + key + "' must be [east, north]");
  }
  return {p[0].get<double>(), p[1].get<double>()};
}

BoundarySpec boundary_from_json(const json& j) {
  if (j.is_string()) return BoundarySpec::parse(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("boundary must be a string or an object");
  BoundarySpec b;
  const std::string type = j.value("type", "rect");
  if (type == "rect") {
    b.kind = BoundarySpec::Kind::rectangle;
    b.min_corner = read_point(j, "min", b.min_corner);
    b.max_corner = read_point(j, "max", b.max_corner);
  } else if (type == "regular") {
    b.kind = BoundarySpec::Kind::regular;
    b.center = read_point(j, "center", b.center);
    read(j, "radius", b.radius);
    read(j, "sides", b.sides);
  } else {
    throw ConfigError("unknown boundary type '" + type + "'");
  }
  return b;
}

TargetState state_from_json(const json& j) {
  TargetState s;
  read(j, "p_east", s.p_east);
  read(j, "v_east", s.v_east);
  read(j, "p_north", s.p_north);
  read(j, "v_north", s.v_north);
  read(j, "omega", s.omega);
  return s;
}

std::string fmt_opt(bool present, double value) { return present ? fmt::format("{:.6f}", value) : std::string(); }

}  // namespace

// --- boundary ----------------------------------------------------------------

geometry::Polygon2D BoundarySpec::polygon() const {
  if (kind == Kind::rectangle) return geometry::rectangle(min_corner, max_corner);
  return geometry::regular_polygon(center, radius, sides);
}

BoundarySpec BoundarySpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("boundary spec must look like 'rect:...' or 'regular:...'");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::vector<double> v = parse_numbers(text.substr(colon + 1));
  BoundarySpec b;
  if (kind == "rect") {
    if (v.size() != 4) throw ConfigError("rect boundary needs min_e,min_n,max_e,max_n");
    b.kind = Kind::rectangle;
    b.min_corner = {v[0], v[1]};
    b.max_corner = {v[2], v[3]};
  } else if (kind == "regular") {
    if (v.size() != 4) throw ConfigError("regular boundary needs center_e,center_n,radius,sides");
    b.kind = Kind::regular;
    b.center = {v[0], v[1]};
    b.radius = v[2];
    b.sides = static_cast<int>(v[3]);
    if (static_cast<double>(b.sides) != v[3]) throw ConfigError("regular boundary sides must be an integer");
  } else {
    throw ConfigError("unknown boundary kind '" + std::string(kind) + "'");
  }
  return b;
}

// --- config ----------------------------------------------------------------

void ScenarioConfig::validate() const {
  try {
    if (!(motion.T > 0.0)) throw std::invalid_argument("motion.T must be > 0");
    if (!(motion.sigma_w >= 0.0) || !(motion.sigma_u >= 0.0)) {
      throw std::invalid_argument("motion noise must be >= 0");
    }
    sensor_params.validate();
    filter_params.validate();
    ospa.validate();
    (void)boundary.polygon();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (num_steps < 1) throw ConfigError("num_steps must be >= 1");
  if (truth_spec.birth_step < 1) throw ConfigError("truth_spec.birth_step must be >= 1");
  if (truth_spec.death_step && *truth_spec.death_step < truth_spec.birth_step) {
    throw ConfigError("truth_spec.death_step precedes birth_step");
  }
}

ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ScenarioConfig c;
  const json& ref = section(doc, "geodetic_ref");
  read(ref, "longitude", c.geodetic_ref.longitude);
  read(ref, "latitude", c.geodetic_ref.latitude);
  read(ref, "altitude", c.geodetic_ref.altitude);

  const auto resolve = [&](const char* key, std::filesystem::path& target) {
    std::string p;
    read(doc, key, p);
    if (!p.empty()) {
      std::filesystem::path path(p);
      target = path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    }
  };
  resolve("buildings_path", c.buildings_path);
  resolve("geo_model_path", c.geo_model_path);
  read(doc, "height_threshold", c.height_threshold);
  if (doc.contains("boundary")) c.boundary = boundary_from_json(doc["boundary"]);

  const json& sensor = section(doc, "sensor");
  read(sensor, "east", c.sensor.position.east);
  read(sensor, "north", c.sensor.position.north);
  read(sensor, "height", c.sensor.height);

  const json& motion = section(doc, "motion");
  read(motion, "T", c.motion.T);
  read(motion, "sigma_w", c.motion.sigma_w);
  read(motion, "sigma_u", c.motion.sigma_u);

  const json& sp = section(doc, "sensor_params");
  read(sp, "sigma_theta", c.sensor_params.sigma_theta);
  read(sp, "sigma_r", c.sensor_params.sigma_r);
  read(sp, "p_detect", c.sensor_params.p_detect);
  read(sp, "clutter_rate", c.sensor_params.clutter_rate);
  read_span(sp, "bearing_span", c.sensor_params.bearing_min, c.sensor_params.bearing_max);
  read_span(sp, "range_span", c.sensor_params.range_min, c.sensor_params.range_max);

  const json& fp = section(doc, "filter_params");
  read(fp, "p_birth", c.filter_params.p_birth);
  read(fp, "p_survive", c.filter_params.p_survive);
  read(fp, "num_particles", c.filter_params.num_particles);
  read(fp, "num_birth", c.filter_params.num_birth);
  read(fp, "clutter_rate", c.filter_params.clutter_rate);
  read(fp, "clutter_density", c.filter_params.clutter_density);
  read(fp, "birth_sigma_v", c.filter_params.birth_sigma_v);
  read(fp, "birth_sigma_omega", c.filter_params.birth_sigma_omega);
  read(fp, "existence_report_threshold", c.filter_params.existence_report_threshold);
  read(fp, "birth_max_attempts", c.filter_params.birth_max_attempts);

  const json& os = section(doc, "ospa");
  read(os, "cutoff", c.ospa.cutoff);
  read(os, "order", c.ospa.order);

  read(doc, "num_steps", c.num_steps);

  const json& truth = section(doc, "truth_spec");
  c.truth_spec.initial_state = state_from_json(section(truth, "initial_state"));
  read(truth, "birth_step", c.truth_spec.birth_step);
  if (truth.contains("death_step") && !truth["death_step"].is_null()) {
    int d = 0;
    read(truth, "death_step", d);
    c.truth_spec.death_step = d;
  }
  if (truth.contains("turns")) {
    if (!truth["turns"].is_array()) throw ConfigError("truth_spec.turns must be an array");
    for (const json& t : truth["turns"]) {
      TurnEvent ev;
      read(t, "k", ev.k);
      read(t, "omega", ev.omega);
      c.truth_spec.turns.push_back(ev);
    }
  }

  read(doc, "seed", c.seed);
  read(doc, "use_geo_model", c.use_geo_model);
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = geojson::read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.parent_path());
}

// --- world and truth -------------------------------------------------------

GeoModel build_world(const ScenarioConfig& config) {
  if (!config.geo_model_path.empty()) {
    return geojson::load_geo_model(config.geo_model_path);
  }
  std::vector<geometry::BuildingRecord> buildings;
  if (!config.buildings_path.empty()) {
    buildings = geojson::load_buildings(config.buildings_path, config.geodetic_ref);
  }
  return geometry::build_geo_model(buildings, config.sensor.position, config.sensor.height,
                                   config.height_threshold, config.boundary.polygon());
}

GroundTruth generate_ground_truth(const ScenarioConfig& config, const GeoModel& world) {
  const TruthSpec& spec = config.truth_spec;
  const int last = spec.death_step ? std::min(*spec.death_step, config.num_steps) : config.num_steps;
  GroundTruth out;
  out.states.resize(static_cast<std::size_t>(config.num_steps));
  out.los.assign(static_cast<std::size_t>(config.num_steps), false);

  std::optional<TargetState> x;
  for (int k = 1; k <= config.num_steps; ++k) {
    if (k < spec.birth_step || k > last) {
      x.reset();
      continue;
    }
    if (k == spec.birth_step) {
      x = spec.initial_state;
    } else {
      x = models::constant_turn_step(*x, config.motion);
    }
    for (const TurnEvent& t : spec.turns) {
      if (t.k == k) x->omega = t.omega;
    }
    const Point2D pos = x->position();
    if (world.in_obstacle(pos)) {
      throw ConfigError(fmt::format("truth enters an obstacle at k={} ({:.1f}, {:.1f})", k, pos.east, pos.north));
    }
    const auto idx = static_cast<std::size_t>(k - 1);
    out.states[idx] = x;
    out.los[idx] = world.is_los(pos);
    if (k == spec.birth_step && !out.los[idx]) {
      throw ConfigError(fmt::format("truth is born outside line of sight at k={}", k));
    }
    if (spec.death_step && k == *spec.death_step && !out.los[idx]) {
      throw ConfigError(fmt::format("truth dies outside line of sight at k={}", k));
    }
  }
  return out;
}

GroundTruth generate_ground_truth(const ScenarioConfig& config) {
  return generate_ground_truth(config, build_world(config));
}

std::vector<Interval> nlos_intervals(const GroundTruth& truth) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < truth.states.size(); ++i) {
    const bool nlos = truth.states[i].has_value() && !truth.los[i];
    const int k = static_cast<int>(i) + 1;
    if (!nlos) continue;
    if (!out.empty() && out.back().last == k - 1) {
      out.back().last = k;
    } else {
      out.push_back({k, k});
    }
  }
  return out;
}

Scenario prepare_scenario(const ScenarioConfig& config) {
  config.validate();
  GeoModel world = build_world(config);
  GroundTruth truth = generate_ground_truth(config, world);
  return Scenario{config, std::move(world), std::move(truth)};
}

// --- runs ------------------------------------------------------------------

std::vector<models::Scan> simulate_scans(const Scenario& scenario, std::uint64_t run_seed) {
  Rng rng(derive_seed(run_seed, kMeasurementStream));
  std::vector<models::Scan> scans;
  scans.reserve(scenario.truth.states.size());
  for (const auto& x : scenario.truth.states) {
    scans.push_back(models::generate_measurements(x ? &*x : nullptr, scenario.world,
                                                  scenario.config.sensor_params, rng));
  }
  return scans;
}

std::vector<StepRecord> run_filter(const Scenario& scenario, const std::vector<models::Scan>& scans, bool use_geo,
                                   std::uint64_t run_seed) {
  const ScenarioConfig& config = scenario.config;
  filter::TrackerConfig tracker{config.motion, config.sensor_params, scenario.world.sensor(),
                                config.filter_params};
  const GeoModel* geo = use_geo ? &scenario.world : nullptr;
  Rng rng(derive_seed(run_seed, kFilterStream));

  filter::BernoulliState state;
  std::vector<StepRecord> records;
  records.reserve(scans.size());
  for (std::size_t i = 0; i < scans.size(); ++i) {
    state = filter::step(state, scans[i].measurements, geo, tracker, rng);
    StepRecord rec;
    rec.k = static_cast<int>(i) + 1;
    rec.truth = scenario.truth.states[i];
    rec.truth_los = scenario.truth.los[i];
    rec.measurements = scans[i].measurements;
    rec.q = state.q;
    if (auto est = filter::estimate(state, config.filter_params)) rec.estimate = est->state;
    std::vector<Point2D> truth_set, est_set;
    if (rec.truth) truth_set.push_back(rec.truth->position());
    if (rec.estimate) est_set.push_back(rec.estimate->position());
    rec.ospa = metrics::ospa(truth_set, est_set, config.ospa);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<StepRecord> run_scenario(const Scenario& scenario, std::uint64_t seed) {
  return run_filter(scenario, simulate_scans(scenario, seed), scenario.config.use_geo_model, seed);
}

std::vector<StepRecord> run_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  return run_scenario(prepare_scenario(config), seed);
}

PairedRun run_paired(const Scenario& scenario, std::uint64_t run_seed) {
  const std::vector<models::Scan> scans = simulate_scans(scenario, run_seed);
  PairedRun run;
  run.geo = run_filter(scenario, scans, true, run_seed);
  run.nogeo = run_filter(scenario, scans, false, run_seed);
  return run;
}

std::vector<metrics::RunStep> to_run_steps(const std::vector<StepRecord>& records) {
  std::vector<metrics::RunStep> out;
  out.reserve(records.size());
  for (const StepRecord& r : records) {
    out.push_back({r.k, r.q, r.ospa, r.truth ? 1 : 0, r.truth_los});
  }
  return out;
}

MonteCarloResult run_monte_carlo(const Scenario& scenario, int n_runs, int jobs) {
  if (n_runs < 1) throw ConfigError("n_runs must be >= 1");
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min(jobs, n_runs);

  MonteCarloResult result;
  result.runs.resize(static_cast<std::size_t>(n_runs));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (int i = next++; i < n_runs; i = next++) {
      try {
        result.runs[static_cast<std::size_t>(i)] =
            run_paired(scenario, scenario.config.seed + static_cast<std::uint64_t>(i));
        log::debug(fmt::format("run {} done", i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n_runs;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::vector<metrics::RunStep>> geo, nogeo;
  for (const PairedRun& r : result.runs) {
    geo.push_back(to_run_steps(r.geo));
    nogeo.push_back(to_run_steps(r.nogeo));
  }
  result.geo = metrics::aggregate(geo);
  result.nogeo = metrics::aggregate(nogeo);
  return result;
}

MonteCarloResult run_monte_carlo(const ScenarioConfig& config, int n_runs, int jobs) {
  return run_monte_carlo(prepare_scenario(config), n_runs, jobs);
}

// --- output ----------------------------------------------------------------

void write_aggregate_csv(std::ostream& out, const MonteCarloResult& result) {
  out << "k,truth_card,truth_los,q_mean_geo,q_mean_nogeo,ospa_mean_geo,ospa_mean_nogeo\n";
  for (std::size_t i = 0; i < result.geo.size(); ++i) {
    const auto& g = result.geo[i];
    const auto& n = result.nogeo[i];
    out << fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", g.k, g.truth_cardinality, g.truth_los ? 1 : 0,
                       g.q_mean, n.q_mean, g.ospa_mean, n.ospa_mean);
  }
}

void write_runs_csv(std::ostream& out, const MonteCarloResult& result, bool geo_variant) {
  out << "run,k,q,est_east,est_north,ospa\n";
  for (std::size_t run = 0; run < result.runs.size(); ++run) {
    const auto& records = geo_variant ? result.runs[run].geo : result.runs[run].nogeo;
    for (const StepRecord& r : records) {
      const bool has = r.estimate.has_value();
      out << fmt::format("{},{},{:.6f},{},{},{:.6f}\n", run, r.k, r.q, fmt_opt(has, has ? r.estimate->p_east : 0.0),
                         fmt_opt(has, has ? r.estimate->p_north : 0.0), r.ospa);
    }
  }
}

void write_steps_csv(std::ostream& out, const std::vector<StepRecord>& records) {
  out << "k,truth_card,truth_east,truth_north,truth_los,num_meas,q,est_east,est_north,ospa\n";
  for (const StepRecord& r : records) {
    const bool has_truth = r.truth.has_value();
    const bool has_est = r.estimate.has_value();
    out << fmt::format("{},{},{},{},{},{},{:.6f},{},{},{:.6f}\n", r.k, has_truth ? 1 : 0,
                       fmt_opt(has_truth, has_truth ? r.truth->p_east : 0.0),
                       fmt_opt(has_truth, has_truth ? r.truth->p_north : 0.0), r.truth_los ? 1 : 0,
                       r.measurements.size(), r.q, fmt_opt(has_est, has_est ? r.estimate->p_east : 0.0),
                       fmt_opt(has_est, has_est ? r.estimate->p_north : 0.0), r.ospa);
  }
}

void write_measurements_csv(std::ostream& out, const std::vector<StepRecord>& records) {
  out << "k,bearing,range\n";
  for (const StepRecord& r : records) {
    for (const Measurement& z : r.measurements) {
      out << fmt::format("{},{:.6f},{:.3f}\n", r.k, z.bearing, z.range);
    }
  }
}

}  // namespace shadowtrack::harness
