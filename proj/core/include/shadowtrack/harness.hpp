#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shadowtrack/filter.hpp"
#include "shadowtrack/geometry.hpp"
#include "shadowtrack/metrics.hpp"
#include "shadowtrack/models.hpp"

namespace shadowtrack::harness {

using geometry::GeoModel;
using geometry::Point2D;
using models::Measurement;
using models::TargetState;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Surveillance boundary description: an axis-aligned rectangle or a
/// regular polygon. Text form: "rect:min_e,min_n,max_e,max_n" or
/// "regular:center_e,center_n,radius,sides".
struct BoundarySpec {
  enum class Kind { rectangle, regular };
  Kind kind = Kind::rectangle;
  Point2D min_corner{-2000.0, -2000.0};
  Point2D max_corner{2000.0, 2000.0};
  Point2D center{0.0, 0.0};
  double radius = 2000.0;
  int sides = 64;

  [[nodiscard]] geometry::Polygon2D polygon() const;
  static BoundarySpec parse(std::string_view text);
};

struct SensorSite {
  Point2D position;
  double height = 0.0;
};

struct TurnEvent {
  int k = 0;           // step at which the new turn rate takes effect
  double omega = 0.0;  // rad/s
};

/// Noiseless truth trajectory: the target appears at `birth_step` in
/// `initial_state`, follows the constant-turn model with turn-rate changes
/// from `turns`, and exists through `death_step` (or to the end).
struct TruthSpec {
  TargetState initial_state;
  int birth_step = 1;
  std::optional<int> death_step;
  std::vector<TurnEvent> turns;
};

struct ScenarioConfig {
  geometry::GeodeticCoord geodetic_ref{-73.9675, 40.781, 200.0};
  std::filesystem::path buildings_path;   // empty: open terrain
  std::filesystem::path geo_model_path;   // optional precomputed model, overrides buildings
  double height_threshold = 115.0;
  BoundarySpec boundary;
  SensorSite sensor;
  models::MotionParams motion;
  models::SensorParams sensor_params;
  filter::FilterParams filter_params;
  metrics::OspaParams ospa;
  int num_steps = 80;
  TruthSpec truth_spec;
  std::uint64_t seed = 1;
  bool use_geo_model = true;

  /// Throws ConfigError when any sub-configuration is invalid.
  void validate() const;
};

/// Parses the JSON config. Relative paths resolve against `base_dir`.
ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Builds the world model: loads `geo_model_path` if set, otherwise runs the
/// offline pipeline over `buildings_path` (no buildings when empty).
GeoModel build_world(const ScenarioConfig& config);

struct GroundTruth {
  std::vector<std::optional<TargetState>> states;  // index k-1
  std::vector<bool> los;                           // false when absent
};

/// Throws ConfigError when the trajectory enters an obstacle or is born or
/// dies outside line of sight.
GroundTruth generate_ground_truth(const ScenarioConfig& config, const GeoModel& world);
GroundTruth generate_ground_truth(const ScenarioConfig& config);

/// Contiguous runs of steps where the target exists but is not in line of sight.
struct Interval {
  int first = 0;  // k of the first NLOS step
  int last = 0;   // k of the last NLOS step
  [[nodiscard]] int length() const { return last - first + 1; }
};
std::vector<Interval> nlos_intervals(const GroundTruth& truth);

/// Config plus the derived world and truth; shared read-only across runs.
struct Scenario {
  ScenarioConfig config;
  GeoModel world;
  GroundTruth truth;
};
Scenario prepare_scenario(const ScenarioConfig& config);

struct StepRecord {
  int k = 0;
  std::optional<TargetState> truth;
  bool truth_los = false;
  std::vector<Measurement> measurements;
  double q = 0.0;
  std::optional<TargetState> estimate;
  double ospa = 0.0;
};

/// Per-step scans for one run, drawn from the run's measurement substream.
std::vector<models::Scan> simulate_scans(const Scenario& scenario, std::uint64_t run_seed);

/// Filters pre-generated scans; `use_geo` selects the geo-conditioned variant.
std::vector<StepRecord> run_filter(const Scenario& scenario, const std::vector<models::Scan>& scans, bool use_geo,
                                   std::uint64_t run_seed);

/// Single realization using `config.use_geo_model`.
std::vector<StepRecord> run_scenario(const ScenarioConfig& config, std::uint64_t seed);
std::vector<StepRecord> run_scenario(const Scenario& scenario, std::uint64_t seed);

struct PairedRun {
  std::vector<StepRecord> geo;
  std::vector<StepRecord> nogeo;
};

/// Both variants over one shared measurement sequence.
PairedRun run_paired(const Scenario& scenario, std::uint64_t run_seed);

struct MonteCarloResult {
  std::vector<metrics::StepMetrics> geo;
  std::vector<metrics::StepMetrics> nogeo;
  std::vector<PairedRun> runs;  // run i used seed config.seed + i
};

/// `n_runs` paired runs on `jobs` worker threads (0 = hardware concurrency).
/// Results do not depend on `jobs`.
MonteCarloResult run_monte_carlo(const ScenarioConfig& config, int n_runs, int jobs = 0);
MonteCarloResult run_monte_carlo(const Scenario& scenario, int n_runs, int jobs = 0);

std::vector<metrics::RunStep> to_run_steps(const std::vector<StepRecord>& records);

/// `k,truth_card,truth_los,q_mean_geo,q_mean_nogeo,ospa_mean_geo,ospa_mean_nogeo`
void write_aggregate_csv(std::ostream& out, const MonteCarloResult& result);

/// `run,k,q,est_east,est_north,ospa`; one variant of every run.
void write_runs_csv(std::ostream& out, const MonteCarloResult& result, bool geo_variant);

/// Single-run log:
/// `k,truth_card,truth_east,truth_north,truth_los,num_meas,q,est_east,est_north,ospa`
void write_steps_csv(std::ostream& out, const std::vector<StepRecord>& records);

/// `k,bearing,range` for every return of a single run.
void write_measurements_csv(std::ostream& out, const std::vector<StepRecord>& records);

}  // namespace shadowtrack::harness
