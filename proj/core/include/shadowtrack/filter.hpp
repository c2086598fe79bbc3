#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "shadowtrack/geometry.hpp"
#include "shadowtrack/models.hpp"
#include "shadowtrack/rng.hpp"

namespace shadowtrack::filter {

using geometry::GeoModel;
using geometry::Point2D;
using models::Measurement;
using models::MotionParams;
using models::SensorParams;
using models::TargetState;

class FilterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Particle {
  TargetState state;
  double weight = 0.0;
};

/// Bernoulli posterior: existence probability plus a weighted particle
/// approximation of the spatial density. `birth_measurements` holds the
/// previous scan, which drives the next step's adaptive birth.
struct BernoulliState {
  double q = 0.0;
  std::vector<Particle> particles;
  std::vector<Measurement> birth_measurements;
};

struct FilterParams {
  double p_birth = 0.01;
  double p_survive = 0.98;
  std::size_t num_particles = 5000;  // J
  std::size_t num_birth = 5000;      // B
  double clutter_rate = 20.0;        // lambda
  double clutter_density = 1.0 / (2000.0 * std::numbers::pi);
  double birth_sigma_v = 10.0;                             // m/s
  double birth_sigma_omega = 30.0 * std::numbers::pi / 180.0;  // rad/s
  double existence_report_threshold = 0.5;
  /// Redraws allowed for a birth sample landing outside line of sight.
  int birth_max_attempts = 50;

  void validate() const;
};

/// Everything a filter step needs besides state, scan, geometry and RNG.
struct TrackerConfig {
  MotionParams motion;
  SensorParams sensor;
  Point2D sensor_position;
  FilterParams filter;
};

/// q_{k|k-1} = p_b (1 - q) + p_s q.
double predict_existence(double q, const FilterParams& params);

/// Block masses of the predicted particle system: survival p_s q / q_pred and
/// birth p_b (1 - q) / q_pred. They sum to one.
struct PredictedMass {
  double survival = 0.0;
  double birth = 0.0;
};
PredictedMass predicted_mass(double q_prev, double q_pred, const FilterParams& params);

/// Measurement-driven birth samples. Each picks a return uniformly (or a
/// uniform point of the sensor window when `measurements` is empty), inverts
/// it with measurement-noise jitter, and draws velocity and turn rate from
/// zero-mean Gaussians. With `geo`, samples outside line of sight are redrawn;
/// one that never lands in line of sight is kept with weight 0. Admissible
/// samples carry weight 1.
std::vector<Particle> adaptive_birth(std::span<const Measurement> measurements, const GeoModel* geo,
                                     Point2D sensor_position, std::size_t count,
                                     const SensorParams& sensor, const FilterParams& params, Rng& rng);

/// Bootstrap prediction: J survival particles through the constant-turn model
/// followed by B adaptive birth particles. With `geo`, survival particles that
/// land inside an obstacle get weight 0 and the survivors are rescaled to the
/// full survival mass. Returned weights sum to one.
std::vector<Particle> predict_particles(const BernoulliState& prior, double q_pred,
                                        std::span<const Measurement> birth_measurements, const GeoModel* geo,
                                        const TrackerConfig& config, Rng& rng);

/// 0 for a position outside line of sight when `geo` is present, else p_detect.
double detection_prob(const TargetState& x, const GeoModel* geo, const SensorParams& sensor);

/// Per-particle update terms shared by the existence and weight updates.
struct UpdateTerms {
  std::vector<double> factor;  // 1 - pD + pD * sum_z g / (lambda c)
  double delta = 0.0;          // normalization estimate, before clamping
};
UpdateTerms update_terms(std::span<const Particle> particles, std::span<const Measurement> measurements,
                         const GeoModel* geo, const SensorParams& sensor, Point2D sensor_position,
                         const FilterParams& params);

/// Bayes update of existence and weights. Returned particles are the
/// predicted ones, reweighted and normalized. Throws FilterError when
/// 1 - delta q_pred <= 0 or the clutter intensity is not positive.
BernoulliState update(double q_pred, std::span<const Particle> particles,
                      std::span<const Measurement> measurements, const GeoModel* geo,
                      const SensorParams& sensor, Point2D sensor_position, const FilterParams& params);

/// Systematic resampling to `count` equally weighted particles.
std::vector<Particle> resample(std::span<const Particle> particles, std::size_t count, Rng& rng);

struct Estimate {
  TargetState state;
  double q = 0.0;
};

/// Weighted mean state when q reaches the report threshold.
std::optional<Estimate> estimate(const BernoulliState& state, const FilterParams& params);

/// predict_existence -> predict_particles -> update -> resample.
BernoulliState step(const BernoulliState& prior, std::span<const Measurement> measurements, const GeoModel* geo,
                    const TrackerConfig& config, Rng& rng);

}  // namespace shadowtrack::filter
