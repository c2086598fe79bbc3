#pragma once

#include <numbers>
#include <vector>

#include "shadowtrack/geometry.hpp"
#include "shadowtrack/rng.hpp"

namespace shadowtrack::models {

using geometry::Point2D;

/// Constant-turn state [p_east, v_east, p_north, v_north, omega].
struct TargetState {
  double p_east = 0.0;   // m
  double v_east = 0.0;   // m/s
  double p_north = 0.0;  // m
  double v_north = 0.0;  // m/s
  double omega = 0.0;    // rad/s, positive turns counter-clockwise in the E-N plane

  [[nodiscard]] Point2D position() const { return {p_east, p_north}; }
  friend bool operator==(const TargetState&, const TargetState&) = default;
};

struct MotionParams {
  double T = 1.0;                               // s
  double sigma_w = 2.5;                         // m/s^2, acceleration noise per axis
  double sigma_u = std::numbers::pi / 180.0;    // rad/s, turn-rate noise
};

/// Acceleration noise (applied through G) and turn-rate noise.
struct ProcessNoise {
  double w_east = 0.0;
  double w_north = 0.0;
  double u = 0.0;
};

/// Turn rates below this magnitude use the straight-line limit of F(omega).
inline constexpr double kStraightTurnRate = 1e-6;

TargetState constant_turn_step(const TargetState& x, const MotionParams& params,
                               const ProcessNoise& noise = {});

/// Draws ProcessNoise from N(0, sigma_w^2 I2) x N(0, sigma_u^2): east, north, turn.
ProcessNoise sample_process_noise(const MotionParams& params, Rng& rng);

struct Measurement {
  double bearing = 0.0;  // rad, clockwise from north
  double range = 0.0;    // m
  friend bool operator==(const Measurement&, const Measurement&) = default;
};

struct MeasurementNoise {
  double bearing = 0.0;
  double range = 0.0;
};

struct SensorParams {
  double sigma_theta = 2.0 * std::numbers::pi / 180.0;  // rad
  double sigma_r = 10.0;                                // m
  double p_detect = 0.98;
  double clutter_rate = 20.0;                           // expected clutter returns per scan
  double bearing_min = 0.0;
  double bearing_max = std::numbers::pi;
  double range_min = 0.0;
  double range_max = 2000.0;

  /// Uniform clutter density over the bearing x range window.
  [[nodiscard]] double clutter_density() const {
    return 1.0 / ((bearing_max - bearing_min) * (range_max - range_min));
  }
  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// Bearing (atan2 of east over north offsets) and range of `target` from
/// `sensor`, plus additive noise. Throws std::invalid_argument if the two
/// points coincide.
Measurement measure(Point2D target, Point2D sensor, const MeasurementNoise& noise = {});

/// Cartesian position of a bearing-range return.
Point2D to_position(const Measurement& z, Point2D sensor);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Gaussian density of `z` about the noiseless `predicted` measurement with
/// covariance diag(sigma_theta^2, sigma_r^2); the bearing residual is wrapped.
double likelihood(const Measurement& z, const Measurement& predicted, const SensorParams& params);

/// Same, with the prediction computed from a state.
double likelihood(const Measurement& z, const TargetState& x, Point2D sensor, const SensorParams& params);

/// Poisson(clutter_rate) returns, uniform over the bearing x range window.
std::vector<Measurement> generate_clutter(const SensorParams& params, Rng& rng);

struct Scan {
  std::vector<Measurement> measurements;  // target return first when detected
  bool target_detected = false;
};

/// One sensor scan: a noisy target return when the target exists, is in line
/// of sight and passes the detection draw, followed by clutter.
Scan generate_measurements(const TargetState* truth, const geometry::GeoModel& world,
                           const SensorParams& params, Rng& rng);

}  // namespace shadowtrack::models
