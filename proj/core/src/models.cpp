#include "shadowtrack/models.hpp"

#include <cmath>
#include <stdexcept>

namespace shadowtrack::models {

TargetState constant_turn_step(const TargetState& x, const MotionParams& params, const ProcessNoise& noise) {
  const double T = params.T;
  const double w = x.omega;
  double s_over_w;  // sin(wT)/w
  double c_over_w;  // (1 - cos(wT))/w
  double c, s;
  if (std::abs(w) < kStraightTurnRate) {
    s_over_w = T;
    c_over_w = 0.0;
    c = 1.0;
    s = 0.0;
  } else {
    const double half = 0.5 * w * T;
    s = std::sin(w * T);
    c = std::cos(w * T);
    s_over_w = s / w;
    c_over_w = 2.0 * std::sin(half) * std::sin(half) / w;
  }
  const double half_t2 = 0.5 * T * T;
  TargetState out;
  out.p_east = x.p_east + s_over_w * x.v_east - c_over_w * x.v_north + half_t2 * noise.w_east;
  out.v_east = c * x.v_east - s * x.v_north + T * noise.w_east;
  out.p_north = x.p_north + c_over_w * x.v_east + s_over_w * x.v_north + half_t2 * noise.w_north;
  out.v_north = s * x.v_east + c * x.v_north + T * noise.w_north;
  out.omega = x.omega + T * noise.u;
  return out;
}

ProcessNoise sample_process_noise(const MotionParams& params, Rng& rng) {
  ProcessNoise n;
  n.w_east = params.sigma_w * rng.normal();
  n.w_north = params.sigma_w * rng.normal();
  n.u = params.sigma_u * rng.normal();
  return n;
}

void SensorParams::validate() const {
  if (!(sigma_theta >= 0.0) || !(sigma_r >= 0.0)) {
    throw std::invalid_argument("sensor noise standard deviations must be >= 0");
  }
  if (!(p_detect >= 0.0 && p_detect <= 1.0)) {
    throw std::invalid_argument("p_detect must lie in [0, 1]");
  }
  if (!(clutter_rate >= 0.0)) {
    throw std::invalid_argument("clutter_rate must be >= 0");
  }
  if (!(bearing_max > bearing_min) || !(range_max > range_min) || range_min < 0.0) {
    throw std::invalid_argument("bearing and range spans must be nonempty with range >= 0");
  }
}

Measurement measure(Point2D target, Point2D sensor, const MeasurementNoise& noise) {
  const double de = target.east - sensor.east;
  const double dn = target.north - sensor.north;
  if (de == 0.0 && dn == 0.0) {
    throw std::invalid_argument("target coincides with the sensor");
  }
  return {std::atan2(de, dn) + noise.bearing, std::hypot(de, dn) + noise.range};
}

Point2D to_position(const Measurement& z, Point2D sensor) {
  return {sensor.east + z.range * std::sin(z.bearing), sensor.north + z.range * std::cos(z.bearing)};
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (a > -std::numbers::pi && a <= std::numbers::pi) {
    return a;
  }
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) {
    a += two_pi;
  } else if (a > std::numbers::pi) {
    a -= two_pi;
  }
  return a;
}

double likelihood(const Measurement& z, const Measurement& predicted, const SensorParams& params) {
  const double db = wrap_angle(z.bearing - predicted.bearing) / params.sigma_theta;
  const double dr = (z.range - predicted.range) / params.sigma_r;
  return std::exp(-0.5 * (db * db + dr * dr)) / (2.0 * std::numbers::pi * params.sigma_theta * params.sigma_r);
}

double likelihood(const Measurement& z, const TargetState& x, Point2D sensor, const SensorParams& params) {
  return likelihood(z, measure(x.position(), sensor), params);
}

std::vector<Measurement> generate_clutter(const SensorParams& params, Rng& rng) {
  const unsigned count = rng.poisson(params.clutter_rate);
  std::vector<Measurement> out;
  out.reserve(count);
  for (unsigned i = 0; i < count; ++i) {
    const double b = rng.uniform(params.bearing_min, params.bearing_max);
    const double r = rng.uniform(params.range_min, params.range_max);
    out.push_back({b, r});
  }
  return out;
}

Scan generate_measurements(const TargetState* truth, const geometry::GeoModel& world,
                           const SensorParams& params, Rng& rng) {
  Scan scan;
  if (truth != nullptr && world.is_los(truth->position())) {
    if (rng.bernoulli(params.p_detect)) {
      MeasurementNoise noise;
      noise.bearing = params.sigma_theta * rng.normal();
      noise.range = params.sigma_r * rng.normal();
      scan.measurements.push_back(measure(truth->position(), world.sensor(), noise));
      scan.target_detected = true;
    }
  }
  std::vector<Measurement> clutter = generate_clutter(params, rng);
  scan.measurements.insert(scan.measurements.end(), clutter.begin(), clutter.end());
  return scan;
}

}  // namespace shadowtrack::models
