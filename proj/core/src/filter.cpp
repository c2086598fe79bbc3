#include "shadowtrack/filter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shadowtrack/log.hpp"

namespace shadowtrack::filter {

namespace {

constexpr double kDeltaCeiling = 1.0 - 1e-12;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void FilterParams::validate() const {
  if (!is_probability(p_birth) || !is_probability(p_survive) || !is_probability(existence_report_threshold)) {
    throw std::invalid_argument("filter probabilities must lie in [0, 1]");
  }
  if (num_particles < 1 || num_birth < 1) {
    throw std::invalid_argument("num_particles and num_birth must be >= 1");
  }
  if (!(clutter_rate >= 0.0) || !(clutter_density > 0.0)) {
    throw std::invalid_argument("clutter_rate must be >= 0 and clutter_density > 0");
  }
  if (!(birth_sigma_v >= 0.0) || !(birth_sigma_omega >= 0.0) || birth_max_attempts < 1) {
    throw std::invalid_argument("birth spreads must be >= 0 and birth_max_attempts >= 1");
  }
}

double predict_existence(double q, const FilterParams& params) {
  return params.p_birth * (1.0 - q) + params.p_survive * q;
}

PredictedMass predicted_mass(double q_prev, double q_pred, const FilterParams& params) {
  if (!(q_pred > 0.0)) {
    // Nothing can exist; the spatial density is immaterial, keep it on births.
    return {0.0, 1.0};
  }
  return {params.p_survive * q_prev / q_pred, params.p_birth * (1.0 - q_prev) / q_pred};
}

std::vector<Particle> adaptive_birth(std::span<const Measurement> measurements, const GeoModel* geo,
                                     Point2D sensor_position, std::size_t count,
                                     const SensorParams& sensor, const FilterParams& params, Rng& rng) {
  std::vector<Particle> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point2D pos;
    bool admissible = false;
    for (int attempt = 0; attempt < params.birth_max_attempts; ++attempt) {
      Measurement z;
      if (measurements.empty()) {
        z.bearing = rng.uniform(sensor.bearing_min, sensor.bearing_max);
        z.range = rng.uniform(sensor.range_min, sensor.range_max);
      } else {
        const Measurement& src = measurements[rng.index(measurements.size())];
        z.bearing = src.bearing + sensor.sigma_theta * rng.normal();
        z.range = std::abs(src.range + sensor.sigma_r * rng.normal());
      }
      pos = models::to_position(z, sensor_position);
      if (geo == nullptr || geo->is_los(pos)) {
        admissible = true;
        break;
      }
    }
    Particle p;
    p.state.p_east = pos.east;
    p.state.p_north = pos.north;
    p.state.v_east = params.birth_sigma_v * rng.normal();
    p.state.v_north = params.birth_sigma_v * rng.normal();
    p.state.omega = params.birth_sigma_omega * rng.normal();
    p.weight = admissible ? 1.0 : 0.0;
    out.push_back(p);
  }
  return out;
}

std::vector<Particle> predict_particles(const BernoulliState& prior, double q_pred,
                                        std::span<const Measurement> birth_measurements, const GeoModel* geo,
                                        const TrackerConfig& config, Rng& rng) {
  const FilterParams& params = config.filter;
  PredictedMass mass = predicted_mass(prior.q, q_pred, params);

  std::vector<Particle> out;
  out.reserve(prior.particles.size() + params.num_birth);
  double kept = 0.0;  // prior weight of survivors outside obstacles
  for (const Particle& p : prior.particles) {
    Particle next;
    next.state = models::constant_turn_step(p.state, config.motion, models::sample_process_noise(config.motion, rng));
    next.weight = p.weight;
    if (geo != nullptr) {
      if (geo->in_obstacle(next.state.position())) {
        next.weight = 0.0;
      } else {
        kept += p.weight;
      }
    }
    out.push_back(next);
  }
  const std::size_t num_survivors = out.size();

  if (geo == nullptr) {
    for (std::size_t i = 0; i < num_survivors; ++i) {
      out[i].weight = mass.survival * out[i].weight;
    }
  } else if (kept > 0.0) {
    for (std::size_t i = 0; i < num_survivors; ++i) {
      out[i].weight = mass.survival * (out[i].weight / kept);
    }
  } else {
    if (mass.survival > 0.0) {
      log::warn("all survival particles obstructed; survival mass moved to births");
    }
    for (std::size_t i = 0; i < num_survivors; ++i) {
      out[i].weight = 0.0;
    }
    mass.birth += mass.survival;
    mass.survival = 0.0;
  }
  if (num_survivors == 0 && mass.survival > 0.0) {
    mass.birth += mass.survival;
    mass.survival = 0.0;
  }

  std::vector<Particle> births = adaptive_birth(birth_measurements, geo, config.sensor_position, params.num_birth,
                                                config.sensor, params, rng);
  std::size_t admissible = 0;
  for (const Particle& b : births) {
    if (b.weight > 0.0) ++admissible;
  }
  if (admissible == 0 && mass.birth > 0.0) {
    if (!(mass.survival > 0.0)) {
      throw FilterError("no admissible survival or birth particles");
    }
    log::warn("no birth sample reached line of sight; birth mass moved to survivors");
    for (std::size_t i = 0; i < num_survivors; ++i) {
      out[i].weight = out[i].weight / mass.survival;
    }
    mass.birth = 0.0;
  }
  const double birth_weight = admissible > 0 ? mass.birth / static_cast<double>(admissible) : 0.0;
  for (Particle& b : births) {
    b.weight = b.weight > 0.0 ? birth_weight : 0.0;
    out.push_back(b);
  }
  return out;
}

double detection_prob(const TargetState& x, const GeoModel* geo, const SensorParams& sensor) {
  if (geo != nullptr && !geo->is_los(x.position())) {
    return 0.0;
  }
  return sensor.p_detect;
}

UpdateTerms update_terms(std::span<const Particle> particles, std::span<const Measurement> measurements,
                         const GeoModel* geo, const SensorParams& sensor, Point2D sensor_position,
                         const FilterParams& params) {
  const double clutter_intensity = params.clutter_rate * params.clutter_density;
  if (!measurements.empty() && !(clutter_intensity > 0.0)) {
    throw FilterError("clutter intensity lambda * c(z) must be positive");
  }
  UpdateTerms terms;
  terms.factor.resize(particles.size());
  double detected = 0.0;  // sum_i pD w
  double support = 0.0;   // sum_i pD w sum_z g / (lambda c)
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const Particle& p = particles[i];
    const double pd = detection_prob(p.state, geo, sensor);
    double ratio = 0.0;
    if (pd > 0.0 && !measurements.empty()) {
      const Point2D pos = p.state.position();
      if (!(pos == sensor_position)) {
        const Measurement predicted = models::measure(pos, sensor_position);
        for (const Measurement& z : measurements) {
          ratio += models::likelihood(z, predicted, sensor) / clutter_intensity;
        }
      }
    }
    detected += pd * p.weight;
    support += pd * ratio * p.weight;
    terms.factor[i] = 1.0 - pd + pd * ratio;
  }
  terms.delta = detected - support;
  return terms;
}

BernoulliState update(double q_pred, std::span<const Particle> particles,
                      std::span<const Measurement> measurements, const GeoModel* geo,
                      const SensorParams& sensor, Point2D sensor_position, const FilterParams& params) {
  const UpdateTerms terms = update_terms(particles, measurements, geo, sensor, sensor_position, params);
  const double delta = std::min(terms.delta, kDeltaCeiling);
  const double denominator = 1.0 - delta * q_pred;
  if (!(denominator > 0.0)) {
    throw FilterError("existence update denominator is not positive (delta = " + std::to_string(delta) + ")");
  }

  BernoulliState post;
  post.q = std::clamp((1.0 - delta) / denominator * q_pred, 0.0, 1.0);
  post.particles.assign(particles.begin(), particles.end());
  // A scan that informs no particle (p_D = 0 everywhere) leaves the density as is.
  if (std::all_of(terms.factor.begin(), terms.factor.end(), [](double f) { return f == 1.0; })) {
    return post;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < post.particles.size(); ++i) {
    post.particles[i].weight = terms.factor[i] * post.particles[i].weight;
    total += post.particles[i].weight;
  }
  if (total > 0.0) {
    for (Particle& p : post.particles) {
      p.weight = p.weight / total;
    }
  } else {
    // Every particle fully explained away; keep the prediction.
    log::warn("posterior weights vanished; keeping predicted weights");
    post.particles.assign(particles.begin(), particles.end());
  }
  return post;
}

std::vector<Particle> resample(std::span<const Particle> particles, std::size_t count, Rng& rng) {
  std::vector<double> cumulative(particles.size());
  double total = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (particles[i].weight < 0.0 || !std::isfinite(particles[i].weight)) {
      throw FilterError("resampling needs finite nonnegative weights");
    }
    total += particles[i].weight;
    cumulative[i] = total;
    if (particles[i].weight > 0.0) last_positive = i;
  }
  if (!(total > 0.0)) {
    throw FilterError("cannot resample particles whose weights are all zero");
  }
  std::vector<Particle> out;
  out.reserve(count);
  const double n = static_cast<double>(count);
  const double offset = rng.uniform();
  const double uniform_weight = 1.0 / n;
  std::size_t i = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const double position = (offset + static_cast<double>(j)) / n * total;
    while (i < last_positive && cumulative[i] <= position) ++i;
    out.push_back({particles[i].state, uniform_weight});
  }
  return out;
}

std::optional<Estimate> estimate(const BernoulliState& state, const FilterParams& params) {
  if (state.q < params.existence_report_threshold || state.particles.empty()) {
    return std::nullopt;
  }
  TargetState mean{0.0, 0.0, 0.0, 0.0, 0.0};
  double total = 0.0;
  for (const Particle& p : state.particles) {
    mean.p_east += p.weight * p.state.p_east;
    mean.v_east += p.weight * p.state.v_east;
    mean.p_north += p.weight * p.state.p_north;
    mean.v_north += p.weight * p.state.v_north;
    mean.omega += p.weight * p.state.omega;
    total += p.weight;
  }
  if (!(total > 0.0)) {
    return std::nullopt;
  }
  mean.p_east /= total;
  mean.v_east /= total;
  mean.p_north /= total;
  mean.v_north /= total;
  mean.omega /= total;
  return Estimate{mean, state.q};
}

BernoulliState step(const BernoulliState& prior, std::span<const Measurement> measurements, const GeoModel* geo,
                    const TrackerConfig& config, Rng& rng) {
  const double q_pred = predict_existence(prior.q, config.filter);
  const std::vector<Particle> predicted =
      predict_particles(prior, q_pred, prior.birth_measurements, geo, config, rng);
  BernoulliState post =
      update(q_pred, predicted, measurements, geo, config.sensor, config.sensor_position, config.filter);
  post.particles = resample(post.particles, config.filter.num_particles, rng);
  post.birth_measurements.assign(measurements.begin(), measurements.end());
  return post;
}

}  // namespace shadowtrack::filter
