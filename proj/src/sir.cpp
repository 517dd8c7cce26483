#include "fpflab/sir.hpp"

#include <algorithm>
#include <cmath>

#include "fpflab/errors.hpp"
#include "stream_ids.hpp"

namespace fpflab {

std::pair<double, double> sir_rhs(const SirState& x, double alpha) {
  if (x.s < 0.0 || x.i < 0.0 || x.s + x.i > 1.0 + 1e-9)
    throw std::invalid_argument("sir_rhs: state outside the simplex");
  if (x.beta < 0.0) throw std::invalid_argument("sir_rhs: beta must be >= 0");
  if (alpha < 0.0) throw std::invalid_argument("sir_rhs: alpha must be >= 0");
  const double flow = x.beta * x.s * x.i;
  return {-flow, flow - alpha * x.i};
}

SirPath sir_simulate(double alpha, double beta, double sigma_w, double dt, int horizon,
                     RngStream rng, std::optional<double> i0) {
  if (alpha < 0.0 || beta < 0.0)
    throw std::invalid_argument("sir_simulate: rates must be >= 0");
  if (!(sigma_w > 0.0)) throw std::invalid_argument("sir_simulate: need sigma_w > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("sir_simulate: need dt > 0");
  if (horizon < 1) throw std::invalid_argument("sir_simulate: need horizon >= 1");

  const double sqrt_dt = std::sqrt(dt);
  SirPath path;
  path.states.reserve(horizon + 1);
  path.observations.dt = dt;
  path.observations.increments.resize(horizon);

  const double infected = i0 ? *i0 : 0.1 * rng.derive(stream_ids::kPrior).uniform();
  path.states.push_back(SirState{1.0 - infected, infected, beta});

  RngStream obs = rng.derive(stream_ids::kObservation);
  for (int k = 0; k < horizon; ++k) {
    const SirState& x = path.states.back();
    const auto [ds, di] = sir_rhs(x, alpha);
    const double eta = obs.derive(k).normal();
    path.observations.increments(k) = beta * x.s * x.i * dt + sigma_w * sqrt_dt * eta;

    SirState next;
    next.s = std::clamp(x.s + ds * dt, 0.0, 1.0);
    next.i = std::clamp(x.i + di * dt, 0.0, 1.0);
    next.beta = beta;
    if (!std::isfinite(next.s) || !std::isfinite(next.i) ||
        !std::isfinite(path.observations.increments(k)))
      throw NonFiniteError("sir_simulate: non-finite value at step " + std::to_string(k));
    path.states.push_back(next);
  }
  return path;
}

void sir_particle_propagate(Eigen::MatrixXd& particles, double alpha, double sigma_b,
                            double dt, RngStream rng) {
  if (particles.cols() != 3)
    throw std::invalid_argument("sir_particle_propagate: particles must be N x 3");
  const double sqrt_dt = std::sqrt(dt);
  for (Eigen::Index row = 0; row < particles.rows(); ++row) {
    const double beta =
        particles(row, 2) +
        sigma_b * sqrt_dt * rng.derive(static_cast<std::uint64_t>(row)).normal();
    const double s = particles(row, 0);
    const double i = particles(row, 1);
    const double flow = beta * s * i;
    particles(row, 0) = std::clamp(s - flow * dt, 0.0, 1.0);
    particles(row, 1) = std::clamp(i + (flow - alpha * i) * dt, 0.0, 1.0);
    particles(row, 2) = beta;
  }
  if (!particles.allFinite())
    throw NonFiniteError("sir_particle_propagate: non-finite particle state");
}

}  // namespace fpflab
