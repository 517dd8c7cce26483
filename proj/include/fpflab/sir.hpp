#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "fpflab/model.hpp"
#include "fpflab/rng.hpp"

namespace fpflab {

/// Susceptible/infected fractions plus transmission rate; the recovered
/// fraction is 1 - s - i.
struct SirState {
  double s = 0.0;
  double i = 0.0;
  double beta = 0.0;
};

/// Time derivative (ds/dt, di/dt) = (-beta*s*i, beta*s*i - alpha*i).
/// Validates the state invariants (s, i >= 0, s + i <= 1 + 1e-9, beta >= 0).
std::pair<double, double> sir_rhs(const SirState& x, double alpha);

struct SirPath {
  std::vector<SirState> states;  // length horizon + 1
  ObservationPath observations;
};

/// Euler integration of the SIR ODE with beta held fixed (the ground truth).
/// Observations are dZ_k = beta * S_k * I_k * dt + sigma_w sqrt(dt) eta_k.
/// S and I are clamped to [0, 1] after each step. The initial condition is
/// I(0) ~ unif[0, 0.1], S(0) = 1 - I(0) unless i0 is given explicitly.
SirPath sir_simulate(double alpha, double beta, double sigma_w, double dt,
                     int horizon, RngStream rng,
                     std::optional<double> i0 = std::nullopt);

/// Dynamics step for an N x 3 particle block (columns s, i, beta): the beta
/// random-walk increment beta += sigma_b sqrt(dt) xi is applied first, then
/// the (s, i) ODE step uses the updated beta. s, i are clamped to [0, 1].
void sir_particle_propagate(Eigen::MatrixXd& particles, double alpha,
                            double sigma_b, double dt, RngStream rng);

}  // namespace fpflab
