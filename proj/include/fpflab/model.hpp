#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "fpflab/rng.hpp"
#include "fpflab/types.hpp"

namespace fpflab {

/// Observation increments dZ_k on the uniform time grid t_k = k * dt.
struct ObservationPath {
  double dt = 0.0;
  Eigen::VectorXd increments;

  int steps() const { return static_cast<int>(increments.size()); }
};

/// One filtering problem: signal drift a(x), diffusion sigma(x), a scalar
/// observation channel h(x), and a prior sampler.
///
/// `propagate`, when set, replaces the generic Euler-Maruyama dynamics step
/// for a particle block; models with structured dynamics (SIR) use it.
struct FilterModel {
  int dim = 1;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> diffusion;
  std::function<double(const Eigen::VectorXd&)> obs;
  std::function<Eigen::MatrixXd(int, RngStream)> prior;  // n -> n x dim samples
  std::optional<GaussianBelief> prior_gaussian;
  double obs_noise_std = 1.0;
  std::function<void(Eigen::MatrixXd&, double, RngStream)> propagate;
};

struct TruthPath {
  Eigen::MatrixXd states;  // (T+1) x d, row k = X_k
  ObservationPath observations;
};

/// Euler-Maruyama simulation of signal and observation paths:
///   X_{k+1} = X_k + a(X_k) dt + sigma(X_k) sqrt(dt) xi_k
///   dZic_k  = h(X_k) dt + obs_noise_std sqrt(dt) eta_k
/// Throws NonFiniteError if any step produces NaN or infinity.
TruthPath simulate_truth(const FilterModel& m, int horizon, double dt, RngStream rng);

/// Built-in model registry: "linear_gaussian", "static_gaussian",
/// "bimodal_static", "sir". Unknown parameter keys are rejected.
FilterModel make_model(const std::string& name,
                       const std::map<std::string, double>& params = {});

/// Columns: k, t, x_1..x_d.
void write_state_path_csv(std::ostream& out, const TruthPath& path);
/// Columns: k, t, dZ.
void write_observation_csv(std::ostream& out, const ObservationPath& obs);

}  // namespace fpflab
