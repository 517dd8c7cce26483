#pragma once

#include <Eigen/Dense>
#include <functional>

#include "fpflab/rng.hpp"
#include "fpflab/types.hpp"

namespace fpflab {

/// Particles with normalized log weights (natural log; exp sums to 1).
struct WeightedEnsemble {
  Eigen::MatrixXd particles;   // N x d
  Eigen::VectorXd log_weights; // length N, may contain -inf

  int size() const { return static_cast<int>(particles.rows()); }
  Eigen::VectorXd normalized_weights() const;
  /// Effective sample size 1 / sum(w_i^2), always in [1, N].
  double ess() const;
};

/// Importance-sampling step: w_i proportional to exp(log_lik(X_i)),
/// normalized in log space via max-subtraction. log_lik may be -inf on a
/// strict subset of particles; AllWeightsZeroError if on all of them.
WeightedEnsemble importance_weights(
    const Ensemble& e,
    const std::function<double(const Eigen::VectorXd&)>& log_lik);

/// N independent draws with replacement, P(pick i) = w_i. Inverse-CDF with
/// left-closed intervals on the cumulative weights; draws are sequential so
/// the output is a pure function of the RngStream.
Ensemble multinomial_resample(const WeightedEnsemble& w, RngStream rng);

/// One sequential importance-resampling step for the Gaussian likelihood
/// exp(-(y - H x)^2 / (2 sigma_w^2)): weight then resample.
Ensemble sir_filter_step(const Ensemble& e, double y,
                         const Eigen::RowVectorXd& H, double sigma_w,
                         RngStream rng);

}  // namespace fpflab
