#pragma once

#include <Eigen/Dense>

#include "fpflab/rng.hpp"
#include "fpflab/types.hpp"

namespace fpflab {

/// Symmetric square root of an SPD matrix via eigendecomposition.
///
/// Throws NotSpdError if the input is not symmetric or its smallest
/// eigenvalue is below 1e-12 times the largest.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m);

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Ensemble mean and covariance. Uniform weights use the 1/(N-1) divisor;
/// explicit weights use the unbiased weighted form with divisor 1 - sum(w^2).
Moments ensemble_stats(const Ensemble& e);

/// n i.i.d. draws from the belief, using spd_sqrt(cov) as the affine factor.
/// Particle i consumes rng.derive(i), so draws are scheduling-independent.
Ensemble sample_gaussian(const GaussianBelief& belief, int n, RngStream rng);

}  // namespace fpflab
