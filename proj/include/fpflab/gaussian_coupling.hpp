#pragma once

#include <Eigen/Dense>

#include "fpflab/rng.hpp"
#include "fpflab/types.hpp"

namespace fpflab {

/// T(x) = linear * x + offset. For transport maps between Gaussians the
/// linear part is the unique symmetric solution F of F * cov0 * F = cov1.
struct AffineMap {
  Eigen::MatrixXd linear;
  Eigen::VectorXd offset;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const {
    return linear * x + offset;
  }
};

/// Conjugate Gaussian update for a scalar observation y = H x + noise with
/// noise variance obs_var:
///   K     = cov0 H' / (H cov0 H' + obs_var)
///   mean1 = mean0 + K (y - H mean0)
///   cov1  = cov0 - K H cov0            (symmetrized)
GaussianBelief kalman_update(const GaussianBelief& prior,
                             const Eigen::RowVectorXd& H, double y,
                             double obs_var = 1.0);

/// Optimal transport map sending N(m0, cov0) to N(m1, cov1):
///   T(x) = F (x - m0) + m1,  F = cov0^{-1/2} (cov0^{1/2} cov1 cov0^{1/2})^{1/2} cov0^{-1/2}
AffineMap ot_map(const GaussianBelief& prior, const GaussianBelief& post);

/// Deterministic transport update of an unweighted ensemble. Empirical mean
/// and covariance are recomputed internally (1/(N-1) divisor), the posterior
/// moments follow the Kalman formulas, and every particle is mapped by
///   X1_i = F (X0_i - m0) + m0 + K (y - H m0).
/// Throws SingularCovarianceError if the empirical covariance is singular.
Ensemble ot_particle_update(const Ensemble& e, const Eigen::RowVectorXd& H,
                            double y, double obs_var = 1.0);

/// Stochastic ensemble update with perturbed observations:
///   X1_i = X0_i + K (y - H X0_i + W_i),  W_i ~ N(0, obs_var) i.i.d.
/// Particle i draws its noise from rng.derive(i).
Ensemble enkf_particle_update(const Ensemble& e, const Eigen::RowVectorXd& H,
                              double y, RngStream rng, double obs_var = 1.0);

/// Closed-form deterministic transport along the heat flow for 1-D samples of
/// N(0, sigma0^2): each sample is scaled by sqrt((sigma0^2 + 2t) / sigma0^2),
/// which solves dX/dt = -grad log p_t(X) when p_t = N(0, sigma0^2 + 2t).
Ensemble heat_flow_transport(const Ensemble& x0, double sigma0, double t);

}  // namespace fpflab
