#include "fpflab/types.hpp"

#include <cmath>
#include <utility>

namespace fpflab {
namespace {

void check_particles(const Eigen::MatrixXd& p) {
  if (p.rows() < 2) throw std::invalid_argument("Ensemble: need at least 2 particles");
  if (p.cols() < 1) throw std::invalid_argument("Ensemble: need dimension >= 1");
  if (!p.allFinite()) throw std::invalid_argument("Ensemble: particles must be finite");
}

void check_weights(const Eigen::VectorXd& w, Eigen::Index n) {
  if (w.size() != n) throw std::invalid_argument("Ensemble: weight/particle size mismatch");
  if (!w.allFinite() || (w.array() < 0.0).any())
    throw std::invalid_argument("Ensemble: weights must be finite and nonnegative");
  if (std::abs(w.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("Ensemble: weights must sum to 1 within 1e-12");
}

}  // namespace

Ensemble::Ensemble(Eigen::MatrixXd particles_in) : particles(std::move(particles_in)) {
  check_particles(particles);
}

Ensemble::Ensemble(Eigen::MatrixXd particles_in, Eigen::VectorXd weights_in)
    : particles(std::move(particles_in)), weights(std::move(weights_in)) {
  check_particles(particles);
  check_weights(*weights, particles.rows());
}

GaussianBelief::GaussianBelief(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  if (mean.size() < 1) throw std::invalid_argument("GaussianBelief: empty mean");
  if (cov.rows() != mean.size() || cov.cols() != mean.size())
    throw std::invalid_argument("GaussianBelief: covariance shape mismatch");
  if (!mean.allFinite() || !cov.allFinite())
    throw std::invalid_argument("GaussianBelief: entries must be finite");

  const double scale = std::max(1e-300, cov.cwiseAbs().maxCoeff());
  if (((cov - cov.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale)
    throw NotSpdError("GaussianBelief: covariance is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NotSpdError("GaussianBelief: eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NotSpdError("GaussianBelief: covariance is not positive definite");
}

}  // namespace fpflab
