#include "fpflab/linalg.hpp"

#include <cmath>

#include "fpflab/errors.hpp"

namespace fpflab {

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument("spd_sqrt: matrix must be square");
  if (!m.allFinite()) throw NotSpdError("spd_sqrt: matrix has non-finite entries");

  const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NotSpdError("spd_sqrt: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw NotSpdError("spd_sqrt: eigendecomposition failed");
  const Eigen::VectorXd& eig = es.eigenvalues();
  if (eig.minCoeff() <= 1e-12 * eig.maxCoeff() || eig.maxCoeff() <= 0.0)
    throw NotSpdError("spd_sqrt: matrix is not positive definite");

  Eigen::MatrixXd s = es.eigenvectors() * eig.cwiseSqrt().asDiagonal() *
                      es.eigenvectors().transpose();
  return (s + s.transpose()) / 2.0;
}

Moments ensemble_stats(const Ensemble& e) {
  const int n = e.size();
  Moments out;
  if (!e.weights) {
    out.mean = e.particles.colwise().mean();
    const Eigen::MatrixXd centered = e.particles.rowwise() - out.mean.transpose();
    out.cov = centered.transpose() * centered / static_cast<double>(n - 1);
  } else {
    const Eigen::VectorXd& w = *e.weights;
    out.mean = e.particles.transpose() * w;
    const Eigen::MatrixXd centered = e.particles.rowwise() - out.mean.transpose();
    const double denom = 1.0 - w.squaredNorm();
    if (denom <= 0.0)
      throw std::invalid_argument("ensemble_stats: degenerate weights (one particle carries all mass)");
    out.cov = centered.transpose() * w.asDiagonal() * centered / denom;
  }
  out.cov = ((out.cov + out.cov.transpose()) / 2.0).eval();
  return out;
}

Ensemble sample_gaussian(const GaussianBelief& belief, int n, RngStream rng) {
  if (n < 1) throw std::invalid_argument("sample_gaussian: need n >= 1");
  const int d = belief.dim();
  const Eigen::MatrixXd factor = spd_sqrt(belief.cov);

  Eigen::MatrixXd particles(n, d);
  for (int i = 0; i < n; ++i) {
    RngStream stream = rng.derive(static_cast<std::uint64_t>(i));
    Eigen::VectorXd z(d);
    for (int j = 0; j < d; ++j) z(j) = stream.normal();
    particles.row(i) = (belief.mean + factor * z).transpose();
  }
  return Ensemble(std::move(particles));
}

}  // namespace fpflab
