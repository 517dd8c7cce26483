#include "fpflab/gaussian_coupling.hpp"

#include <cmath>

#include "fpflab/errors.hpp"
#include "fpflab/linalg.hpp"

namespace fpflab {
namespace {

void require_uniform(const Ensemble& e, const char* op) {
  if (e.weights)
    throw std::invalid_argument(std::string(op) + ": expects an unweighted ensemble");
}

struct EmpiricalUpdate {
  Eigen::VectorXd mean0;
  Eigen::MatrixXd cov0;
  Eigen::VectorXd gain;  // K = cov0 H' / (H cov0 H' + obs_var)
};

EmpiricalUpdate empirical_kalman(const Ensemble& e, const Eigen::RowVectorXd& H,
                                 double obs_var, const char* op) {
  if (e.size() < e.dim() + 1)
    throw std::invalid_argument(std::string(op) + ": need N >= d + 1 particles");
  Moments stats = ensemble_stats(e);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(stats.cov, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& eig = es.eigenvalues();
  if (eig.minCoeff() < 1e-10 * eig.maxCoeff() || eig.maxCoeff() <= 0.0)
    throw SingularCovarianceError(std::string(op) + ": empirical covariance is singular");
  const double s = (H * stats.cov * H.transpose())(0, 0) + obs_var;
  EmpiricalUpdate out;
  out.gain = stats.cov * H.transpose() / s;
  out.mean0 = std::move(stats.mean);
  out.cov0 = std::move(stats.cov);
  return out;
}

}  // namespace

GaussianBelief kalman_update(const GaussianBelief& prior, const Eigen::RowVectorXd& H,
                             double y, double obs_var) {
  if (H.size() != prior.dim())
    throw std::invalid_argument("kalman_update: H dimension mismatch");
  if (!H.allFinite() || !std::isfinite(y))
    throw std::invalid_argument("kalman_update: non-finite observation");
  if (!(obs_var > 0.0)) throw std::invalid_argument("kalman_update: need obs_var > 0");

  const double s = (H * prior.cov * H.transpose())(0, 0) + obs_var;
  const Eigen::VectorXd gain = prior.cov * H.transpose() / s;
  const Eigen::VectorXd mean1 = prior.mean + gain * (y - (H * prior.mean)(0));
  Eigen::MatrixXd cov1 = prior.cov - gain * (H * prior.cov);
  cov1 = ((cov1 + cov1.transpose()) / 2.0).eval();
  return GaussianBelief(mean1, cov1);  // ctor re-checks positivity
}

AffineMap ot_map(const GaussianBelief& prior, const GaussianBelief& post) {
  if (prior.dim() != post.dim()) throw std::invalid_argument("ot_map: dimension mismatch");
  const Eigen::MatrixXd root0 = spd_sqrt(prior.cov);
  const Eigen::MatrixXd inner = spd_sqrt(root0 * post.cov * root0);
  const Eigen::MatrixXd root0_inv = root0.inverse();
  Eigen::MatrixXd linear = root0_inv * inner * root0_inv;
  linear = ((linear + linear.transpose()) / 2.0).eval();
  return AffineMap{linear, post.mean - linear * prior.mean};
}

Ensemble ot_particle_update(const Ensemble& e, const Eigen::RowVectorXd& H, double y,
                            double obs_var) {
  require_uniform(e, "ot_particle_update");
  const EmpiricalUpdate emp = empirical_kalman(e, H, obs_var, "ot_particle_update");

  Eigen::MatrixXd cov1 = emp.cov0 - emp.gain * (H * emp.cov0);
  cov1 = ((cov1 + cov1.transpose()) / 2.0).eval();
  const Eigen::MatrixXd root0 = spd_sqrt(emp.cov0);
  const Eigen::MatrixXd inner = spd_sqrt(root0 * cov1 * root0);
  const Eigen::MatrixXd root0_inv = root0.inverse();
  Eigen::MatrixXd f = root0_inv * inner * root0_inv;
  f = ((f + f.transpose()) / 2.0).eval();

  const Eigen::VectorXd shift =
      emp.mean0 + emp.gain * (y - (H * emp.mean0)(0));  // = posterior mean
  Eigen::MatrixXd centered = e.particles.rowwise() - emp.mean0.transpose();
  Eigen::MatrixXd mapped = (centered * f.transpose()).rowwise() + shift.transpose();
  return Ensemble(std::move(mapped));
}

Ensemble enkf_particle_update(const Ensemble& e, const Eigen::RowVectorXd& H, double y,
                              RngStream rng, double obs_var) {
  require_uniform(e, "enkf_particle_update");
  const EmpiricalUpdate emp = empirical_kalman(e, H, obs_var, "enkf_particle_update");
  const double noise_std = std::sqrt(obs_var);

  Eigen::MatrixXd updated = e.particles;
  for (int i = 0; i < e.size(); ++i) {
    const double innovation = y - (H * e.particles.row(i).transpose())(0) +
                              noise_std * rng.derive(static_cast<std::uint64_t>(i)).normal();
    updated.row(i) += (emp.gain * innovation).transpose();
  }
  return Ensemble(std::move(updated));
}

Ensemble heat_flow_transport(const Ensemble& x0, double sigma0, double t) {
  if (x0.dim() != 1)
    throw std::invalid_argument("heat_flow_transport: 1-D ensembles only");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("heat_flow_transport: need sigma0 > 0");
  if (t < 0.0) throw std::invalid_argument("heat_flow_transport: need t >= 0");

  const double scale = std::sqrt((sigma0 * sigma0 + 2.0 * t) / (sigma0 * sigma0));
  if (x0.weights) return Ensemble(scale * x0.particles, *x0.weights);
  return Ensemble(scale * x0.particles);
}

}  // namespace fpflab
