#include "fpflab/fpf.hpp"

#include <cmath>
#include <ostream>

#include "fpflab/csv.hpp"
#include "fpflab/errors.hpp"
#include "fpflab/linalg.hpp"
#include "stream_ids.hpp"

namespace fpflab {
namespace {

Eigen::VectorXd observe_all(const FilterModel& m, const Eigen::MatrixXd& particles) {
  Eigen::VectorXd h(particles.rows());
  for (Eigen::Index i = 0; i < particles.rows(); ++i)
    h(i) = m.obs(particles.row(i).transpose());
  return h;
}

struct GainEvaluation {
  Eigen::MatrixXd gains;  // N x d, already scaled by 1/obs_noise_std^2
  double hhat_pi = 0.0;
  int iterations = 0;
};

GainEvaluation evaluate_gain(const Eigen::MatrixXd& particles,
                             const Eigen::VectorXd& h_vals, const FpfConfig& cfg,
                             Eigen::VectorXd* warm_phi) {
  const Ensemble e(particles);
  GainEvaluation out;
  switch (cfg.backend) {
    case GainBackend::kConstant: {
      const Eigen::VectorXd k = constant_gain(e, h_vals);
      out.gains = k.transpose().replicate(e.size(), 1);
      break;
    }
    case GainBackend::kDiffusionMap: {
      const double eps = cfg.epsilon ? *cfg.epsilon : epsilon_heuristic(e);
      DiffusionMapState state = dm_build(e, h_vals, eps, cfg.dm_dense_cap);
      const bool warm = cfg.warm_start && warm_phi && warm_phi->size() == e.size();
      if (warm) state.phi = *warm_phi;
      dm_fixed_point(state, h_vals, cfg.fp_tol, cfg.fp_max_iter, warm);
      out.gains = dm_gain(state, h_vals).gains;
      out.hhat_pi = state.hhat;
      out.iterations = state.iterations;
      if (cfg.warm_start && warm_phi) *warm_phi = state.phi;
      break;
    }
    case GainBackend::kGalerkin: {
      out.gains = galerkin_gain(e, h_vals, cfg.basis).gain.gains;
      break;
    }
  }
  out.gains /= cfg.obs_noise_std * cfg.obs_noise_std;
  return out;
}

Eigen::MatrixXd propagate_dynamics(const FilterModel& m, const Eigen::MatrixXd& particles,
                                   double dt, RngStream dyn) {
  Eigen::MatrixXd next = particles;
  if (m.propagate) {
    m.propagate(next, dt, dyn);
    return next;
  }
  const double sqrt_dt = std::sqrt(dt);
  const int d = static_cast<int>(particles.cols());
  for (Eigen::Index i = 0; i < particles.rows(); ++i) {
    RngStream noise = dyn.derive(static_cast<std::uint64_t>(i));
    Eigen::VectorXd xi(d);
    for (int j = 0; j < d; ++j) xi(j) = noise.normal();
    const Eigen::VectorXd x = particles.row(i).transpose();
    next.row(i) = (x + m.drift(x) * dt + m.diffusion(x) * (sqrt_dt * xi)).transpose();
  }
  return next;
}

}  // namespace

Ensemble fpf_step(const Ensemble& e, const FilterModel& m, const FpfConfig& cfg, double dz,
                  RngStream rng, StepDiagnostics* diag, Eigen::VectorXd* warm_phi) {
  if (e.weights) throw std::invalid_argument("fpf_step: expects an unweighted ensemble");
  if (e.dim() != m.dim) throw std::invalid_argument("fpf_step: ensemble/model dimension mismatch");
  if (!std::isfinite(dz)) throw std::invalid_argument("fpf_step: non-finite observation increment");

  const double dt = cfg.dt;
  const Eigen::VectorXd h_vals = observe_all(m, e.particles);
  const double hhat = h_vals.mean();
  GainEvaluation gain = evaluate_gain(e.particles, h_vals, cfg, warm_phi);

  Eigen::MatrixXd next = propagate_dynamics(m, e.particles, dt, rng.derive(stream_ids::kDynamics));
  // Innovation uses the pre-step particle prediction and population average.
  for (Eigen::Index i = 0; i < next.rows(); ++i) {
    const double innovation = dz - 0.5 * (h_vals(i) + hhat) * dt;
    next.row(i) += innovation * gain.gains.row(i);
  }

  if (cfg.heun && !m.propagate) {
    // Predictor-corrector: average drift and gain-times-innovation between
    // the start point and the explicit predictor; diffusion noise unchanged.
    const Eigen::VectorXd h_pred = observe_all(m, next);
    const double hhat_pred = h_pred.mean();
    GainEvaluation gain_pred = evaluate_gain(next, h_pred, cfg, nullptr);
    Eigen::MatrixXd corrected = propagate_dynamics(m, e.particles, dt, rng.derive(stream_ids::kDynamics));
    for (Eigen::Index i = 0; i < corrected.rows(); ++i) {
      const Eigen::VectorXd x0 = e.particles.row(i).transpose();
      const Eigen::VectorXd x1 = next.row(i).transpose();
      corrected.row(i) += 0.5 * dt * (m.drift(x1) - m.drift(x0)).transpose();
      const double innov0 = dz - 0.5 * (h_vals(i) + hhat) * dt;
      const double innov1 = dz - 0.5 * (h_pred(i) + hhat_pred) * dt;
      corrected.row(i) +=
          0.5 * (innov0 * gain.gains.row(i) + innov1 * gain_pred.gains.row(i)) -
          innov0 * gain.gains.row(i);
      corrected.row(i) += innov0 * gain.gains.row(i);
    }
    next = std::move(corrected);
  }

  if (!next.allFinite()) throw NonFiniteError("fpf_step: particle blow-up");
  if (diag) {
    diag->hhat = hhat;
    diag->hhat_pi = gain.hhat_pi;
    diag->gain_norm = gain.gains.rowwise().norm().mean();
    diag->gain_iters = gain.iterations;
  }
  return Ensemble(std::move(next));
}

Ensemble linear_fpf_step(const Ensemble& e, const Eigen::MatrixXd& A,
                         const Eigen::RowVectorXd& H, double dz, double dt, RngStream rng,
                         double process_noise_std, double obs_noise_var) {
  if (e.weights) throw std::invalid_argument("linear_fpf_step: expects an unweighted ensemble");
  const int d = e.dim();
  if (A.rows() != d || A.cols() != d || H.size() != d)
    throw std::invalid_argument("linear_fpf_step: A/H dimension mismatch");

  const Moments stats = ensemble_stats(e);
  const Eigen::VectorXd gain = stats.cov * H.transpose() / obs_noise_var;
  const double h_mean = (H * stats.mean)(0);
  const double sqrt_dt = std::sqrt(dt);

  RngStream dyn = rng.derive(stream_ids::kDynamics);
  Eigen::MatrixXd next = e.particles;
  for (Eigen::Index i = 0; i < next.rows(); ++i) {
    RngStream noise = dyn.derive(static_cast<std::uint64_t>(i));
    Eigen::VectorXd xi(d);
    for (int j = 0; j < d; ++j) xi(j) = noise.normal();
    const Eigen::VectorXd x = e.particles.row(i).transpose();
    const double innovation = dz - 0.5 * ((H * x)(0) + h_mean) * dt;
    next.row(i) = (x + A * x * dt + process_noise_std * sqrt_dt * xi + gain * innovation)
                      .transpose();
  }
  if (!next.allFinite()) throw NonFiniteError("linear_fpf_step: particle blow-up");
  return Ensemble(std::move(next));
}

KalmanBucyState kalman_bucy_step(const KalmanBucyState& s, const Eigen::MatrixXd& A,
                                 const Eigen::RowVectorXd& H, const Eigen::MatrixXd& Q,
                                 double dz, double dt, double obs_noise_var) {
  const int d = static_cast<int>(s.mean.size());
  if (A.rows() != d || A.cols() != d || H.size() != d || Q.rows() != d || Q.cols() != d)
    throw std::invalid_argument("kalman_bucy_step: dimension mismatch");

  const Eigen::VectorXd gain = s.cov * H.transpose() / obs_noise_var;
  KalmanBucyState next;
  next.mean = s.mean + A * s.mean * dt + gain * (dz - (H * s.mean)(0) * dt);
  Eigen::MatrixXd dcov = A * s.cov + s.cov * A.transpose() + Q -
                         s.cov * H.transpose() * H * s.cov / obs_noise_var;
  next.cov = s.cov + dcov * dt;
  next.cov = ((next.cov + next.cov.transpose()) / 2.0).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(next.cov, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NotSpdError("kalman_bucy_step: covariance lost positivity (dt too large)");
  return next;
}

FpfRunResult fpf_run(const FilterModel& m, const ObservationPath& obs, const FpfConfig& cfg,
                     RngStream rng) {
  if (cfg.n_particles < 2) throw std::invalid_argument("fpf_run: need n_particles >= 2");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("fpf_run: need dt > 0");

  Ensemble e(m.prior(cfg.n_particles, rng.derive(stream_ids::kPrior)));
  Eigen::VectorXd warm_phi;

  FpfRunResult result;
  result.records.reserve(obs.steps() + 1);
  auto summarize = [&](int step, const Ensemble& ensemble, const StepDiagnostics& diag) {
    const Moments stats = ensemble_stats(ensemble);
    FpfRunRecord rec;
    rec.step = step;
    rec.t = step * cfg.dt;
    rec.mean = stats.mean;
    rec.std = stats.cov.diagonal().cwiseSqrt();
    rec.hhat = diag.hhat;
    rec.gain_norm = diag.gain_norm;
    rec.gain_iters = diag.gain_iters;
    result.records.push_back(std::move(rec));
  };

  StepDiagnostics prior_diag;
  prior_diag.hhat = observe_all(m, e.particles).mean();
  summarize(0, e, prior_diag);

  for (int k = 0; k < obs.steps(); ++k) {
    StepDiagnostics diag;
    e = fpf_step(e, m, cfg, obs.increments(k), rng.derive(stream_ids::kUpdate).derive(k),
                 &diag, &warm_phi);
    summarize(k + 1, e, diag);
  }
  result.final_particles = e.particles;
  return result;
}

void write_trajectory_csv(std::ostream& out, const FpfRunResult& result) {
  if (result.records.empty()) return;
  const int d = static_cast<int>(result.records.front().mean.size());
  out << "step,t";
  for (int j = 1; j <= d; ++j) out << ",mean_" << j;
  for (int j = 1; j <= d; ++j) out << ",std_" << j;
  out << ",hhat,gain_norm,gain_iters\n";
  for (const FpfRunRecord& rec : result.records) {
    out << rec.step << ',' << format_double(rec.t);
    for (int j = 0; j < d; ++j) out << ',' << format_double(rec.mean(j));
    for (int j = 0; j < d; ++j) out << ',' << format_double(rec.std(j));
    out << ',' << format_double(rec.hhat) << ',' << format_double(rec.gain_norm) << ','
        << rec.gain_iters << "\n";
  }
}

}  // namespace fpflab
