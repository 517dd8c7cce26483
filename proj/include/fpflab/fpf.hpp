#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fpflab/gain.hpp"
#include "fpflab/model.hpp"
#include "fpflab/rng.hpp"
#include "fpflab/types.hpp"

namespace fpflab {

enum class GainBackend { kConstant, kDiffusionMap, kGalerkin };

struct FpfConfig {
  GainBackend backend = GainBackend::kConstant;
  std::optional<double> epsilon;        // diffusion map; empty = bandwidth heuristic
  std::vector<BasisFunction> basis;     // Galerkin backend
  double dt = 0.01;
  int n_particles = 100;
  double obs_noise_std = 1.0;           // scales the gain by 1/sigma_w^2
  bool heun = false;                    // predictor-corrector instead of explicit Euler
  bool warm_start = false;              // reuse phi across steps (diffusion map)
  double fp_tol = 1e-9;
  int fp_max_iter = 10000;
  int dm_dense_cap = 10000;
};

struct StepDiagnostics {
  double hhat = 0.0;       // uniform particle average of h (pre-step)
  double hhat_pi = 0.0;    // pi-weighted average used inside the diffusion map
  double gain_norm = 0.0;  // mean particle gain magnitude
  int gain_iters = 0;      // fixed-point sweeps (0 for constant/Galerkin)
};

/// One step of the feedback particle filter,
///   X_i <- X_i + a(X_i) dt + sigma(X_i) sqrt(dt) xi_i
///              + K_i (dZ - (h(X_i) + hhat)/2 dt),
/// with the gain field K computed from the pre-step ensemble by the chosen
/// backend and scaled by 1/obs_noise_std^2. hhat is the uniform particle
/// average of h. With cfg.heun the drift and update terms are averaged over
/// a predictor step. warm_phi, when given, carries the diffusion-map
/// potential across steps.
Ensemble fpf_step(const Ensemble& e, const FilterModel& m, const FpfConfig& cfg,
                  double dz, RngStream rng, StepDiagnostics* diag = nullptr,
                  Eigen::VectorXd* warm_phi = nullptr);

/// Linear-Gaussian specialization (square-root ensemble update): the gain is
/// the empirical Kalman gain K = Sigma^(N) H' / obs_noise_var and
///   X_i <- X_i + A X_i dt + process_noise_std sqrt(dt) xi_i
///              + K (dZ - (H X_i + H m^(N))/2 dt).
Ensemble linear_fpf_step(const Ensemble& e, const Eigen::MatrixXd& A,
                         const Eigen::RowVectorXd& H, double dz, double dt,
                         RngStream rng, double process_noise_std = 1.0,
                         double obs_noise_var = 1.0);

/// Exact filter state for the linear-Gaussian reference.
struct KalmanBucyState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Explicit Euler step of the Kalman-Bucy mean SDE and Riccati ODE:
///   mean <- mean + A mean dt + K (dZ - H mean dt),  K = cov H' / obs_noise_var
///   cov  <- cov + (A cov + cov A' + Q - cov H' H cov / obs_noise_var) dt
/// The covariance is re-symmetrized; NotSpdError if positivity is lost.
KalmanBucyState kalman_bucy_step(const KalmanBucyState& s,
                                 const Eigen::MatrixXd& A,
                                 const Eigen::RowVectorXd& H,
                                 const Eigen::MatrixXd& Q, double dz, double dt,
                                 double obs_noise_var = 1.0);

struct FpfRunRecord {
  int step = 0;
  double t = 0.0;
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
  double hhat = 0.0;
  double gain_norm = 0.0;
  int gain_iters = 0;
};

struct FpfRunResult {
  std::vector<FpfRunRecord> records;  // records[0] summarizes the prior
  Eigen::MatrixXd final_particles;
};

/// Runs fpf_step over a whole observation path, logging per-step summaries.
FpfRunResult fpf_run(const FilterModel& m, const ObservationPath& obs,
                     const FpfConfig& cfg, RngStream rng);

/// Columns: step, t, mean_1..mean_d, std_1..std_d, hhat, gain_norm, gain_iters.
void write_trajectory_csv(std::ostream& out, const FpfRunResult& result);

}  // namespace fpflab
