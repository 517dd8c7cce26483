#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fpflab/report.hpp"
#include "fpflab/rng.hpp"

namespace fpflab {

/// Benchmark of the one-shot importance-sampling filter against the feedback
/// particle filter on the static d-dimensional problem
///   dX = 0, X_0 ~ N(0, sigma0^2 I_d),  dZ = X dt + sigma_w dW,  t in [0, 1],
/// where every coordinate is observed. The exact posterior mean is
/// m1 = sigma0^2 Z_1 / (sigma0^2 + sigma_w^2).
///
/// PF: weights w_i = exp(-|Z_1 - X_i|^2 / (2 sigma_w^2)) normalized by the
/// closed-form conditional expectation of the likelihood, estimate
/// (1/N) sum_i w_i X_i. FPF: Euler steps of
///   dX_i = Sigma^(N)/sigma_w^2 (dZ - (X_i + m^(N))/2 dt).
/// The recorded mse is the per-coordinate squared error |m^(N) - m1|^2 / d
/// averaged over trials; both filters share each trial's truth and
/// observation path.
struct CodConfig {
  std::vector<int> dims;
  std::vector<int> ns;
  int trials = 1000;
  double sigma0 = 1.0;
  double sigma_w = 1.0;
  double dt = 0.01;
  int threads = 0;
};
ExperimentReport cod_benchmark(const CodConfig& cfg, RngStream rng);

/// Bias/variance sweep of the diffusion-map gain on the bimodal density
/// 0.5 N(-mode, mode_var) + 0.5 N(+mode, mode_var) with h(x) = x. For each
/// epsilon the r.m.s.e. against the quadrature gain is averaged over trials;
/// the constant-gain r.m.s.e. is the baseline. bias_proxy is the error of
/// the diffusion-map gain built on the quadrature grid itself (no sampling
/// variance), isolating the epsilon bias.
struct GainSweepConfig {
  std::vector<double> eps_grid;
  int n = 200;
  int trials = 1000;
  double mode = 1.0;
  double mode_var = 0.2;
  int grid_m = 4096;
  int bias_grid_m = 512;
  double fp_tol = 1e-9;
  int fp_max_iter = 400000;
  int threads = 0;
};
ExperimentReport gain_sweep(const GainSweepConfig& cfg, RngStream rng);

/// Joint state and parameter estimation on the SIR model: the truth is
/// simulated once with beta fixed, then the FPF runs on the 3-D particle
/// state (S, I, beta) with h(s, i, beta) = beta*s*i and beta random-walk
/// dynamics, once per gain backend (constant and diffusion map with the
/// bandwidth heuristic). Both backends see the same truth.
struct SirDemoConfig {
  double dt = 1.0;
  double sigma_w = 0.1;
  double sigma_b = 0.1;
  int n_particles = 100;
  double alpha = 0.1;
  double beta = 0.1;
  int horizon = 100;
  double beta_prior_mean = 0.15;
  double beta_prior_std = 0.05;
  std::optional<double> epsilon;  // empty = heuristic per step
  double fp_tol = 1e-9;
  int fp_max_iter = 10000;
  int threads = 0;
};
ExperimentReport sir_demo(const SirDemoConfig& cfg, RngStream rng);

}  // namespace fpflab
