#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <vector>

#include "fpflab/types.hpp"

namespace fpflab {

/// Per-particle gain vectors: row i is the gain evaluated at particle i.
struct GainField {
  Eigen::MatrixXd gains;  // N x d
};

/// Constant gain approximation: the best constant-in-x gain, computed as the
/// empirical covariance-style sum (divisor N)
///   (1/N) sum_i (h(X_i) - hbar) X_i,  hbar = (1/N) sum_i h(X_i).
Eigen::VectorXd constant_gain(const Ensemble& e, const Eigen::VectorXd& h_vals);

/// Kernel-based approximation of the semigroup of the probability-weighted
/// Laplacian, built from the particles:
///   g_ij = exp(-|X_i - X_j|^2 / (4 eps))
///   k_ij = g_ij / (sqrt(sum_l g_il w_l) sqrt(sum_l g_jl w_l))
///   d_i  = sum_j k_ij w_j,  T_ij = k_ij w_j / d_i,  pi_i = d_i w_i / sum_j d_j w_j
/// with w the ensemble weights (uniform 1/N unless explicit). T is
/// row-stochastic and pi is its invariant measure.
struct DiffusionMapState {
  double epsilon = 0.0;
  Eigen::MatrixXd points;      // N x d copy of the particles
  Eigen::MatrixXd transition;  // N x N row-stochastic T
  Eigen::VectorXd pi;          // invariant measure on the particles
  Eigen::VectorXd phi;         // potential values, filled by dm_fixed_point
  double hhat = 0.0;           // pi-weighted mean of h
  int iterations = 0;          // sweeps used by the last fixed-point solve
};

/// Builds the diffusion-map operator. Throws DegenerateKernelError if a
/// kernel row sum underflows to zero, and rejects N above dense_cap (dense
/// N x N storage).
DiffusionMapState dm_build(const Ensemble& e, const Eigen::VectorXd& h_vals,
                           double epsilon, int dense_cap = 10000);

/// Solves phi = T phi + eps (h - hhat) by Banach iteration from phi = 0
/// (or from the stored phi when warm_start is true). phi is re-centered to
/// pi-mean zero every sweep; iteration stops when the sup-norm change drops
/// below tol. Throws NoConvergenceError after max_iter sweeps.
const Eigen::VectorXd& dm_fixed_point(DiffusionMapState& s,
                                      const Eigen::VectorXd& h_vals,
                                      double tol = 1e-9, int max_iter = 10000,
                                      bool warm_start = false);

/// Gain field from the solved potential:
///   r_i = phi_i + eps h_i,  s_ij = T_ij (r_j - sum_k T_ik r_k) / (2 eps),
///   K_i = sum_j s_ij X_j.
GainField dm_gain(const DiffusionMapState& s, const Eigen::VectorXd& h_vals);

/// Exact 1-D gain by quadrature: K(x) = -(1/rho(x)) int_{-inf}^x (h - hhat) rho,
/// with trapezoidal integrals on a uniform grid of m >= 512 points. Throws
/// GridTooNarrowError if the grid captures less than 0.999 probability mass.
struct ExactGain1d {
  Eigen::VectorXd x;
  Eigen::VectorXd k;

  /// Linear interpolation, clamped to the grid ends.
  double interpolate(double xq) const;
};
ExactGain1d exact_gain_1d(const std::function<double(double)>& density,
                          const std::function<double(double)>& h, double lo,
                          double hi, int m = 4096);

/// One basis element psi with its gradient for the Galerkin solver.
struct BasisFunction {
  std::function<double(const Eigen::VectorXd&)> psi;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
};

struct GalerkinResult {
  Eigen::VectorXd coeffs;
  GainField gain;
};

/// Galerkin projection of the weak-form problem onto span{psi_m}:
///   A_mn = (1/N) sum_i grad psi_m(X_i) . grad psi_n(X_i)
///   b_m  = (1/N) sum_i psi_m(X_i) (h_i - hbar)
/// solve A c = b, gain rows K_i = sum_m c_m grad psi_m(X_i).
/// Throws SingularGramError if A is numerically singular.
GalerkinResult galerkin_gain(const Ensemble& e, const Eigen::VectorXd& h_vals,
                             const std::vector<BasisFunction>& basis);

/// Kernel bandwidth rule of thumb:
///   eps = 10 * median(|X_i - X_j|^2) / log N
/// The median is taken over the N(N-1)/2 distinct pairs i < j; setting
/// include_self_pairs adds the N zero self-distances back in. Throws
/// ZeroSpreadError when all particles coincide.
double epsilon_heuristic(const Ensemble& e, bool include_self_pairs = false);

/// Columns: i, x_1..x_d, k_1..k_d.
void write_gain_field_csv(std::ostream& out, const Ensemble& e,
                          const GainField& g);

}  // namespace fpflab
