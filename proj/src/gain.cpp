#include "fpflab/gain.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "fpflab/csv.hpp"
#include "fpflab/errors.hpp"

namespace fpflab {

Eigen::VectorXd constant_gain(const Ensemble& e, const Eigen::VectorXd& h_vals) {
  if (e.weights)
    throw std::invalid_argument("constant_gain: expects an unweighted ensemble");
  if (h_vals.size() != e.size())
    throw std::invalid_argument("constant_gain: h_vals/particle size mismatch");
  const double hbar = h_vals.mean();
  return e.particles.transpose() * (h_vals.array() - hbar).matrix() /
         static_cast<double>(e.size());
}

DiffusionMapState dm_build(const Ensemble& e, const Eigen::VectorXd& h_vals,
                           double epsilon, int dense_cap) {
  const int n = e.size();
  if (h_vals.size() != n)
    throw std::invalid_argument("dm_build: h_vals/particle size mismatch");
  if (!(epsilon > 0.0)) throw std::invalid_argument("dm_build: need epsilon > 0");
  if (n > dense_cap)
    throw std::invalid_argument("dm_build: N exceeds the dense-kernel cap (" +
                                std::to_string(dense_cap) + ")");

  // Quadrature weights generalize the empirical construction; for uniform
  // ensembles w = 1 reproduces it term by term (T and pi are invariant under
  // scaling of w).
  const Eigen::VectorXd w =
      e.weights ? *e.weights : Eigen::VectorXd::Ones(n);

  const Eigen::VectorXd sq = e.particles.rowwise().squaredNorm();
  Eigen::MatrixXd dist2 = (-2.0 * e.particles * e.particles.transpose());
  dist2.colwise() += sq;
  dist2.rowwise() += sq.transpose();
  Eigen::MatrixXd g = (dist2.array().max(0.0) * (-1.0 / (4.0 * epsilon))).exp();

  const Eigen::VectorXd row_mass = g * w;
  if (!row_mass.allFinite() || row_mass.minCoeff() <= 0.0)
    throw DegenerateKernelError("dm_build: kernel row sum underflowed to zero");

  const Eigen::VectorXd inv_sqrt_mass = row_mass.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd k = inv_sqrt_mass.asDiagonal() * g * inv_sqrt_mass.asDiagonal();

  const Eigen::VectorXd degree = k * w;
  if (degree.minCoeff() <= 0.0)
    throw DegenerateKernelError("dm_build: zero degree after normalization");

  DiffusionMapState state;
  state.epsilon = epsilon;
  state.points = e.particles;
  state.transition = degree.cwiseInverse().asDiagonal() * k * w.asDiagonal();
  const Eigen::VectorXd dw = degree.cwiseProduct(w);
  state.pi = dw / dw.sum();
  state.hhat = state.pi.dot(h_vals);
  state.phi = Eigen::VectorXd::Zero(n);
  return state;
}

const Eigen::VectorXd& dm_fixed_point(DiffusionMapState& s, const Eigen::VectorXd& h_vals,
                                      double tol, int max_iter, bool warm_start) {
  const Eigen::Index n = s.transition.rows();
  if (h_vals.size() != n)
    throw std::invalid_argument("dm_fixed_point: h_vals size mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("dm_fixed_point: need tol > 0");
  if (max_iter < 1) throw std::invalid_argument("dm_fixed_point: need max_iter >= 1");

  const Eigen::VectorXd forcing = s.epsilon * (h_vals.array() - s.hhat).matrix();
  Eigen::VectorXd phi = warm_start ? s.phi : Eigen::VectorXd::Zero(n);
  Eigen::VectorXd next(n);

  double change = 0.0;
  for (int sweep = 1; sweep <= max_iter; ++sweep) {
    next.noalias() = s.transition * phi;
    next += forcing;
    next.array() -= s.pi.dot(next);  // pin the pi-mean; T is stochastic so the
                                     // fixed point is unique only up to constants
    change = (next - phi).lpNorm<Eigen::Infinity>();
    phi.swap(next);
    if (change < tol) {
      s.iterations = sweep;
      s.phi = std::move(phi);
      return s.phi;
    }
  }
  throw NoConvergenceError(max_iter, change);
}

GainField dm_gain(const DiffusionMapState& s, const Eigen::VectorXd& h_vals) {
  const Eigen::Index n = s.transition.rows();
  if (h_vals.size() != n) throw std::invalid_argument("dm_gain: h_vals size mismatch");

  const Eigen::VectorXd r = s.phi + s.epsilon * h_vals;
  const Eigen::VectorXd q = s.transition * r;  // q_i = sum_k T_ik r_k
  Eigen::MatrixXd gains = s.transition * (r.asDiagonal() * s.points);
  gains.noalias() -= q.asDiagonal() * (s.transition * s.points);
  gains /= 2.0 * s.epsilon;
  return GainField{std::move(gains)};
}

double ExactGain1d::interpolate(double xq) const {
  const Eigen::Index m = x.size();
  if (xq <= x(0)) return k(0);
  if (xq >= x(m - 1)) return k(m - 1);
  const double step = x(1) - x(0);
  const Eigen::Index idx =
      std::min<Eigen::Index>(static_cast<Eigen::Index>((xq - x(0)) / step), m - 2);
  const double frac = (xq - x(idx)) / step;
  return (1.0 - frac) * k(idx) + frac * k(idx + 1);
}

ExactGain1d exact_gain_1d(const std::function<double(double)>& density,
                          const std::function<double(double)>& h, double lo, double hi,
                          int m) {
  if (m < 512) throw std::invalid_argument("exact_gain_1d: need at least 512 grid points");
  if (!(hi > lo)) throw std::invalid_argument("exact_gain_1d: need hi > lo");

  ExactGain1d out;
  out.x = Eigen::VectorXd::LinSpaced(m, lo, hi);
  const double dx = out.x(1) - out.x(0);

  Eigen::VectorXd rho(m), hv(m);
  for (int i = 0; i < m; ++i) {
    rho(i) = density(out.x(i));
    hv(i) = h(out.x(i));
    if (!(rho(i) > 0.0))
      throw std::invalid_argument("exact_gain_1d: density must be positive on the grid");
  }

  auto trapezoid = [dx](const Eigen::VectorXd& f) {
    return dx * (f.sum() - 0.5 * (f(0) + f(f.size() - 1)));
  };
  const double mass = trapezoid(rho);
  if (mass < 0.999)
    throw GridTooNarrowError("exact_gain_1d: grid captures only " +
                             std::to_string(mass) + " probability mass");
  const double hhat = trapezoid(hv.cwiseProduct(rho)) / mass;

  const Eigen::VectorXd integrand = (hv.array() - hhat) * rho.array();
  Eigen::VectorXd cumulative(m);
  cumulative(0) = 0.0;
  for (int i = 1; i < m; ++i)
    cumulative(i) = cumulative(i - 1) + 0.5 * dx * (integrand(i - 1) + integrand(i));

  out.k = -cumulative.cwiseQuotient(rho);
  if (!out.k.allFinite())
    throw NonFiniteError("exact_gain_1d: gain is not finite on the grid");
  return out;
}

GalerkinResult galerkin_gain(const Ensemble& e, const Eigen::VectorXd& h_vals,
                             const std::vector<BasisFunction>& basis) {
  if (e.weights)
    throw std::invalid_argument("galerkin_gain: expects an unweighted ensemble");
  if (h_vals.size() != e.size())
    throw std::invalid_argument("galerkin_gain: h_vals/particle size mismatch");
  if (basis.empty()) throw std::invalid_argument("galerkin_gain: empty basis");

  const int n = e.size();
  const int d = e.dim();
  const int m = static_cast<int>(basis.size());
  const double hbar = h_vals.mean();

  // Cache psi and grad psi at the particles.
  Eigen::MatrixXd psi(n, m);
  std::vector<Eigen::MatrixXd> grads(m, Eigen::MatrixXd(n, d));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd x = e.particles.row(i).transpose();
      psi(i, j) = basis[j].psi(x);
      grads[j].row(i) = basis[j].grad(x).transpose();
    }
  }

  Eigen::MatrixXd gram(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const double value = grads[a].cwiseProduct(grads[b]).sum() / n;
      gram(a, b) = value;
      gram(b, a) = value;
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd& eig = es.eigenvalues();
  if (eig.maxCoeff() <= 0.0 || eig.minCoeff() < 1e-10 * eig.maxCoeff())
    throw SingularGramError("galerkin_gain: basis gradients are linearly dependent on the ensemble");

  const Eigen::VectorXd rhs = psi.transpose() * (h_vals.array() - hbar).matrix() / n;
  const Eigen::VectorXd coeffs =
      es.eigenvectors() * eig.cwiseInverse().asDiagonal() *
      (es.eigenvectors().transpose() * rhs);

  GainField gain{Eigen::MatrixXd::Zero(n, d)};
  for (int j = 0; j < m; ++j) gain.gains += coeffs(j) * grads[j];
  return GalerkinResult{coeffs, std::move(gain)};
}

double epsilon_heuristic(const Ensemble& e, bool include_self_pairs) {
  const int n = e.size();
  std::vector<double> dist2;
  dist2.reserve(static_cast<std::size_t>(n) * (n - 1) / 2 + (include_self_pairs ? n : 0));
  for (int i = 0; i < n; ++i) {
    if (include_self_pairs) dist2.push_back(0.0);
    for (int j = i + 1; j < n; ++j)
      dist2.push_back((e.particles.row(i) - e.particles.row(j)).squaredNorm());
  }
  std::sort(dist2.begin(), dist2.end());
  const std::size_t count = dist2.size();
  const double median = (count % 2 == 1)
                            ? dist2[count / 2]
                            : 0.5 * (dist2[count / 2 - 1] + dist2[count / 2]);
  if (!(median > 0.0))
    throw ZeroSpreadError("epsilon_heuristic: all particles coincide");
  return 10.0 * median / std::log(static_cast<double>(n));
}

void write_gain_field_csv(std::ostream& out, const Ensemble& e, const GainField& g) {
  const int d = e.dim();
  if (g.gains.rows() != e.size() || g.gains.cols() != d)
    throw std::invalid_argument("write_gain_field_csv: gain/ensemble shape mismatch");
  out << "i";
  for (int j = 1; j <= d; ++j) out << ",x_" << j;
  for (int j = 1; j <= d; ++j) out << ",k_" << j;
  out << "\n";
  for (int i = 0; i < e.size(); ++i) {
    out << i;
    for (int j = 0; j < d; ++j) out << ',' << format_double(e.particles(i, j));
    for (int j = 0; j < d; ++j) out << ',' << format_double(g.gains(i, j));
    out << "\n";
  }
}

}  // namespace fpflab
