#include "fpflab/sir_pf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fpflab/errors.hpp"

namespace fpflab {

Eigen::VectorXd WeightedEnsemble::normalized_weights() const {
  Eigen::VectorXd w(log_weights.size());
  for (Eigen::Index i = 0; i < log_weights.size(); ++i)
    w(i) = std::isinf(log_weights(i)) ? 0.0 : std::exp(log_weights(i));
  return w;
}

double WeightedEnsemble::ess() const {
  return 1.0 / normalized_weights().squaredNorm();
}

WeightedEnsemble importance_weights(
    const Ensemble& e, const std::function<double(const Eigen::VectorXd&)>& log_lik) {
  const int n = e.size();
  Eigen::VectorXd logw(n);
  double max_log = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double value = log_lik(e.particles.row(i).transpose());
    if (std::isnan(value) || value == std::numeric_limits<double>::infinity())
      throw std::invalid_argument("importance_weights: log-likelihood must be finite or -inf");
    logw(i) = value;
    max_log = std::max(max_log, value);
  }
  if (std::isinf(max_log))
    throw AllWeightsZeroError("importance_weights: every log-likelihood is -inf");

  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    if (!std::isinf(logw(i))) sum += std::exp(logw(i) - max_log);
  const double log_norm = max_log + std::log(sum);
  for (int i = 0; i < n; ++i)
    if (!std::isinf(logw(i))) logw(i) -= log_norm;
  return WeightedEnsemble{e.particles, std::move(logw)};
}

Ensemble multinomial_resample(const WeightedEnsemble& w, RngStream rng) {
  const int n = w.size();
  const Eigen::VectorXd weights = w.normalized_weights();
  if (std::abs(weights.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("multinomial_resample: weights are not normalized");

  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += weights(i);
    cumulative[i] = acc;
  }
  cumulative[n - 1] = 1.0;

  Eigen::MatrixXd resampled(n, w.particles.cols());
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    // u lands in the left-closed interval [cum_{j-1}, cum_j).
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const int pick = std::min<int>(static_cast<int>(it - cumulative.begin()), n - 1);
    resampled.row(i) = w.particles.row(pick);
  }
  return Ensemble(std::move(resampled));
}

Ensemble sir_filter_step(const Ensemble& e, double y, const Eigen::RowVectorXd& H,
                         double sigma_w, RngStream rng) {
  if (H.size() != e.dim()) throw std::invalid_argument("sir_filter_step: H dimension mismatch");
  if (!(sigma_w > 0.0)) throw std::invalid_argument("sir_filter_step: need sigma_w > 0");
  const double inv_two_var = 1.0 / (2.0 * sigma_w * sigma_w);
  WeightedEnsemble weighted = importance_weights(e, [&](const Eigen::VectorXd& x) {
    const double r = y - (H * x)(0);
    return -r * r * inv_two_var;
  });
  return multinomial_resample(weighted, rng);
}

}  // namespace fpflab
