#include "fpflab/model.hpp"

#include <cmath>
#include <ostream>
#include <set>

#include "fpflab/csv.hpp"
#include "fpflab/errors.hpp"
#include "fpflab/linalg.hpp"
#include "fpflab/sir.hpp"
#include "stream_ids.hpp"

namespace fpflab {

TruthPath simulate_truth(const FilterModel& m, int horizon, double dt, RngStream rng) {
  if (horizon < 1) throw std::invalid_argument("simulate_truth: need horizon >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_truth: need dt > 0");

  const int d = m.dim;
  const double sqrt_dt = std::sqrt(dt);
  TruthPath path;
  path.states.resize(horizon + 1, d);
  path.observations.dt = dt;
  path.observations.increments.resize(horizon);

  Eigen::MatrixXd x = m.prior(1, rng.derive(stream_ids::kPrior));
  path.states.row(0) = x.row(0);

  RngStream dyn = rng.derive(stream_ids::kDynamics);
  RngStream obs = rng.derive(stream_ids::kObservation);
  for (int k = 0; k < horizon; ++k) {
    const Eigen::VectorXd xk = path.states.row(k).transpose();
    const double hk = m.obs(xk);
    const double eta = obs.derive(k).normal();
    path.observations.increments(k) = hk * dt + m.obs_noise_std * sqrt_dt * eta;

    if (m.propagate) {
      Eigen::MatrixXd block = path.states.row(k);
      m.propagate(block, dt, dyn.derive(k));
      path.states.row(k + 1) = block.row(0);
    } else {
      RngStream noise = dyn.derive(k).derive(0);
      Eigen::VectorXd xi(d);
      for (int j = 0; j < d; ++j) xi(j) = noise.normal();
      path.states.row(k + 1) =
          (xk + m.drift(xk) * dt + m.diffusion(xk) * (sqrt_dt * xi)).transpose();
    }
    if (!path.states.row(k + 1).allFinite() ||
        !std::isfinite(path.observations.increments(k)))
      throw NonFiniteError("simulate_truth: non-finite value at step " + std::to_string(k));
  }
  return path;
}

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::string& model, const std::map<std::string, double>& params,
                    const std::set<std::string>& known) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (!known.count(key))
      throw ConfigError("model.params." + key, "unknown parameter for model '" + model + "'");
  }
}

Eigen::MatrixXd gaussian_prior_block(const GaussianBelief& belief, int n, RngStream rng) {
  const Eigen::MatrixXd factor = spd_sqrt(belief.cov);
  Eigen::MatrixXd out(n, belief.dim());
  for (int i = 0; i < n; ++i) {
    RngStream stream = rng.derive(static_cast<std::uint64_t>(i));
    Eigen::VectorXd z(belief.dim());
    for (int j = 0; j < belief.dim(); ++j) z(j) = stream.normal();
    out.row(i) = (belief.mean + factor * z).transpose();
  }
  return out;
}

FilterModel make_linear_gaussian(const std::map<std::string, double>& params) {
  reject_unknown("linear_gaussian", params,
                 {"dim", "a", "sigma_b", "h_scale", "sigma0", "obs_noise_std"});
  const int d = static_cast<int>(get_param(params, "dim", 1));
  if (d < 1) throw ConfigError("model.params.dim", "must be >= 1");
  const double a = get_param(params, "a", -0.5);
  const double sigma_b = get_param(params, "sigma_b", 1.0);
  const double h_scale = get_param(params, "h_scale", 1.0);
  const double sigma0 = get_param(params, "sigma0", 1.0);
  if (!(sigma0 > 0.0)) throw ConfigError("model.params.sigma0", "must be > 0");

  FilterModel m;
  m.dim = d;
  m.drift = [a](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; };
  m.diffusion = [d, sigma_b](const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return sigma_b * Eigen::MatrixXd::Identity(d, d);
  };
  m.obs = [h_scale](const Eigen::VectorXd& x) { return h_scale * x(0); };
  m.prior_gaussian = GaussianBelief(Eigen::VectorXd::Zero(d),
                                    sigma0 * sigma0 * Eigen::MatrixXd::Identity(d, d));
  GaussianBelief prior = *m.prior_gaussian;
  m.prior = [prior](int n, RngStream rng) { return gaussian_prior_block(prior, n, rng); };
  m.obs_noise_std = get_param(params, "obs_noise_std", 1.0);
  return m;
}

FilterModel make_static_gaussian(const std::map<std::string, double>& params) {
  reject_unknown("static_gaussian", params, {"dim", "sigma0", "obs_noise_std"});
  const int d = static_cast<int>(get_param(params, "dim", 1));
  if (d < 1) throw ConfigError("model.params.dim", "must be >= 1");
  const double sigma0 = get_param(params, "sigma0", 1.0);
  if (!(sigma0 > 0.0)) throw ConfigError("model.params.sigma0", "must be > 0");

  FilterModel m;
  m.dim = d;
  m.drift = [d](const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(d); };
  m.diffusion = [d](const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Zero(d, d);
  };
  m.obs = [](const Eigen::VectorXd& x) { return x(0); };
  m.prior_gaussian = GaussianBelief(Eigen::VectorXd::Zero(d),
                                    sigma0 * sigma0 * Eigen::MatrixXd::Identity(d, d));
  GaussianBelief prior = *m.prior_gaussian;
  m.prior = [prior](int n, RngStream rng) { return gaussian_prior_block(prior, n, rng); };
  m.obs_noise_std = get_param(params, "obs_noise_std", 1.0);
  return m;
}

FilterModel make_bimodal_static(const std::map<std::string, double>& params) {
  reject_unknown("bimodal_static", params, {"mode", "sigma2", "obs_noise_std"});
  const double mode = get_param(params, "mode", 1.0);
  const double sigma2 = get_param(params, "sigma2", 0.2);
  if (!(sigma2 > 0.0)) throw ConfigError("model.params.sigma2", "must be > 0");
  const double sigma = std::sqrt(sigma2);

  FilterModel m;
  m.dim = 1;
  m.drift = [](const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(1); };
  m.diffusion = [](const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Zero(1, 1);
  };
  m.obs = [](const Eigen::VectorXd& x) { return x(0); };
  m.prior = [mode, sigma](int n, RngStream rng) {
    Eigen::MatrixXd out(n, 1);
    for (int i = 0; i < n; ++i) {
      RngStream stream = rng.derive(static_cast<std::uint64_t>(i));
      const double center = stream.uniform() < 0.5 ? -mode : mode;
      out(i, 0) = center + sigma * stream.normal();
    }
    return out;
  };
  m.obs_noise_std = get_param(params, "obs_noise_std", 1.0);
  return m;
}

FilterModel make_sir(const std::map<std::string, double>& params) {
  reject_unknown("sir", params,
                 {"alpha", "sigma_b", "sigma_w", "beta_prior_mean", "beta_prior_std"});
  const double alpha = get_param(params, "alpha", 0.1);
  const double sigma_b = get_param(params, "sigma_b", 0.1);
  const double sigma_w = get_param(params, "sigma_w", 0.1);
  const double beta_mean = get_param(params, "beta_prior_mean", 0.15);
  const double beta_std = get_param(params, "beta_prior_std", 0.05);
  if (alpha < 0.0) throw ConfigError("model.params.alpha", "must be >= 0");
  if (sigma_b < 0.0) throw ConfigError("model.params.sigma_b", "must be >= 0");
  if (!(sigma_w > 0.0)) throw ConfigError("model.params.sigma_w", "must be > 0");
  if (beta_std < 0.0) throw ConfigError("model.params.beta_prior_std", "must be >= 0");

  FilterModel m;
  m.dim = 3;  // (s, i, beta)
  m.drift = [alpha](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd dx(3);
    dx(0) = -x(2) * x(0) * x(1);
    dx(1) = x(2) * x(0) * x(1) - alpha * x(1);
    dx(2) = 0.0;
    return dx;
  };
  m.diffusion = [sigma_b](const Eigen::VectorXd&) -> Eigen::MatrixXd {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
    s(2, 2) = sigma_b;
    return s;
  };
  m.obs = [](const Eigen::VectorXd& x) { return x(2) * x(0) * x(1); };
  m.prior = [beta_mean, beta_std](int n, RngStream rng) {
    Eigen::MatrixXd out(n, 3);
    for (int i = 0; i < n; ++i) {
      RngStream stream = rng.derive(static_cast<std::uint64_t>(i));
      const double infected = 0.1 * stream.uniform();
      out(i, 0) = 1.0 - infected;
      out(i, 1) = infected;
      double beta = beta_mean + beta_std * stream.normal();
      while (beta < 0.0) beta = beta_mean + beta_std * stream.normal();  // truncate at 0
      out(i, 2) = beta;
    }
    return out;
  };
  m.obs_noise_std = sigma_w;
  m.propagate = [alpha, sigma_b](Eigen::MatrixXd& particles, double dt, RngStream rng) {
    sir_particle_propagate(particles, alpha, sigma_b, dt, rng);
  };
  return m;
}

}  // namespace

FilterModel make_model(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "linear_gaussian") return make_linear_gaussian(params);
  if (name == "static_gaussian") return make_static_gaussian(params);
  if (name == "bimodal_static") return make_bimodal_static(params);
  if (name == "sir") return make_sir(params);
  throw ConfigError("model", "unknown model '" + name + "'");
}

void write_state_path_csv(std::ostream& out, const TruthPath& path) {
  const int d = static_cast<int>(path.states.cols());
  out << "k,t";
  for (int j = 1; j <= d; ++j) out << ",x_" << j;
  out << "\n";
  for (Eigen::Index k = 0; k < path.states.rows(); ++k) {
    out << k << ',' << format_double(static_cast<double>(k) * path.observations.dt);
    for (int j = 0; j < d; ++j) out << ',' << format_double(path.states(k, j));
    out << "\n";
  }
}

void write_observation_csv(std::ostream& out, const ObservationPath& obs) {
  out << "k,t,dZ\n";
  for (int k = 0; k < obs.steps(); ++k) {
    out << k << ',' << format_double(k * obs.dt) << ','
        << format_double(obs.increments(k)) << "\n";
  }
}

}  // namespace fpflab
