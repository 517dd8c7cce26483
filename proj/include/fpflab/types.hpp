#pragma once

#include <Eigen/Dense>
#include <optional>

#include "fpflab/errors.hpp"

namespace fpflab {

/// Empirical distribution: N particles in d dimensions, optionally carrying
/// simplex weights (absent weights mean uniform 1/N).
struct Ensemble {
  Eigen::MatrixXd particles;               // N x d
  std::optional<Eigen::VectorXd> weights;  // length N, >= 0, sums to 1

  explicit Ensemble(Eigen::MatrixXd particles_in);
  Ensemble(Eigen::MatrixXd particles_in, Eigen::VectorXd weights_in);

  int size() const { return static_cast<int>(particles.rows()); }
  int dim() const { return static_cast<int>(particles.cols()); }
};

/// Gaussian state estimate with an SPD covariance.
struct GaussianBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  GaussianBelief(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in);

  int dim() const { return static_cast<int>(mean.size()); }
};

}  // namespace fpflab
