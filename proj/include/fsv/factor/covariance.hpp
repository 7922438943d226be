#pragma once

#include <Eigen/Dense>

namespace fsv::factor {

// Sigma_t = Lambda * diag(v) * Lambda' + diag(u); u and v strictly positive.
Eigen::MatrixXd reconstruct_covariance(const Eigen::MatrixXd& loadings,
                                       const Eigen::VectorXd& factor_var,
                                       const Eigen::VectorXd& idio_var);

// R_ij = Sigma_ij / sqrt(Sigma_ii * Sigma_jj); throws on non-positive diagonal.
Eigen::MatrixXd covariance_to_correlation(const Eigen::MatrixXd& sigma);

// Share of marginal variance explained by the common factors, per series.
Eigen::VectorXd communalities(const Eigen::MatrixXd& loadings,
                              const Eigen::VectorXd& factor_var,
                              const Eigen::VectorXd& idio_var);

// Lambda_t = Lambda * diag(sqrt(v)); Lambda_t Lambda_t' + diag(u) equals the
// reconstructed covariance.
Eigen::MatrixXd dynamic_loadings(const Eigen::MatrixXd& loadings,
                                 const Eigen::VectorXd& factor_var);

}  // namespace fsv::factor
