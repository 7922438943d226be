#include "fsv/factor/covariance.hpp"

#include <cmath>

#include "fsv/errors.hpp"

namespace fsv::factor {
namespace {

void check_positive(const Eigen::VectorXd& x, const char* what) {
  for (long i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0) || !std::isfinite(x[i]))
      throw NumericalError(std::string(what) + " must be strictly positive at index " +
                           std::to_string(i));
}

}  // namespace

Eigen::MatrixXd reconstruct_covariance(const Eigen::MatrixXd& loadings,
                                       const Eigen::VectorXd& factor_var,
                                       const Eigen::VectorXd& idio_var) {
  check_positive(factor_var, "factor variance");
  check_positive(idio_var, "idiosyncratic variance");
  Eigen::MatrixXd sigma = loadings * factor_var.asDiagonal() * loadings.transpose();
  sigma.diagonal() += idio_var;
  return sigma;
}

Eigen::MatrixXd covariance_to_correlation(const Eigen::MatrixXd& sigma) {
  const long m = sigma.rows();
  Eigen::VectorXd inv_sd(m);
  for (long i = 0; i < m; ++i) {
    if (!(sigma(i, i) > 0.0))
      throw NumericalError("correlation requires positive variances; Sigma(" +
                           std::to_string(i) + "," + std::to_string(i) + ") = " +
                           std::to_string(sigma(i, i)));
    inv_sd[i] = 1.0 / std::sqrt(sigma(i, i));
  }
  Eigen::MatrixXd r = inv_sd.asDiagonal() * sigma * inv_sd.asDiagonal();
  r.diagonal().setOnes();
  return r;
}

Eigen::VectorXd communalities(const Eigen::MatrixXd& loadings,
                              const Eigen::VectorXd& factor_var,
                              const Eigen::VectorXd& idio_var) {
  check_positive(factor_var, "factor variance");
  check_positive(idio_var, "idiosyncratic variance");
  const long m = loadings.rows();
  Eigen::VectorXd c(m);
  for (long i = 0; i < m; ++i) {
    double common = 0.0;
    for (long j = 0; j < loadings.cols(); ++j)
      common += loadings(i, j) * loadings(i, j) * factor_var[j];
    c[i] = common / (common + idio_var[i]);
  }
  return c;
}

Eigen::MatrixXd dynamic_loadings(const Eigen::MatrixXd& loadings,
                                 const Eigen::VectorXd& factor_var) {
  check_positive(factor_var, "factor variance");
  return loadings * factor_var.cwiseSqrt().asDiagonal();
}

}  // namespace fsv::factor
