#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fsv/math/rng.hpp"

namespace fsv::factor {

// Scratch for the small dense Gaussian conditionals (r x r systems).
struct FactorWorkspace {
  std::vector<double> prec, rhs, eta;
};

// Exact draw from f_t | y_t, Lambda, U_t, V_t: Gaussian with precision
// P = diag(1/v) + Lambda' diag(1/u) Lambda and mean P^{-1} Lambda' diag(1/u) y.
// u_inv and v_inv are the elementwise reciprocals of the diagonal variances.
void sample_factor_at_t(const double* y_t, const Eigen::MatrixXd& loadings,
                        const double* u_inv, const double* v_inv,
                        math::RngStream& rng, double* f_out, FactorWorkspace& ws);

// Exact draw of one loadings row Lambda_i from the heteroskedastic regression
// y_it = Lambda_i f_t + eps_it, eps_it ~ N(0, 1/w_t), prior N(0, loading_var I).
// f_by_t is T x r with each factor's scores contiguous (column-major).
void sample_loadings_row(const double* y_i, const Eigen::MatrixXd& f_by_t,
                         const double* w, double loading_var,
                         math::RngStream& rng, double* row_out, FactorWorkspace& ws);

}  // namespace fsv::factor
