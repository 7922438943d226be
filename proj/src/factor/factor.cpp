#include "fsv/factor/factor.hpp"

#include <cmath>

#include "fsv/errors.hpp"
#include "fsv/kernels/kernels.hpp"

namespace fsv::factor {
namespace {

// In-place lower Cholesky of a dense column-major r x r matrix, then the
// combined solve/sample: out = P^{-1} rhs + L^{-T} eta.
void chol_solve_sample(double* p, double* rhs, const double* eta, long r, double* out) {
  for (long j = 0; j < r; ++j) {
    double d = p[j * r + j];
    for (long k = 0; k < j; ++k) d -= p[k * r + j] * p[k * r + j];
    if (!(d > 0.0)) throw NumericalError("conditional precision not positive definite");
    const double dj = std::sqrt(d);
    p[j * r + j] = dj;
    for (long i = j + 1; i < r; ++i) {
      double v = p[j * r + i];
      for (long k = 0; k < j; ++k) v -= p[k * r + i] * p[k * r + j];
      p[j * r + i] = v / dj;
    }
  }
  // Forward solve L c = rhs (c overwrites rhs).
  for (long i = 0; i < r; ++i) {
    double v = rhs[i];
    for (long k = 0; k < i; ++k) v -= p[k * r + i] * rhs[k];
    rhs[i] = v / p[i * r + i];
  }
  // Backward solve L^T out = c + eta.
  for (long i = r - 1; i >= 0; --i) {
    double v = rhs[i] + eta[i];
    for (long k = i + 1; k < r; ++k) v -= p[i * r + k] * out[k];
    out[i] = v / p[i * r + i];
  }
}

}  // namespace

void sample_factor_at_t(const double* y_t, const Eigen::MatrixXd& loadings,
                        const double* u_inv, const double* v_inv,
                        math::RngStream& rng, double* f_out, FactorWorkspace& ws) {
  const long m = loadings.rows();
  const long r = loadings.cols();
  ws.prec.assign(static_cast<std::size_t>(r * r), 0.0);
  ws.rhs.assign(static_cast<std::size_t>(r), 0.0);
  ws.eta.resize(static_cast<std::size_t>(r));
  double* p = ws.prec.data();
  double* rhs = ws.rhs.data();
  for (long i = 0; i < m; ++i) {
    const double wi = u_inv[i];
    const double wy = wi * y_t[i];
    for (long j = 0; j < r; ++j) {
      const double lw = loadings(i, j) * wi;
      rhs[j] = std::fma(loadings(i, j), wy, rhs[j]);
      for (long k = j; k < r; ++k) p[j * r + k] = std::fma(lw, loadings(i, k), p[j * r + k]);
    }
  }
  for (long j = 0; j < r; ++j) p[j * r + j] += v_inv[j];
  for (long j = 0; j < r; ++j) ws.eta[static_cast<std::size_t>(j)] = rng.normal();
  chol_solve_sample(p, rhs, ws.eta.data(), r, f_out);
}

void sample_loadings_row(const double* y_i, const Eigen::MatrixXd& f_by_t,
                         const double* w, double loading_var,
                         math::RngStream& rng, double* row_out, FactorWorkspace& ws) {
  const long t_len = f_by_t.rows();
  const long r = f_by_t.cols();
  const std::size_t n = static_cast<std::size_t>(t_len);
  ws.prec.assign(static_cast<std::size_t>(r * r), 0.0);
  ws.rhs.resize(static_cast<std::size_t>(r));
  ws.eta.resize(static_cast<std::size_t>(r));
  double* p = ws.prec.data();
  for (long j = 0; j < r; ++j) {
    for (long k = j; k < r; ++k)
      p[j * r + k] = kernels::wdot(f_by_t.col(j).data(), f_by_t.col(k).data(), w, n);
    p[j * r + j] += 1.0 / loading_var;
    ws.rhs[static_cast<std::size_t>(j)] = kernels::wdot(f_by_t.col(j).data(), y_i, w, n);
  }
  for (long j = 0; j < r; ++j) ws.eta[static_cast<std::size_t>(j)] = rng.normal();
  chol_solve_sample(p, ws.rhs.data(), ws.eta.data(), r, row_out);
}

}  // namespace fsv::factor
