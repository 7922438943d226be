#include <cmath>
#include <cstddef>

#include "scalar_impl.hpp"
#include "table.hpp"

namespace fsv::kernels::detail {
namespace {

void vexp_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = exp_core(x[i]);
}

void vlog_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = log_core(x[i]);
}

void log_sq_offset_scalar(const double* x, double offset, double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = log_sq_offset_core(x[i], offset);
}

void vsub_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void vadd_inplace_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void vmax_inplace_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] < x[i] ? x[i] : acc[i];
}

void vrecip_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  const std::size_t n4 = n & ~std::size_t(3);
  for (; i < n4; i += 4) {
    s0 = std::fma(a[i + 0], b[i + 0], s0);
    s1 = std::fma(a[i + 1], b[i + 1], s1);
    s2 = std::fma(a[i + 2], b[i + 2], s2);
    s3 = std::fma(a[i + 3], b[i + 3], s3);
  }
  double tail = 0;
  for (; i < n; ++i) tail = std::fma(a[i], b[i], tail);
  return ((s0 + s2) + (s1 + s3)) + tail;
}

double wdot_scalar(const double* a, const double* b, const double* w, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  const std::size_t n4 = n & ~std::size_t(3);
  for (; i < n4; i += 4) {
    s0 = std::fma(a[i + 0] * b[i + 0], w[i + 0], s0);
    s1 = std::fma(a[i + 1] * b[i + 1], w[i + 1], s1);
    s2 = std::fma(a[i + 2] * b[i + 2], w[i + 2], s2);
    s3 = std::fma(a[i + 3] * b[i + 3], w[i + 3], s3);
  }
  double tail = 0;
  for (; i < n; ++i) tail = std::fma(a[i] * b[i], w[i], tail);
  return ((s0 + s2) + (s1 + s3)) + tail;
}

double vsum_scalar(const double* x, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  const std::size_t n4 = n & ~std::size_t(3);
  for (; i < n4; i += 4) {
    s0 += x[i + 0];
    s1 += x[i + 1];
    s2 += x[i + 2];
    s3 += x[i + 3];
  }
  double tail = 0;
  for (; i < n; ++i) tail += x[i];
  return ((s0 + s2) + (s1 + s3)) + tail;
}

void mix_logweights_scalar(const double* d, std::size_t n, const double* lc,
                           const double* mk, const double* inv2v,
                           std::size_t nk, double* lw) {
  for (std::size_t k = 0; k < nk; ++k) {
    const double m = mk[k];
    const double ninv = -inv2v[k];
    const double c = lc[k];
    double* row = lw + k * n;
    for (std::size_t t = 0; t < n; ++t) {
      const double s = d[t] - m;
      row[t] = std::fma(s * s, ninv, c);
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      vexp_scalar,        vlog_scalar, log_sq_offset_scalar,
      vsub_scalar,        vadd_inplace_scalar, vmax_inplace_scalar,
      vrecip_scalar,      dot_scalar,  wdot_scalar,
      vsum_scalar,        mix_logweights_scalar,
  };
  return table;
}

}  // namespace fsv::kernels::detail
