#pragma once

#include <cstddef>

// Data-parallel inner-loop kernels with a scalar reference implementation and
// an AVX2 variant selected at runtime. Both variants execute the same
// floating-point operations in the same order, so results are bit-identical
// across backends; the equivalence tests assert exact equality.
//
// Contracts:
//  * all inputs finite unless noted; vexp underflows to +0 below ~-708.4 and
//    overflows to +inf above ~709.8; vlog expects x > 0 (0 maps to -inf).
//  * reductions accumulate in four interleaved partial sums combined as
//    ((s0+s2)+(s1+s3)) + tail, regardless of backend.

namespace fsv::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool set_backend(Backend b);  // false if unsupported on this CPU
bool avx2_supported();
const char* backend_name(Backend b);

// Elementwise transcendentals.
void vexp(const double* x, double* out, std::size_t n);
void vlog(const double* x, double* out, std::size_t n);
double exp1(double x);  // single-value mirror of vexp
double log1(double x);  // single-value mirror of vlog

// z[i] = log(x[i]*x[i] + offset), offset > 0.
void log_sq_offset(const double* x, double offset, double* z, std::size_t n);

// Elementwise arithmetic.
void vsub(const double* a, const double* b, double* out, std::size_t n);
void vadd_inplace(double* acc, const double* x, std::size_t n);
void vmax_inplace(double* acc, const double* x, std::size_t n);
void vrecip(const double* x, double* out, std::size_t n);

// Blocked reductions.
double dot(const double* a, const double* b, std::size_t n);
double wdot(const double* a, const double* b, const double* w, std::size_t n);
double vsum(const double* x, std::size_t n);

// Mixture log-weight fill, component-major:
//   lw[k*n + t] = lc[k] - (d[t] - mk[k])^2 * inv2v[k]
void mix_logweights(const double* d, std::size_t n, const double* lc,
                    const double* mk, const double* inv2v, std::size_t nk,
                    double* lw);

}  // namespace fsv::kernels
