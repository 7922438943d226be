#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

// Scalar cores shared by the scalar backend and by the AVX2 backend's tail
// handling. The AVX2 vector bodies replicate these operation sequences lane
// by lane; any change here must be mirrored in avx2.cpp.

namespace fsv::kernels::detail {

inline constexpr double kLog2E = 1.4426950408889634074;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kExpLo = -746.0;  // clamp; flush-to-zero below k<-1022
inline constexpr double kExpHi = 710.0;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kTwo52 = 4503599627370496.0;  // 2^52
inline constexpr double kTwo54 = 18014398509481984.0;
inline constexpr double kDblMin = 2.2250738585072014e-308;

// exp(r) on |r| <= ln2/2 as a degree-13 Horner polynomial (Taylor, 1/i!).
inline double exp_poly(double r) {
  double p = 1.6059043836821613e-10;       // 1/13!
  p = std::fma(p, r, 2.08767569878681e-09);  // 1/12!
  p = std::fma(p, r, 2.505210838544172e-08);
  p = std::fma(p, r, 2.7557319223985893e-07);
  p = std::fma(p, r, 2.755731922398589e-06);
  p = std::fma(p, r, 2.48015873015873e-05);
  p = std::fma(p, r, 1.984126984126984e-04);
  p = std::fma(p, r, 1.388888888888889e-03);
  p = std::fma(p, r, 8.333333333333333e-03);
  p = std::fma(p, r, 4.1666666666666664e-02);
  p = std::fma(p, r, 1.6666666666666666e-01);
  p = std::fma(p, r, 5.0e-01);
  p = std::fma(p, r, 1.0);
  p = std::fma(p, r, 1.0);
  return p;
}

inline double exp_core(double x) {
  double xc = x < kExpLo ? kExpLo : x;
  xc = xc > kExpHi ? kExpHi : xc;
  const double kd = std::nearbyint(xc * kLog2E);
  double r = std::fma(kd, -kLn2Hi, xc);
  r = std::fma(kd, -kLn2Lo, r);
  const double p = exp_poly(r);
  if (kd < -1022.5) return 0.0;
  // Build 2^k from the exponent field; kd+1023 is an exact small integer.
  const double biased = (kd + 1023.0) + kTwo52;
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(biased) << 52;
  return p * std::bit_cast<double>(bits);
}

// log(f) on [sqrt2/2, sqrt2) via atanh series, 12 terms in u^2.
inline double log_poly(double u2) {
  double p = 4.3478260869565216e-02;        // 1/23
  p = std::fma(p, u2, 4.7619047619047616e-02);  // 1/21
  p = std::fma(p, u2, 5.2631578947368418e-02);
  p = std::fma(p, u2, 5.8823529411764705e-02);
  p = std::fma(p, u2, 6.6666666666666666e-02);
  p = std::fma(p, u2, 7.6923076923076927e-02);
  p = std::fma(p, u2, 9.0909090909090912e-02);
  p = std::fma(p, u2, 1.1111111111111110e-01);
  p = std::fma(p, u2, 1.4285714285714285e-01);
  p = std::fma(p, u2, 2.0e-01);
  p = std::fma(p, u2, 3.3333333333333331e-01);
  p = std::fma(p, u2, 1.0);
  return p;
}

inline double log_core(double x) {
  if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  double ebias = 0.0;
  if (x < kDblMin) {
    x *= kTwo54;
    ebias = -54.0;
  }
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  double ed = static_cast<double>(static_cast<std::int64_t>(bits >> 52) - 1023) + ebias;
  double f = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFULL) | 0x3FF0000000000000ULL);
  if (f > kSqrt2) {
    f *= 0.5;
    ed += 1.0;
  }
  const double u = (f - 1.0) / (f + 1.0);
  const double u2 = u * u;
  const double logf = (u + u) * log_poly(u2);
  double res = std::fma(ed, kLn2Lo, logf);
  return std::fma(ed, kLn2Hi, res);
}

inline double log_sq_offset_core(double x, double offset) {
  return log_core(std::fma(x, x, offset));
}

}  // namespace fsv::kernels::detail
