#pragma once

namespace fsv::math {

// Standard normal quantile function (inverse CDF), Wichura's AS 241
// double-precision rational approximation. Absolute error below 1e-15 on
// p in [1e-300, 1 - 1e-16]. Throws std::domain_error outside (0,1).
double normal_quantile(double p);

// Standard normal CDF via erfc; accurate in both tails.
double normal_cdf(double x);

// Standard normal density.
double normal_pdf(double x);

}  // namespace fsv::math
