#include "fsv/mcmc/diagnostics.hpp"

#include <cmath>
#include <vector>

#include "fsv/errors.hpp"

namespace fsv::mcmc {

EssResult effective_sample_size(const double* chain, long n) {
  if (n < 10) throw InvalidInput("ess-length", "ESS requires a chain of at least 10 values");
  const double nd = static_cast<double>(n);
  double mean = 0.0;
  for (long t = 0; t < n; ++t) mean += chain[t];
  mean /= nd;
  double c0 = 0.0;
  for (long t = 0; t < n; ++t) {
    const double d = chain[t] - mean;
    c0 += d * d;
  }
  c0 /= nd;
  if (!(c0 > 0.0)) return {0.0, true};

  auto rho = [&](long k) {
    double c = 0.0;
    for (long t = 0; t + k < n; ++t) c += (chain[t] - mean) * (chain[t + k] - mean);
    return c / (nd * c0);
  };

  // Geyer: sum paired autocorrelations Gamma_j = rho_{2j} + rho_{2j+1}
  // while positive; tau = 2 * sum Gamma_j - 1 (rho_0 = 1 included).
  double tau = 0.0;
  const long max_lag = n - 2;
  for (long j = 0;; ++j) {
    const long k0 = 2 * j;
    const long k1 = 2 * j + 1;
    if (k0 > max_lag) break;
    const double g = (k0 == 0 ? 1.0 : rho(k0)) + (k1 <= max_lag ? rho(k1) : 0.0);
    if (g <= 0.0) break;
    tau += 2.0 * g;
  }
  tau -= 1.0;
  if (tau < 1.0) tau = 1.0;  // cap ESS at N per the store invariant
  return {nd / tau, false};
}

EssResult effective_sample_size(const std::vector<double>& chain) {
  return effective_sample_size(chain.data(), static_cast<long>(chain.size()));
}

}  // namespace fsv::mcmc
