#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fsv::mcmc {

struct EssResult {
  double ess = 0.0;
  bool constant = false;
};

// ESS = N / (1 + 2 sum rho_k) with Geyer's initial-positive-sequence
// truncation of the autocorrelations. Constant chains return ess = 0 with the
// flag set; the estimate is clamped to N. Requires N >= 10.
EssResult effective_sample_size(const double* chain, long n);
EssResult effective_sample_size(const std::vector<double>& chain);

// Per-chain convergence and bookkeeping data.
struct ChainDiagnostics {
  std::vector<std::string> monitor_names;
  std::vector<double> ess;            // aligned with monitor_names
  std::vector<bool> constant_flags;
  Eigen::MatrixXd traceplots;         // n_retained x monitors
  std::vector<double> accept_centered;     // per SV process, phi acceptance rate
  std::vector<double> accept_noncentered;
  long clamp_count = 0;
  double runtime_seconds = 0.0;
};

}  // namespace fsv::mcmc
