#pragma once

#include <vector>

#include "fsv/data/config.hpp"
#include "fsv/math/rng.hpp"
#include "fsv/sv/mixture.hpp"

namespace fsv::sv {

// Static parameters of one univariate SV process.
struct SvParams {
  double mu = 0.0;
  double phi = 0.8;
  double sigma = 0.2;

  void validate() const;  // |phi| < 1, sigma > 0, all finite
};

// Prior in the parameterization the updates consume. sigma_var is the
// variance of the Gaussian prior on the signed sigma, 1/(2*sigma2_rate).
struct SvPrior {
  double mu_mean = 0.0;
  double mu_var = 100.0;
  double phi_a = 20.0;
  double phi_b = 1.5;
  double sigma_var = 1.0;

  static SvPrior from(const PriorConfig& p) {
    return {p.mu_mean, p.mu_var, p.phi_a, p.phi_b, 1.0 / (2.0 * p.sigma2_rate)};
  }
};

// Linearized observations z_t = log(resid_t^2 + offset), t = 1..T.
struct LinearizedObs {
  std::vector<double> z;
  double offset = 0.0;
};

// Scale-proportional linearization offset: 1e-8 * population variance of the
// residuals, floored at 1e-12.
double default_offset(const double* resid, long t_len);

LinearizedObs linearize(const double* resid, long t_len, double offset);

// Allocation-free variant reusing the output's buffer.
void linearize_into(const double* resid, long t_len, double offset, LinearizedObs& out);

// Scratch buffers reused across sweeps; sized on first use.
struct SvWorkspace {
  std::vector<double> d, mx, lw;
  std::vector<double> cdiag, csub, csol;
  std::vector<double> w, zeta, htilde;
};

// Draws the T mixture component indicators, s_t ~ P(k) proportional to
// w_k * N(z_t - h_t; m_k, v_k). h points at the full path (T+1 values);
// observation t pairs with h[t].
void sample_indicators(const LinearizedObs& z, const double* h,
                       const MixtureTable& table, math::RngStream& rng,
                       std::vector<int>& s_out, SvWorkspace& ws);

// Exact draw from the Gaussian full conditional of (h_0..h_T) given the
// linearized data, indicators and parameters, via the tridiagonal precision
// factorization (AR(1) prior with stationary initial state plus the
// per-observation mixture likelihood terms). O(T).
void sample_h_path(const LinearizedObs& z, const std::vector<int>& s,
                   const MixtureTable& table, const SvParams& params,
                   ArSign sign, math::RngStream& rng, double* h_out, long t_len,
                   SvWorkspace& ws);

struct PhiDiag {
  long proposals = 0;
  long accepts = 0;
};

// One ancillarity-sufficiency interweaving update of (mu, phi, sigma):
// a centered move (Metropolis phi from the conditional-mode Gaussian
// proposal, conjugate mu) followed by a noncentered move (joint Gaussian
// (mu, sigma) regression draw using the Gaussian prior on the signed sigma,
// then Metropolis phi). The noncentered move rewrites h in place, which is
// what makes the interweaving effective. When fix_mu_zero is set, mu stays
// exactly zero (factor processes).
SvParams sample_params(double* h, long t_len, const LinearizedObs& z,
                       const std::vector<int>& s, const MixtureTable& table,
                       const SvParams& current, const SvPrior& prior,
                       bool fix_mu_zero, ArSign sign, math::RngStream& rng,
                       SvWorkspace& ws, PhiDiag* centered_diag = nullptr,
                       PhiDiag* noncentered_diag = nullptr);

namespace testing {
// Random-walk Metropolis step targeting the phi prior alone (likelihood
// switched off); exposes the prior density and accept logic for moment tests.
double sample_phi_prior_only(double phi, const SvPrior& prior, math::RngStream& rng);
}  // namespace testing

}  // namespace fsv::sv
