#include "fsv/sv/sv.hpp"

#include <cmath>
#include <cstring>

#include "fsv/errors.hpp"
#include "fsv/kernels/kernels.hpp"

namespace fsv::sv {
namespace {

constexpr double kPhiBound = 1.0 - 1e-10;

double log_phi_prior(double phi, const SvPrior& prior) {
  // (phi+1)/2 ~ Beta(a, b), up to a constant.
  return (prior.phi_a - 1.0) * kernels::log1(1.0 + phi) +
         (prior.phi_b - 1.0) * kernels::log1(1.0 - phi);
}

// log of the stationary-init factor sqrt(1-phi^2) * exp(-x0^2 (1-phi^2) / (2 s2)).
double log_stationary_term(double phi, double x0, double inv_s2) {
  const double omp = 1.0 - phi * phi;
  return 0.5 * kernels::log1(omp) - 0.5 * x0 * x0 * omp * inv_s2;
}

// Metropolis update of phi from the transition-regression proposal. x and y
// are the lagged/current path deviations, res_var the innovation variance
// (sigma^2 in the centered move, 1 in the noncentered move).
double phi_step(double phi, double sxx, double sxy, double x0, double res_var,
                const SvPrior& prior, ArSign sign, math::RngStream& rng, PhiDiag* diag) {
  if (!(sxx > 0.0)) return phi;
  const double s = (sign == ArSign::minus) ? -1.0 : 1.0;
  const double a_hat = sxy / sxx;
  const double prop_sd = std::sqrt(res_var / sxx);
  const double a_star = rng.normal(a_hat, prop_sd);
  const double phi_star = s * a_star;
  if (diag) ++diag->proposals;
  if (!(std::fabs(phi_star) < kPhiBound)) return phi;  // outside (-1,1): reject
  const double inv_s2 = 1.0 / res_var;
  const double log_ratio = log_phi_prior(phi_star, prior) + log_stationary_term(phi_star, x0, inv_s2) -
                           log_phi_prior(phi, prior) - log_stationary_term(phi, x0, inv_s2);
  if (kernels::log1(rng.uniform01()) < log_ratio) {
    if (diag) ++diag->accepts;
    return phi_star;
  }
  return phi;
}

}  // namespace

void SvParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(phi) || !std::isfinite(sigma) ||
      std::fabs(phi) >= 1.0 || !(sigma > 0.0))
    throw NumericalError("invalid SV parameters: mu=" + std::to_string(mu) +
                         " phi=" + std::to_string(phi) + " sigma=" + std::to_string(sigma));
}

double default_offset(const double* resid, long t_len) {
  const double mean = kernels::vsum(resid, static_cast<std::size_t>(t_len)) / static_cast<double>(t_len);
  double ss = 0.0;
  for (long t = 0; t < t_len; ++t) {
    const double c = resid[t] - mean;
    ss += c * c;
  }
  const double var = ss / static_cast<double>(t_len);
  const double offset = 1e-8 * var;
  return offset > 1e-12 ? offset : 1e-12;
}

void linearize_into(const double* resid, long t_len, double offset, LinearizedObs& out) {
  if (!(offset > 0.0)) throw InvalidInput("offset-positive", "linearization offset must be > 0");
  out.offset = offset;
  out.z.resize(static_cast<std::size_t>(t_len));
  kernels::log_sq_offset(resid, offset, out.z.data(), static_cast<std::size_t>(t_len));
}

LinearizedObs linearize(const double* resid, long t_len, double offset) {
  LinearizedObs out;
  linearize_into(resid, t_len, offset, out);
  return out;
}

void sample_indicators(const LinearizedObs& z, const double* h,
                       const MixtureTable& table, math::RngStream& rng,
                       std::vector<int>& s_out, SvWorkspace& ws) {
  const std::size_t n = z.z.size();
  const std::size_t nk = table.size();
  s_out.resize(n);
  ws.d.resize(n);
  ws.mx.resize(n);
  ws.lw.resize(n * nk);

  kernels::vsub(z.z.data(), h + 1, ws.d.data(), n);
  kernels::mix_logweights(ws.d.data(), n, table.log_coeff().data(), table.means().data(),
                          table.inv_two_var().data(), nk, ws.lw.data());

  std::memcpy(ws.mx.data(), ws.lw.data(), n * sizeof(double));
  for (std::size_t k = 1; k < nk; ++k)
    kernels::vmax_inplace(ws.mx.data(), ws.lw.data() + k * n, n);
  for (std::size_t k = 0; k < nk; ++k)
    kernels::vsub(ws.lw.data() + k * n, ws.mx.data(), ws.lw.data() + k * n, n);
  kernels::vexp(ws.lw.data(), ws.lw.data(), n * nk);
  for (std::size_t k = 1; k < nk; ++k)
    kernels::vadd_inplace(ws.lw.data() + k * n, ws.lw.data() + (k - 1) * n, n);

  const double* psum_last = ws.lw.data() + (nk - 1) * n;
  for (std::size_t t = 0; t < n; ++t) {
    const double u = rng.uniform01() * psum_last[t];
    int pick = static_cast<int>(nk) - 1;
    for (std::size_t k = 0; k + 1 < nk; ++k) {
      if (u <= ws.lw[k * n + t]) {
        pick = static_cast<int>(k);
        break;
      }
    }
    s_out[t] = pick;
  }
}

void sample_h_path(const LinearizedObs& z, const std::vector<int>& s,
                   const MixtureTable& table, const SvParams& params,
                   ArSign sign, math::RngStream& rng, double* h_out, long t_len,
                   SvWorkspace& ws) {
  params.validate();
  const long n = t_len + 1;  // nodes 0..T
  const double sgn = (sign == ArSign::minus) ? -1.0 : 1.0;
  const double a = sgn * params.phi;
  const double inv_s2 = 1.0 / (params.sigma * params.sigma);
  ws.cdiag.resize(static_cast<std::size_t>(n));
  ws.csub.resize(static_cast<std::size_t>(n));
  ws.csol.resize(static_cast<std::size_t>(n));
  double* diag = ws.cdiag.data();
  double* sub = ws.csub.data();   // sub[t]: entry (t, t-1)
  double* c = ws.csol.data();

  // Posterior precision (tridiagonal) and linear term in x = h - mu.
  const double trans = (1.0 + a * a) * inv_s2;
  const double off = -a * inv_s2;
  diag[0] = inv_s2;  // (1-a^2)/s2 from the stationary init plus a^2/s2
  for (long t = 1; t < n; ++t) {
    const double v_inv = 1.0 / table[static_cast<std::size_t>(s[t - 1])].variance;
    diag[t] = (t < n - 1 ? trans : inv_s2) + v_inv;
    sub[t] = off;
    c[t] = (z.z[static_cast<std::size_t>(t - 1)] - table[static_cast<std::size_t>(s[t - 1])].mean -
            params.mu) *
           v_inv;
  }
  c[0] = 0.0;

  // In-place bidiagonal Cholesky, forward solve, then the combined
  // mean-plus-noise backward solve.
  double d_prev = std::sqrt(diag[0]);
  diag[0] = d_prev;
  c[0] = c[0] / d_prev;
  for (long t = 1; t < n; ++t) {
    const double l = sub[t] / d_prev;
    sub[t] = l;
    const double dsq = diag[t] - l * l;
    if (!(dsq > 0.0))
      throw NumericalError("tridiagonal factorization failed at t=" + std::to_string(t) +
                           " (phi=" + std::to_string(params.phi) +
                           ", sigma=" + std::to_string(params.sigma) + ")");
    d_prev = std::sqrt(dsq);
    diag[t] = d_prev;
    c[t] = (c[t] - l * c[t - 1]) / d_prev;
  }

  double next = (c[n - 1] + rng.normal()) / diag[n - 1];
  h_out[n - 1] = params.mu + next;
  for (long t = n - 2; t >= 0; --t) {
    next = (c[t] + rng.normal() - sub[t + 1] * next) / diag[t];
    h_out[t] = params.mu + next;
  }
}

SvParams sample_params(double* h, long t_len, const LinearizedObs& z,
                       const std::vector<int>& s, const MixtureTable& table,
                       const SvParams& current, const SvPrior& prior,
                       bool fix_mu_zero, ArSign sign, math::RngStream& rng,
                       SvWorkspace& ws, PhiDiag* centered_diag, PhiDiag* noncentered_diag) {
  SvParams p = current;
  const double sgn = (sign == ArSign::minus) ? -1.0 : 1.0;
  const std::size_t n = static_cast<std::size_t>(t_len);

  // --- Centered move ------------------------------------------------------
  {
    const double inv_s2 = 1.0 / (p.sigma * p.sigma);
    double sxx = 0.0, sxy = 0.0;
    for (long t = 1; t <= t_len; ++t) {
      const double x = h[t - 1] - p.mu;
      sxx = std::fma(x, x, sxx);
      sxy = std::fma(x, h[t] - p.mu, sxy);
    }
    p.phi = phi_step(p.phi, sxx, sxy, h[0] - p.mu, p.sigma * p.sigma, prior, sign, rng,
                     centered_diag);
    const double a = sgn * p.phi;
    if (!fix_mu_zero) {
      const double omaa = 1.0 - a * a;
      const double omas = 1.0 - a;
      double tsum = 0.0;
      for (long t = 1; t <= t_len; ++t) tsum += h[t] - a * h[t - 1];
      const double prec = 1.0 / prior.mu_var +
                          (omaa + static_cast<double>(t_len) * omas * omas) * inv_s2;
      const double lin = prior.mu_mean / prior.mu_var +
                         (h[0] * omaa + omas * tsum) * inv_s2;
      p.mu = rng.normal(lin / prec, std::sqrt(1.0 / prec));
    }
  }

  // --- Noncentered move ----------------------------------------------------
  ws.htilde.resize(n + 1);
  ws.w.resize(n);
  ws.zeta.resize(n);
  double* ht = ws.htilde.data();
  const double inv_sigma = 1.0 / p.sigma;
  for (long t = 0; t <= t_len; ++t) ht[t] = (h[t] - p.mu) * inv_sigma;
  for (std::size_t t = 0; t < n; ++t) {
    const auto& comp = table[static_cast<std::size_t>(s[t])];
    ws.w[t] = 1.0 / comp.variance;
    ws.zeta[t] = z.z[t] - comp.mean;
  }

  const double sw = kernels::vsum(ws.w.data(), n);
  const double swh = kernels::dot(ws.w.data(), ht + 1, n);
  const double swhh = kernels::wdot(ht + 1, ht + 1, ws.w.data(), n);
  const double swz = kernels::dot(ws.w.data(), ws.zeta.data(), n);
  const double swzh = kernels::wdot(ws.zeta.data(), ht + 1, ws.w.data(), n);

  double mu_new = p.mu;
  double sigma_new;
  if (fix_mu_zero) {
    const double prec = 1.0 / prior.sigma_var + swhh;
    sigma_new = rng.normal(swzh / prec, std::sqrt(1.0 / prec));
  } else {
    // Joint bivariate Gaussian draw for (mu, sigma) from the heteroskedastic
    // regression zeta_t = mu + sigma * htilde_t + eps_t.
    const double a00 = 1.0 / prior.mu_var + sw;
    const double a01 = swh;
    const double a11 = 1.0 / prior.sigma_var + swhh;
    const double b0 = prior.mu_mean / prior.mu_var + swz;
    const double b1 = swzh;
    const double l00 = std::sqrt(a00);
    const double l10 = a01 / l00;
    const double l11sq = a11 - l10 * l10;
    if (!(l11sq > 0.0))
      throw NumericalError("noncentered (mu,sigma) update: singular normal equations");
    const double l11 = std::sqrt(l11sq);
    const double c0 = b0 / l00;
    const double c1 = (b1 - l10 * c0) / l11;
    sigma_new = (c1 + rng.normal()) / l11;
    mu_new = (c0 + rng.normal() - l10 * sigma_new) / l00;
  }
  if (sigma_new < 0.0) {  // (sigma, htilde) and (-sigma, -htilde) are equivalent
    sigma_new = -sigma_new;
    for (long t = 0; t <= t_len; ++t) ht[t] = -ht[t];
  }
  if (!(sigma_new > 0.0)) sigma_new = current.sigma;  // exact zero draw: keep previous
  p.mu = fix_mu_zero ? 0.0 : mu_new;
  p.sigma = sigma_new;

  {
    double sxx = 0.0, sxy = 0.0;
    for (long t = 1; t <= t_len; ++t) {
      sxx = std::fma(ht[t - 1], ht[t - 1], sxx);
      sxy = std::fma(ht[t - 1], ht[t], sxy);
    }
    p.phi = phi_step(p.phi, sxx, sxy, ht[0], 1.0, prior, sign, rng, noncentered_diag);
  }

  // Back-transform: the updated parameters move the path.
  for (long t = 0; t <= t_len; ++t) h[t] = p.mu + p.sigma * ht[t];
  p.validate();
  return p;
}

namespace testing {

double sample_phi_prior_only(double phi, const SvPrior& prior, math::RngStream& rng) {
  const double phi_star = phi + 0.1 * rng.normal();
  if (!(std::fabs(phi_star) < kPhiBound)) return phi;
  const double log_ratio = log_phi_prior(phi_star, prior) - log_phi_prior(phi, prior);
  return kernels::log1(rng.uniform01()) < log_ratio ? phi_star : phi;
}

}  // namespace testing

}  // namespace fsv::sv
