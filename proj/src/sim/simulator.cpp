#include "fsv/sim/simulator.hpp"

#include <cmath>
#include <cstdio>

#include "fsv/errors.hpp"
#include "fsv/math/rng.hpp"

namespace fsv::sim {
namespace {

// Minimal Gregorian day arithmetic for synthetic date labels.
bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return (m == 2 && leap(y)) ? 29 : d[m - 1];
}

std::string advance_date(int& y, int& m, int& d, int days) {
  d += days;
  while (d > days_in_month(y, m)) {
    d -= days_in_month(y, m);
    if (++m > 12) {
      m = 1;
      ++y;
    }
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
  return buf;
}

std::string default_name(int i, int m) {
  // 12-series panels get commodity-by-region style labels; otherwise S01..
  static const char* regions[] = {"EU", "OC", "US"};
  static const char* products[] = {"SMP", "WMP", "BUT", "CHE"};
  if (m == 12) return std::string(regions[i % 3]) + "-" + products[i / 3];
  char buf[8];
  std::snprintf(buf, sizeof buf, "S%02d", i + 1);
  return buf;
}

}  // namespace

SimulatedPanel simulate_panel(const TrueParams& truth) {
  const long m = truth.params.loadings.rows();
  const long r = truth.params.loadings.cols();
  const long t_len = truth.t_len;
  if (m < 1 || t_len < 2) throw InvalidInput("truth-shape", "simulation needs m >= 1, T >= 2");
  const double sgn = (truth.ar_sign == ArSign::minus) ? -1.0 : 1.0;

  math::RngStream rng(truth.seed);
  SimulatedPanel out;
  out.truth = truth;
  out.latents.h.resize(t_len + 1, m + r);
  out.latents.f.resize(r, t_len);

  for (long i = 0; i < m + r; ++i) {
    const double mu = i < m ? truth.params.mu[i] : 0.0;
    const double phi = truth.params.phi[i];
    const double sigma = truth.params.sigma[i];
    const double a = sgn * phi;
    out.latents.h(0, i) = mu + rng.normal() * sigma / std::sqrt(1.0 - phi * phi);
    for (long t = 1; t <= t_len; ++t)
      out.latents.h(t, i) = mu + a * (out.latents.h(t - 1, i) - mu) + sigma * rng.normal();
  }

  out.returns.returns.resize(t_len, m);
  for (long t = 1; t <= t_len; ++t) {
    for (long j = 0; j < r; ++j)
      out.latents.f(j, t - 1) = rng.normal() * std::exp(0.5 * out.latents.h(t, m + j));
    for (long i = 0; i < m; ++i) {
      double y = rng.normal() * std::exp(0.5 * out.latents.h(t, i));
      for (long j = 0; j < r; ++j)
        y += truth.params.loadings(i, j) * out.latents.f(j, t - 1);
      out.returns.returns(t - 1, i) = y;
    }
  }

  out.returns.series_names = truth.series_names;
  if (out.returns.series_names.empty())
    for (long i = 0; i < m; ++i)
      out.returns.series_names.push_back(default_name(static_cast<int>(i), static_cast<int>(m)));
  int y = 2001, mo = 1, d = 6;  // base date; returns start one step later
  out.returns.dates.reserve(t_len);
  for (long t = 0; t < t_len; ++t) out.returns.dates.push_back(advance_date(y, mo, d, 14));
  out.returns.demeaned = false;
  return out;
}

PricePanel to_price_panel(const ReturnPanel& returns) {
  PricePanel out;
  out.series_names = returns.series_names;
  const long t_len = returns.rows();
  const long m = returns.cols();
  out.prices.resize(t_len + 1, m);
  for (long j = 0; j < m; ++j) {
    out.prices(0, j) = 100.0;
    for (long t = 0; t < t_len; ++t)
      out.prices(t + 1, j) = out.prices(t, j) * std::exp(returns.returns(t, j));
  }
  // Base date precedes the first return date; simulator panels start at
  // 2001-01-06, anything else gets a generic epoch label.
  const std::string base =
      (!returns.dates.empty() && returns.dates.front() > "2001-01-06") ? "2001-01-06"
                                                                       : "0001-01-01";
  out.dates.reserve(t_len + 1);
  out.dates.push_back(base);
  out.dates.insert(out.dates.end(), returns.dates.begin(), returns.dates.end());
  return out;
}

TrueParams fixture(const std::string& name, std::uint64_t seed_override) {
  TrueParams t;
  int m = 0, r = 0;
  if (name == "tiny") {
    m = 3;
    r = 1;
    t.t_len = 200;
    t.seed = 42;
  } else if (name == "paper-shape") {
    m = 12;
    r = 4;
    t.t_len = 425;
    t.seed = 7;
  } else if (name == "recovery") {
    m = 6;
    r = 2;
    t.t_len = 1000;
    t.seed = 13;
  } else {
    throw InvalidInput("fixture-unknown", "unknown fixture: " + name);
  }
  if (seed_override != 0) t.seed = seed_override;

  t.params.mu.resize(m);
  t.params.phi.resize(m + r);
  t.params.sigma.resize(m + r);
  t.params.loadings.setZero(m, r);

  // Values sit inside the prior high-density regions: persistence near 0.9,
  // volatility-of-log-variance 0.2-0.4, levels matching return-like scales.
  if (name == "tiny") {
    t.params.mu << -1.2, -1.0, -1.5;
    t.params.phi << 0.90, 0.85, 0.92, 0.95;
    t.params.sigma << 0.30, 0.25, 0.35, 0.30;
    t.params.loadings << 0.8, 0.5, -0.6;
  } else if (name == "paper-shape") {
    for (int i = 0; i < m; ++i) {
      t.params.mu[i] = -7.0 - 0.15 * i;                    // idio sd ~ 2-3%
      t.params.phi[i] = 0.86 + 0.01 * (i % 8);
      t.params.sigma[i] = 0.22 + 0.02 * (i % 5);
    }
    for (int j = 0; j < r; ++j) {
      t.params.phi[m + j] = 0.93 + 0.01 * j;
      t.params.sigma[m + j] = 0.28 + 0.02 * j;
    }
    // Block-ish structure: each factor is loaded mainly by one group.
    const double base = 0.025;
    for (int i = 0; i < m; ++i) {
      t.params.loadings(i, i % 4) = base * (1.0 + 0.1 * (i % 3));
      t.params.loadings(i, (i + 1) % 4) = 0.4 * base;
    }
  } else {  // recovery
    t.params.mu << -1.0, -1.3, -0.8, -1.1, -1.4, -0.9;
    t.params.phi << 0.90, 0.85, 0.92, 0.88, 0.86, 0.91, 0.93, 0.89;
    t.params.sigma << 0.30, 0.25, 0.35, 0.28, 0.32, 0.26, 0.30, 0.35;
    t.params.loadings << 0.90, 0.05,
                         0.75, 0.10,
                         0.60, 0.15,
                         0.10, 0.85,
                         0.05, 0.70,
                         0.15, 0.60;
  }
  return t;
}

std::vector<std::string> fixture_names() { return {"tiny", "paper-shape", "recovery"}; }

}  // namespace fsv::sim
