#include "fsv/mcmc/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fsv/errors.hpp"

namespace fsv::mcmc {

double quantile_sorted_inplace(std::vector<double>& values, double q) {
  if (values.empty()) throw InvalidInput("quantile-empty", "quantile of empty sample");
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("quantile-range", "quantile outside (0,1)");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

SummarizeResult summarize(const PosteriorStore& store, const std::vector<double>& quantiles) {
  if (store.size() < 1) throw InvalidInput("store-empty", "summarize requires a nonempty store");
  for (double q : quantiles)
    if (!(q > 0.0 && q < 1.0)) throw InvalidInput("quantile-range", "quantile outside (0,1)");

  const int m = store.m();
  const int r = store.r();
  const long t_len = store.t_len();
  const long n = store.size();
  const std::size_t nq = quantiles.size();

  SummarizeResult out;
  out.series.quantiles = quantiles;
  out.series.sigma.assign(nq, std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(t_len)));
  out.series.corr.assign(nq, std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(t_len)));
  out.series.communality.assign(nq, Eigen::MatrixXd(t_len, m));
  out.series.marginal_vol.assign(nq, Eigen::MatrixXd(t_len, m));
  out.series.factor_vol.assign(nq, Eigen::MatrixXd(t_len, r));

  const long n_pairs = static_cast<long>(m) * (m + 1) / 2;
  const long n_off = static_cast<long>(m) * (m - 1) / 2;
  // Per-t scratch: covariance pairs, correlations, communalities, marginal
  // and factor volatilities; one row of draws per summarized element.
  std::vector<std::vector<double>> sig_draws(static_cast<std::size_t>(n_pairs)),
      cor_draws(static_cast<std::size_t>(n_off)), com_draws(static_cast<std::size_t>(m)),
      vol_draws(static_cast<std::size_t>(m)), fvol_draws(static_cast<std::size_t>(r));
  for (auto& v : sig_draws) v.resize(static_cast<std::size_t>(n));
  for (auto& v : cor_draws) v.resize(static_cast<std::size_t>(n));
  for (auto& v : com_draws) v.resize(static_cast<std::size_t>(n));
  for (auto& v : vol_draws) v.resize(static_cast<std::size_t>(n));
  for (auto& v : fvol_draws) v.resize(static_cast<std::size_t>(n));

  std::vector<Eigen::MatrixXd> lam(static_cast<std::size_t>(n));
  for (long d = 0; d < n; ++d) {
    lam[static_cast<std::size_t>(d)].resize(m, r);
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < m; ++i)
        lam[static_cast<std::size_t>(d)](i, j) = store.loadings()(d, static_cast<long>(j) * m + i);
  }

  Eigen::MatrixXd sig(m, m);
  std::vector<double> scratch;
  for (long t0 = 0; t0 < t_len; ++t0) {
    for (long d = 0; d < n; ++d) {
      const Eigen::VectorXd u = store.idio_variances(d, t0);
      const Eigen::VectorXd v = store.factor_variances(d, t0);
      const Eigen::MatrixXd& l = lam[static_cast<std::size_t>(d)];
      sig.noalias() = l * v.asDiagonal() * l.transpose();
      sig.diagonal() += u;
      long p = 0, o = 0;
      for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) sig_draws[static_cast<std::size_t>(p++)][static_cast<std::size_t>(d)] = sig(i, j);
        for (int j = i + 1; j < m; ++j)
          cor_draws[static_cast<std::size_t>(o++)][static_cast<std::size_t>(d)] =
              sig(i, j) / std::sqrt(sig(i, i) * sig(j, j));
        vol_draws[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = std::sqrt(sig(i, i));
        com_draws[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] =
            (sig(i, i) - u[i]) / sig(i, i);
      }
      for (int j = 0; j < r; ++j)
        fvol_draws[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)] = std::sqrt(v[j]);
    }

    for (std::size_t qi = 0; qi < nq; ++qi) {
      const double q = quantiles[qi];
      Eigen::MatrixXd& sq = out.series.sigma[qi][static_cast<std::size_t>(t0)];
      Eigen::MatrixXd& cq = out.series.corr[qi][static_cast<std::size_t>(t0)];
      sq.resize(m, m);
      cq.resize(m, m);
      long p = 0, o = 0;
      for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
          scratch = sig_draws[static_cast<std::size_t>(p++)];
          sq(i, j) = sq(j, i) = quantile_sorted_inplace(scratch, q);
        }
        for (int j = i + 1; j < m; ++j) {
          scratch = cor_draws[static_cast<std::size_t>(o++)];
          cq(i, j) = cq(j, i) = quantile_sorted_inplace(scratch, q);
        }
        cq(i, i) = 1.0;
        scratch = vol_draws[static_cast<std::size_t>(i)];
        out.series.marginal_vol[qi](t0, i) = quantile_sorted_inplace(scratch, q);
        scratch = com_draws[static_cast<std::size_t>(i)];
        out.series.communality[qi](t0, i) = quantile_sorted_inplace(scratch, q);
      }
      for (int j = 0; j < r; ++j) {
        scratch = fvol_draws[static_cast<std::size_t>(j)];
        out.series.factor_vol[qi](t0, j) = quantile_sorted_inplace(scratch, q);
      }
    }
  }

  // Static parameter summary.
  auto add_param = [&](const std::string& name, const double* col) {
    out.params.names.push_back(name);
    std::vector<double> vals(col, col + n);
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(n);
    const long row = static_cast<long>(out.params.names.size()) - 1;
    out.params.quantile_values.conservativeResize(row + 1, static_cast<long>(nq));
    for (std::size_t qi = 0; qi < nq; ++qi) {
      std::vector<double> copy = vals;
      out.params.quantile_values(row, static_cast<long>(qi)) =
          quantile_sorted_inplace(copy, quantiles[qi]);
    }
    out.params.mean.conservativeResize(row + 1);
    out.params.mean[row] = mean;
  };
  auto pname = [&](int i) {
    if (i < m && static_cast<std::size_t>(i) < store.panel.series_names.size())
      return store.panel.series_names[static_cast<std::size_t>(i)];
    return i < m ? "S" + std::to_string(i + 1) : "F" + std::to_string(i - m + 1);
  };
  for (int i = 0; i < m; ++i) add_param("mu[" + pname(i) + "]", store.mu().col(i).data());
  for (int i = 0; i < m + r; ++i) add_param("phi[" + pname(i) + "]", store.phi().col(i).data());
  for (int i = 0; i < m + r; ++i)
    add_param("sigma[" + pname(i) + "]", store.sigma().col(i).data());
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < m; ++i)
      add_param("lambda[" + pname(i) + ",F" + std::to_string(j + 1) + "]",
                store.loadings().col(static_cast<long>(j) * m + i).data());
  return out;
}

}  // namespace fsv::mcmc
