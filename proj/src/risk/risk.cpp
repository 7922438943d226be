#include "fsv/risk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fsv/errors.hpp"
#include "fsv/math/normal.hpp"
#include "fsv/mcmc/summarize.hpp"

namespace fsv::risk {

void RiskQuery::validate(int m) const {
  if (!(level > 0.0 && level < 1.0))
    throw InvalidInput("level-range", "risk level must lie in (0,1)");
  if (target < 0 || target >= m)
    throw InvalidInput("target-range", "target index out of range");
  for (int j : cond) {
    if (j < 0 || j >= m) throw InvalidInput("cond-range", "conditioning index out of range");
    if (j == target)
      throw InvalidInput("cond-overlap", "conditioning set must not contain the target");
  }
  for (std::size_t a = 0; a < cond.size(); ++a)
    for (std::size_t b = a + 1; b < cond.size(); ++b)
      if (cond[a] == cond[b]) throw InvalidInput("cond-duplicate", "duplicate conditioning index");
}

double var_quantile(double sigma_ii, double q) {
  if (!(sigma_ii > 0.0)) throw InvalidInput("variance-positive", "variance must be positive");
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("level-range", "quantile must lie in (0,1)");
  return std::sqrt(sigma_ii) * math::normal_quantile(q);
}

ConditionalGaussian conditional_gaussian(const Eigen::MatrixXd& sigma,
                                         const std::vector<int>& targets,
                                         const std::vector<int>& cond,
                                         const Eigen::VectorXd& cond_values) {
  if (targets.empty()) throw InvalidInput("targets-empty", "target set must be nonempty");
  const long m = sigma.rows();
  for (int i : targets)
    if (i < 0 || i >= m) throw InvalidInput("target-range", "target index out of range");
  for (int j : cond)
    if (j < 0 || j >= m) throw InvalidInput("cond-range", "conditioning index out of range");
  for (int i : targets)
    for (int j : cond)
      if (i == j) throw InvalidInput("cond-overlap", "target and conditioning sets overlap");
  if (cond_values.size() != static_cast<long>(cond.size()))
    throw InvalidInput("cond-values", "conditioning value count mismatch");

  const long p = static_cast<long>(targets.size());
  const long c = static_cast<long>(cond.size());
  ConditionalGaussian out;
  Eigen::MatrixXd s11(p, p);
  for (long a = 0; a < p; ++a)
    for (long b = 0; b < p; ++b) s11(a, b) = sigma(targets[a], targets[b]);
  if (c == 0) {
    out.mean = Eigen::VectorXd::Zero(p);
    out.cov = s11;
    return out;
  }
  Eigen::MatrixXd s12(p, c), s22(c, c);
  for (long a = 0; a < p; ++a)
    for (long b = 0; b < c; ++b) s12(a, b) = sigma(targets[a], cond[b]);
  for (long a = 0; a < c; ++a)
    for (long b = 0; b < c; ++b) s22(a, b) = sigma(cond[a], cond[b]);

  Eigen::LLT<Eigen::MatrixXd> llt(s22);
  if (llt.info() != Eigen::Success) {
    std::string set;
    for (int j : cond) set += (set.empty() ? "" : ",") + std::to_string(j);
    throw NumericalError("singular conditioning covariance block {" + set + "}");
  }
  out.mean = s12 * llt.solve(cond_values);
  out.cov = s11 - s12 * llt.solve(s12.transpose());
  out.cov = 0.5 * (out.cov + out.cov.transpose().eval());
  return out;
}

double covar(const Eigen::MatrixXd& sigma, const RiskQuery& query) {
  query.validate(static_cast<int>(sigma.rows()));
  Eigen::VectorXd var_j(static_cast<long>(query.cond.size()));
  for (std::size_t k = 0; k < query.cond.size(); ++k)
    var_j[static_cast<long>(k)] = var_quantile(sigma(query.cond[k], query.cond[k]), query.level);
  const ConditionalGaussian cg =
      conditional_gaussian(sigma, {query.target}, query.cond, var_j);
  const double cvar = cg.cov(0, 0);
  if (!(cvar >= 0.0)) throw NumericalError("negative conditional variance in CoVaR");
  return cg.mean[0] + std::sqrt(cvar) * math::normal_quantile(query.level);
}

BacktestResult exceedance_backtest(const std::vector<double>& returns,
                                   const std::vector<double>& var_series, double q) {
  if (returns.size() != var_series.size())
    throw InvalidInput("length-mismatch", "returns and VaR series lengths differ");
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("level-range", "quantile must lie in (0,1)");
  BacktestResult out;
  const long n = static_cast<long>(returns.size());
  for (long t = 0; t < n; ++t) {
    const bool exceed = q < 0.5 ? returns[static_cast<std::size_t>(t)] < var_series[static_cast<std::size_t>(t)]
                                : returns[static_cast<std::size_t>(t)] > var_series[static_cast<std::size_t>(t)];
    if (exceed) out.exceed_idx.push_back(t);
  }
  const double nd = static_cast<double>(n);
  const double p_hat = static_cast<double>(out.exceed_idx.size()) / nd;
  out.rate = p_hat;
  const double z = 1.959963984540054;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nd;
  const double center = (p_hat + z2 / (2.0 * nd)) / denom;
  const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / nd + z2 / (4.0 * nd * nd)) / denom;
  out.ci_lo = std::max(0.0, center - half);
  out.ci_hi = std::min(1.0, center + half);
  return out;
}

MedianCovarianceResult median_covariance_series(const PosteriorStore& store, double eig_floor) {
  const int m = store.m();
  const long t_len = store.t_len();
  const long n = store.size();
  if (n < 1) throw InvalidInput("store-empty", "median covariance requires draws");

  MedianCovarianceResult out;
  out.sigma.resize(static_cast<std::size_t>(t_len));

  std::vector<Eigen::MatrixXd> lam(static_cast<std::size_t>(n));
  for (long d = 0; d < n; ++d) lam[static_cast<std::size_t>(d)] = store.parameter_draw(d).loadings;

  const long n_pairs = static_cast<long>(m) * (m + 1) / 2;
  std::vector<std::vector<double>> draws(static_cast<std::size_t>(n_pairs),
                                         std::vector<double>(static_cast<std::size_t>(n)));
  Eigen::MatrixXd sig(m, m);
  for (long t0 = 0; t0 < t_len; ++t0) {
    for (long d = 0; d < n; ++d) {
      const Eigen::VectorXd u = store.idio_variances(d, t0);
      const Eigen::VectorXd v = store.factor_variances(d, t0);
      sig.noalias() = lam[static_cast<std::size_t>(d)] * v.asDiagonal() *
                      lam[static_cast<std::size_t>(d)].transpose();
      sig.diagonal() += u;
      long p = 0;
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
          draws[static_cast<std::size_t>(p++)][static_cast<std::size_t>(d)] = sig(i, j);
    }
    Eigen::MatrixXd med(m, m);
    long p = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        std::vector<double> scratch = draws[static_cast<std::size_t>(p++)];
        med(i, j) = med(j, i) = mcmc::quantile_sorted_inplace(scratch, 0.5);
      }
    // Elementwise medians can lose positive semi-definiteness; repair by
    // clipping the spectrum.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(med);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    if (es.eigenvalues().minCoeff() < eig_floor) {
      Eigen::VectorXd ev = es.eigenvalues().cwiseMax(eig_floor);
      med = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
      med = 0.5 * (med + med.transpose().eval());
      ++out.repaired_count;
    }
    out.sigma[static_cast<std::size_t>(t0)] = med;
  }
  return out;
}

std::vector<double> per_draw_median(
    const PosteriorStore& store,
    const std::function<double(const Eigen::MatrixXd&)>& fn) {
  const long t_len = store.t_len();
  const long n = store.size();
  std::vector<Eigen::MatrixXd> lam(static_cast<std::size_t>(n));
  for (long d = 0; d < n; ++d) lam[static_cast<std::size_t>(d)] = store.parameter_draw(d).loadings;
  std::vector<double> out(static_cast<std::size_t>(t_len));
  std::vector<double> vals(static_cast<std::size_t>(n));
  Eigen::MatrixXd sig(store.m(), store.m());
  for (long t0 = 0; t0 < t_len; ++t0) {
    for (long d = 0; d < n; ++d) {
      const Eigen::VectorXd u = store.idio_variances(d, t0);
      const Eigen::VectorXd v = store.factor_variances(d, t0);
      sig.noalias() = lam[static_cast<std::size_t>(d)] * v.asDiagonal() *
                      lam[static_cast<std::size_t>(d)].transpose();
      sig.diagonal() += u;
      vals[static_cast<std::size_t>(d)] = fn(sig);
    }
    out[static_cast<std::size_t>(t0)] = mcmc::quantile_sorted_inplace(vals, 0.5);
  }
  return out;
}

}  // namespace fsv::risk
