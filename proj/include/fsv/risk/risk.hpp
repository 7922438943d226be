#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fsv/data/draws.hpp"

namespace fsv::risk {

// One CoVaR query: the quantile of series `target` conditional on every
// series in `cond` sitting at its own marginal VaR at the same level.
struct RiskQuery {
  int target = 0;
  std::vector<int> cond;
  double level = 0.05;

  void validate(int m) const;  // throws InvalidInput
};

// VaR of a mean-zero Gaussian return: sqrt(sigma_ii) * Phi^{-1}(q).
double var_quantile(double sigma_ii, double q);

struct ConditionalGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Exact conditional moments of the targets given cond_values for the
// conditioning block. Empty cond returns (0, Sigma_targets).
ConditionalGaussian conditional_gaussian(const Eigen::MatrixXd& sigma,
                                         const std::vector<int>& targets,
                                         const std::vector<int>& cond,
                                         const Eigen::VectorXd& cond_values);

double covar(const Eigen::MatrixXd& sigma, const RiskQuery& query);

struct BacktestResult {
  double rate = 0.0;
  double ci_lo = 0.0;  // two-sided 95% Wilson interval for the rate
  double ci_hi = 0.0;
  std::vector<long> exceed_idx;
};

// Exceedance = return < VaR for q < 0.5, return > VaR for q > 0.5.
BacktestResult exceedance_backtest(const std::vector<double>& returns,
                                   const std::vector<double>& var_series, double q);

// Pointwise posterior-median covariance matrices with PSD repair by clipping
// eigenvalues at `eig_floor`. `repaired_count` says how many matrices needed
// the repair.
struct MedianCovarianceResult {
  std::vector<Eigen::MatrixXd> sigma;  // per t
  long repaired_count = 0;
};

MedianCovarianceResult median_covariance_series(const PosteriorStore& store,
                                                double eig_floor = 1e-10);

// Per-draw alternative: evaluates fn(Sigma_t^{(d)}) for every retained draw
// and returns the posterior median of the results, per t.
std::vector<double> per_draw_median(
    const PosteriorStore& store,
    const std::function<double(const Eigen::MatrixXd&)>& fn);

}  // namespace fsv::risk
