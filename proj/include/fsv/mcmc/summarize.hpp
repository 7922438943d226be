#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fsv/data/draws.hpp"

namespace fsv::mcmc {

// Pointwise posterior quantile summaries of the model-implied covariance
// quantities. Index order: [quantile][t].
struct CovarianceSeries {
  std::vector<double> quantiles;
  std::vector<std::vector<Eigen::MatrixXd>> sigma;   // m x m per (q,t)
  std::vector<std::vector<Eigen::MatrixXd>> corr;    // m x m per (q,t)
  std::vector<Eigen::MatrixXd> communality;          // [q] T x m
  std::vector<Eigen::MatrixXd> marginal_vol;         // [q] T x m, sqrt(Sigma_ii)
  std::vector<Eigen::MatrixXd> factor_vol;           // [q] T x r, sqrt(V_jj)
};

struct ParameterSummary {
  std::vector<std::string> names;
  Eigen::MatrixXd quantile_values;  // names x quantiles
  Eigen::VectorXd mean;
};

struct SummarizeResult {
  CovarianceSeries series;
  ParameterSummary params;
};

// Quantile by linear interpolation of order statistics (R type 7): at
// position q*(n-1) between adjacent sorted values. `values` is sorted in
// place.
double quantile_sorted_inplace(std::vector<double>& values, double q);

SummarizeResult summarize(const PosteriorStore& store, const std::vector<double>& quantiles);

}  // namespace fsv::mcmc
