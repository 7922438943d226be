#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fsv {

// Raw price panel: strictly positive prices on strictly increasing dates.
// Dates are opaque ordered labels (ISO-8601 strings compare correctly).
struct PricePanel {
  std::vector<std::string> dates;      // length T_raw
  Eigen::MatrixXd prices;              // T_raw x m
  std::vector<std::string> series_names;

  long rows() const { return prices.rows(); }
  long cols() const { return prices.cols(); }
  void validate() const;  // throws InvalidInput on any violated invariant
};

// Log-return panel; `demeaned` records whether columns have been centered.
struct ReturnPanel {
  std::vector<std::string> dates;      // length T (one fewer than prices)
  Eigen::MatrixXd returns;             // T x m
  std::vector<std::string> series_names;
  bool demeaned = false;

  long rows() const { return returns.rows(); }
  long cols() const { return returns.cols(); }
  void validate() const;
};

// returns[t][i] = log(prices[t+1][i]) - log(prices[t][i]); dates shift by one.
ReturnPanel compute_log_returns(const PricePanel& panel);

// Subtracts each column's arithmetic mean (twice, to push the residual mean
// below 1e-12). Idempotent.
ReturnPanel demean(const ReturnPanel& panel);

}  // namespace fsv
