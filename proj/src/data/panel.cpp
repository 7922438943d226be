#include "fsv/data/panel.hpp"

#include <cmath>
#include <string>

#include "fsv/errors.hpp"

namespace fsv {

void PricePanel::validate() const {
  const long t = prices.rows();
  const long m = prices.cols();
  if (m < 1) throw InvalidInput("series-count", "panel needs at least one series");
  if (t < 2) throw InvalidInput("row-count", "panel needs at least two price rows");
  if (static_cast<long>(dates.size()) != t)
    throw InvalidInput("date-count", "date column length does not match price rows");
  if (static_cast<long>(series_names.size()) != m)
    throw InvalidInput("name-count", "series name count does not match price columns");
  for (long j = 1; j < static_cast<long>(dates.size()); ++j) {
    if (!(dates[j - 1] < dates[j]))
      throw InvalidInput("date-order",
                         "dates must be strictly increasing; violated at row " + std::to_string(j));
  }
  for (long i = 0; i < t; ++i)
    for (long j = 0; j < m; ++j) {
      const double p = prices(i, j);
      if (!std::isfinite(p) || p <= 0.0)
        throw InvalidInput("price-positive", "non-positive or non-finite price at row " +
                                                 std::to_string(i) + ", column " +
                                                 series_names[static_cast<std::size_t>(j)]);
    }
  for (long a = 0; a < m; ++a)
    for (long b = a + 1; b < m; ++b)
      if (series_names[static_cast<std::size_t>(a)] == series_names[static_cast<std::size_t>(b)])
        throw InvalidInput("name-unique", "duplicate series name: " +
                                              series_names[static_cast<std::size_t>(a)]);
}

void ReturnPanel::validate() const {
  const long t = returns.rows();
  if (t < 2) throw InvalidInput("row-count", "return panel needs at least two rows");
  if (returns.cols() < 1) throw InvalidInput("series-count", "return panel needs a series");
  if (static_cast<long>(dates.size()) != t)
    throw InvalidInput("date-count", "date column length does not match return rows");
  if (!returns.allFinite()) throw InvalidInput("finite", "non-finite return value");
  if (demeaned) {
    for (long j = 0; j < returns.cols(); ++j) {
      const double mean = returns.col(j).mean();
      if (std::fabs(mean) > 1e-12)
        throw InvalidInput("demeaned", "column " + std::to_string(j) +
                                           " claims demeaned but has mean " + std::to_string(mean));
    }
  }
}

ReturnPanel compute_log_returns(const PricePanel& panel) {
  panel.validate();
  const long t_raw = panel.prices.rows();
  const long m = panel.prices.cols();
  ReturnPanel out;
  out.series_names = panel.series_names;
  out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
  out.returns.resize(t_raw - 1, m);
  for (long j = 0; j < m; ++j)
    for (long i = 0; i + 1 < t_raw; ++i)
      out.returns(i, j) = std::log(panel.prices(i + 1, j)) - std::log(panel.prices(i, j));
  out.demeaned = false;
  return out;
}

ReturnPanel demean(const ReturnPanel& panel) {
  ReturnPanel out = panel;
  for (long j = 0; j < out.returns.cols(); ++j) {
    out.returns.col(j).array() -= out.returns.col(j).mean();
    out.returns.col(j).array() -= out.returns.col(j).mean();  // second pass kills residual
  }
  out.demeaned = true;
  return out;
}

}  // namespace fsv
