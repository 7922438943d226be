#include "fsv/sv/mixture.hpp"

#include <cmath>
#include <stdexcept>

#include "fsv/kernels/kernels.hpp"

namespace fsv::sv {

MixtureTable::MixtureTable(std::vector<Component> components) : comp_(std::move(components)) {
  if (comp_.empty()) throw std::invalid_argument("mixture table must be nonempty");
  double wsum = 0.0;
  for (const auto& c : comp_) {
    if (!(c.weight > 0.0) || !(c.variance > 0.0))
      throw std::invalid_argument("mixture weights and variances must be positive");
    wsum += c.weight;
  }
  if (std::fabs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("mixture weights must sum to one");
  log_coeff_.reserve(comp_.size());
  means_.reserve(comp_.size());
  variances_.reserve(comp_.size());
  inv_two_var_.reserve(comp_.size());
  for (const auto& c : comp_) {
    log_coeff_.push_back(kernels::log1(c.weight) - 0.5 * kernels::log1(c.variance));
    means_.push_back(c.mean);
    variances_.push_back(c.variance);
    inv_two_var_.push_back(1.0 / (2.0 * c.variance));
  }
}

double MixtureTable::mean() const {
  double m = 0.0;
  for (const auto& c : comp_) m += c.weight * c.mean;
  return m;
}

double MixtureTable::variance() const {
  const double m = mean();
  double s = 0.0;
  for (const auto& c : comp_) s += c.weight * (c.variance + c.mean * c.mean);
  return s - m * m;
}

const MixtureTable& omori10() {
  static const MixtureTable table({
      {0.00609, 1.92677, 0.11265},
      {0.04775, 1.34744, 0.17788},
      {0.13057, 0.73504, 0.26768},
      {0.20674, 0.02266, 0.40611},
      {0.22715, -0.85173, 0.62699},
      {0.18842, -1.97278, 0.98583},
      {0.12047, -3.46788, 1.57469},
      {0.05591, -5.55246, 2.54498},
      {0.01575, -8.68384, 4.16591},
      {0.00115, -14.65000, 7.33342},
  });
  return table;
}

}  // namespace fsv::sv
