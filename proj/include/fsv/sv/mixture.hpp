#pragma once

#include <cstddef>
#include <vector>

namespace fsv::sv {

// Finite Gaussian mixture approximating the log chi^2(1) distribution of
// log(eps^2) for eps ~ N(0,1). Stored both as components and as flat arrays
// precomputed for the indicator-sampling kernels.
class MixtureTable {
 public:
  struct Component {
    double weight;
    double mean;
    double variance;
  };

  explicit MixtureTable(std::vector<Component> components);

  std::size_t size() const { return comp_.size(); }
  const Component& operator[](std::size_t k) const { return comp_[k]; }

  // log(weight_k) - 0.5*log(variance_k); the constant term of the k-th
  // component's log density.
  const std::vector<double>& log_coeff() const { return log_coeff_; }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& variances() const { return variances_; }
  const std::vector<double>& inv_two_var() const { return inv_two_var_; }

  double mean() const;      // first moment of the mixture
  double variance() const;  // second central moment

 private:
  std::vector<Component> comp_;
  std::vector<double> log_coeff_, means_, variances_, inv_two_var_;
};

// The 10-component table of Omori, Chib, Shephard & Nakajima (2007); the
// standard choice for auxiliary-mixture stochastic volatility samplers.
const MixtureTable& omori10();

}  // namespace fsv::sv
