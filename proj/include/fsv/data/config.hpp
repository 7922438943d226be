#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsv/data/panel.hpp"

namespace fsv {

// Sign convention of the latent AR(1) recursion,
//   h_t = mu + s*phi*(h_{t-1} - mu) + sigma*eta_t.
// `plus` is the standard mean-reverting form and the default; `minus` keeps
// the alternative convention available behind the `ar-sign` switch.
enum class ArSign { plus, minus };

enum class CovarMode { median_sigma, per_draw };
enum class Interweaving { standard, deep };

struct ModelConfig {
  int m = 0;  // series count; 0 means "infer from the panel"
  int r = 4;
  long n_draws = 100000;
  long n_burnin = 50000;
  long thin = 100;
  std::uint64_t seed = 1;
  std::vector<double> quantiles = {0.1, 0.5, 0.9};
  ArSign ar_sign = ArSign::plus;

  long n_retained() const { return thin > 0 ? n_draws / thin : 0; }
};

struct PriorConfig {
  double mu_mean = 0.0;
  double mu_var = 100.0;
  double phi_a = 20.0;
  double phi_b = 1.5;
  double sigma2_shape = 0.5;  // must be 1/2: the update relies on the
  double sigma2_rate = 0.5;   // Gaussian-prior-on-(+-sigma) equivalence
  double loading_var = 1.0;
};

struct ConfigViolation {
  std::string code;
  std::string message;
};

// Shape/consistency checks for (config, prior, panel). On success the
// returned config has m filled in from the panel. All violations are
// collected rather than stopping at the first.
struct CheckedConfig {
  ModelConfig config;
  PriorConfig prior;
  std::vector<ConfigViolation> violations;
  bool ok() const { return violations.empty(); }
};

CheckedConfig validate_config(const ModelConfig& config, const PriorConfig& prior,
                              const ReturnPanel& panel);

// Throwing wrapper: raises InvalidInput with the first violation's code.
CheckedConfig require_valid(const ModelConfig& config, const PriorConfig& prior,
                            const ReturnPanel& panel);

}  // namespace fsv
