#include "fsv/data/config.hpp"

#include <cmath>
#include <string>

#include "fsv/errors.hpp"

namespace fsv {
namespace {

void check_positive(std::vector<ConfigViolation>& v, double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x))
    v.push_back({"prior-positive", std::string(what) + " must be positive and finite"});
}

}  // namespace

CheckedConfig validate_config(const ModelConfig& config, const PriorConfig& prior,
                              const ReturnPanel& panel) {
  CheckedConfig out;
  out.config = config;
  out.prior = prior;
  auto& v = out.violations;

  const long m_panel = panel.returns.cols();
  const long t = panel.returns.rows();
  if (t < 2) v.push_back({"panel-length", "panel must have at least two return rows"});
  if (m_panel < 1) v.push_back({"series-count", "panel must have at least one series"});
  if (out.config.m == 0) out.config.m = static_cast<int>(m_panel);
  if (out.config.m != m_panel)
    v.push_back({"series-count", "config m=" + std::to_string(config.m) +
                                     " does not match panel m=" + std::to_string(m_panel)});

  if (config.r < 0 || config.r >= m_panel)
    v.push_back({"factor-count", "factor count r=" + std::to_string(config.r) +
                                     " must satisfy 0 <= r < m=" + std::to_string(m_panel)});
  if (config.n_draws < 1) v.push_back({"draws-positive", "n_draws must be >= 1"});
  if (config.n_burnin < 0) v.push_back({"burnin-negative", "n_burnin must be >= 0"});
  if (config.thin < 1) v.push_back({"thin-positive", "thin must be >= 1"});
  if (config.thin >= 1 && config.n_draws % config.thin != 0)
    v.push_back({"thin-divisibility", "n_draws=" + std::to_string(config.n_draws) +
                                          " is not divisible by thin=" + std::to_string(config.thin)});
  if (config.quantiles.empty())
    v.push_back({"quantile-empty", "at least one summary quantile is required"});
  for (double q : config.quantiles)
    if (!(q > 0.0 && q < 1.0))
      v.push_back({"quantile-range", "quantile " + std::to_string(q) + " outside (0,1)"});

  check_positive(v, prior.mu_var, "mu_var");
  check_positive(v, prior.phi_a, "phi_a");
  check_positive(v, prior.phi_b, "phi_b");
  check_positive(v, prior.sigma2_rate, "sigma2_rate");
  check_positive(v, prior.loading_var, "loading_var");
  if (std::fabs(prior.sigma2_shape - 0.5) > 1e-12)
    v.push_back({"sigma2-shape",
                 "sigma2_shape must be 0.5 (the sampler uses the Gaussian prior on +-sigma)"});

  return out;
}

CheckedConfig require_valid(const ModelConfig& config, const PriorConfig& prior,
                            const ReturnPanel& panel) {
  CheckedConfig checked = validate_config(config, prior, panel);
  if (!checked.ok()) {
    std::string msg;
    for (const auto& viol : checked.violations) {
      if (!msg.empty()) msg += "; ";
      msg += "[" + viol.code + "] " + viol.message;
    }
    throw InvalidInput(checked.violations.front().code, msg);
  }
  return checked;
}

}  // namespace fsv
