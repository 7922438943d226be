#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fsv/data/config.hpp"
#include "fsv/data/draws.hpp"
#include "fsv/data/panel.hpp"
#include "fsv/mcmc/diagnostics.hpp"

namespace fsv::mcmc {

inline constexpr const char* kSamplerVersion = "fsv-sampler/1.0";
inline constexpr double kLogVarClamp = 50.0;

// Full live chain state; everything needed for bit-identical resume (the RNG
// needs no state here because every block derives its stream from
// (seed, sweep, block)).
struct ChainState {
  long sweep = 0;             // next sweep to execute
  Eigen::MatrixXd h;          // (T+1) x (m+r)
  Eigen::VectorXd mu;         // m+r, factor entries stay 0
  Eigen::VectorXd phi;        // m+r
  Eigen::VectorXd sigma;      // m+r
  Eigen::MatrixXd loadings;   // m x r
  Eigen::MatrixXd f;          // r x T
  long clamp_count = 0;
  std::vector<long> phi_prop_c, phi_acc_c, phi_prop_nc, phi_acc_nc;  // per process
};

struct Checkpoint {
  ModelConfig config;
  PriorConfig prior;
  ReturnPanel panel;
  ChainState state;
  PosteriorStore store;  // retained draws so far (full-size, zero padded)
};

struct RunOptions {
  int n_threads = 1;
  double time_budget_s = 0.0;       // 0 = unlimited; exceeded -> checkpoint + throw
  std::string checkpoint_path;      // where budget aborts write their state
  long stop_after_sweep = -1;       // testing hook: checkpoint + stop before this sweep
  Interweaving interweaving = Interweaving::standard;
};

// Thrown when the wall-clock budget (or stop_after_sweep) interrupts the run;
// the checkpoint at `path` resumes bit-identically.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string path, long sweep)
      : std::runtime_error("budget exceeded at sweep " + std::to_string(sweep) +
                           "; checkpoint written to " + path),
        path_(std::move(path)),
        sweep_(sweep) {}
  const std::string& path() const { return path_; }
  long sweep() const { return sweep_; }

 private:
  std::string path_;
  long sweep_;
};

// Runs n_burnin + n_draws full Gibbs sweeps and retains every thin-th
// post-burn-in draw, sign-identified. Deterministic given (seed, config,
// data), independent of n_threads.
PosteriorStore run_chain(const ReturnPanel& panel, const ModelConfig& config,
                         const PriorConfig& prior, const RunOptions& opts = {},
                         ChainDiagnostics* diag = nullptr);

// Continues a checkpointed run; the result is bit-identical to the
// uninterrupted chain.
PosteriorStore resume_chain(const Checkpoint& checkpoint, const RunOptions& opts = {},
                            ChainDiagnostics* diag = nullptr);

}  // namespace fsv::mcmc
