#include "fsv/mcmc/engine.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <thread>

#include "fsv/errors.hpp"
#include "fsv/factor/factor.hpp"
#include "fsv/factor/identify.hpp"
#include "fsv/io/store_io.hpp"
#include "fsv/kernels/kernels.hpp"
#include "fsv/math/rng.hpp"
#include "fsv/sv/mixture.hpp"
#include "fsv/sv/sv.hpp"

namespace fsv::mcmc {
namespace {

enum BlockKind : std::uint64_t {
  kInit = 0,
  kIdioSv = 1,
  kFactorSv = 2,
  kScores = 3,
  kLoadings = 4,
  kDeep = 5,
};

struct Workspaces {
  sv::SvWorkspace sv;
  factor::FactorWorkspace fa;
  std::vector<int> s;
  sv::LinearizedObs z;
  std::vector<double> fbuf, ybuf, uibuf, vibuf, fout, lrow;
};

// Static block partition across threads; results are written to disjoint
// slices, so scheduling cannot change the outcome. Worker exceptions are
// captured and rethrown after the join.
template <typename Fn>
void parallel_for(long n, int n_threads, Fn&& fn) {
  if (n_threads <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  const int k = static_cast<int>(std::min<long>(n_threads, n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k));
  pool.reserve(static_cast<std::size_t>(k));
  for (int w = 0; w < k; ++w)
    pool.emplace_back([&, w] {
      try {
        for (long i = w; i < n; i += k) fn(i, w);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

class Engine {
 public:
  Engine(const ReturnPanel& panel, const ModelConfig& config, const PriorConfig& prior,
         const RunOptions& opts)
      : opts_(opts),
        table_(sv::omori10()),
        sv_prior_(sv::SvPrior::from(prior)),
        config_(config),
        prior_(prior),
        panel_(panel) {
    if (!panel.demeaned)
      throw InvalidInput("not-demeaned", "the chain requires a demeaned return panel");
    panel.validate();
    const CheckedConfig checked = require_valid(config, prior, panel);
    config_ = checked.config;
    m_ = config_.m;
    r_ = config_.r;
    t_ = panel.returns.rows();
    y_ = panel.returns;
    n_threads_ = std::max(1, opts.n_threads);
    ws_.resize(static_cast<std::size_t>(n_threads_));
    resid_.resize(t_, m_);
    u_inv_.resize(t_, m_);
    v_inv_.resize(t_, r_);
    f_by_t_.resize(t_, r_);
    per_block_clamp_.assign(static_cast<std::size_t>(m_ + r_), 0);
  }

  void init_state() {
    state_.sweep = 0;
    state_.h.setZero(t_ + 1, m_ + r_);
    state_.mu.setZero(m_ + r_);
    state_.phi.setConstant(m_ + r_, 0.8);
    state_.sigma.setConstant(m_ + r_, 0.2);
    state_.loadings.setZero(m_, r_);
    state_.f.setZero(r_, t_);
    state_.clamp_count = 0;
    state_.phi_prop_c.assign(static_cast<std::size_t>(m_ + r_), 0);
    state_.phi_acc_c.assign(static_cast<std::size_t>(m_ + r_), 0);
    state_.phi_prop_nc.assign(static_cast<std::size_t>(m_ + r_), 0);
    state_.phi_acc_nc.assign(static_cast<std::size_t>(m_ + r_), 0);
    for (int i = 0; i < m_; ++i) {
      const double var = y_.col(i).squaredNorm() / static_cast<double>(t_);
      state_.mu[i] = kernels::log1(var > 1e-300 ? var : 1e-300);
    }
    math::RngStream rng(math::derive_key(config_.seed, 0, kInit, 0));
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < r_; ++j) state_.loadings(i, j) = 0.1 * rng.normal();
  }

  void load_state(const ChainState& st) { state_ = st; }

  void preload_store(const PosteriorStore& store) { store_ = store; }

  PosteriorStore run(ChainDiagnostics* diag) {
    const auto t_start = std::chrono::steady_clock::now();
    const long total = config_.n_burnin + config_.n_draws;
    const long n_ret = config_.n_retained();
    if (store_.size() != n_ret) {
      store_ = PosteriorStore(m_, r_, t_, n_ret);
      store_.config = config_;
      store_.prior = prior_;
      store_.panel = panel_;
      store_.chain_seed = config_.seed;
      store_.sampler_version = kSamplerVersion;
    }

    for (long s = state_.sweep; s < total; ++s) {
      if (s == opts_.stop_after_sweep) interrupt(s);
      if (opts_.time_budget_s > 0.0) {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t_start;
        if (elapsed.count() > opts_.time_budget_s) interrupt(s);
      }
      sweep(s);
      state_.sweep = s + 1;
      const long p = s - config_.n_burnin;
      if (p >= 0 && (p % config_.thin) == config_.thin - 1) store_draw(p / config_.thin);
    }

    if (diag) fill_diagnostics(*diag, t_start);
    return store_;
  }

  Checkpoint make_checkpoint() const {
    Checkpoint c;
    c.config = config_;
    c.prior = prior_;
    c.panel = panel_;
    c.state = state_;
    c.store = store_;
    return c;
  }

 private:
  [[noreturn]] void interrupt(long s) {
    if (opts_.checkpoint_path.empty())
      throw NumericalError("run interrupted at sweep " + std::to_string(s) +
                               " but no checkpoint path is configured",
                           s, "budget");
    io::save_checkpoint(make_checkpoint(), opts_.checkpoint_path);
    throw BudgetExceeded(opts_.checkpoint_path, s);
  }

  void sweep(long s) {
    const ArSign sign = config_.ar_sign;
    // Idiosyncratic residuals given the current factor decomposition.
    if (r_ > 0)
      resid_.noalias() = y_ - (state_.loadings * state_.f).transpose();
    else
      resid_ = y_;

    parallel_for(m_, n_threads_, [&](long i, int w) {
      auto& ws = ws_[static_cast<std::size_t>(w)];
      math::RngStream rng(math::derive_key(config_.seed, static_cast<std::uint64_t>(s), kIdioSv,
                                           static_cast<std::uint64_t>(i)));
      sv_block(static_cast<int>(i), resid_.col(i).data(), false, sign, rng, ws, s);
    });

    parallel_for(r_, n_threads_, [&](long j, int w) {
      auto& ws = ws_[static_cast<std::size_t>(w)];
      math::RngStream rng(math::derive_key(config_.seed, static_cast<std::uint64_t>(s), kFactorSv,
                                           static_cast<std::uint64_t>(j)));
      ws.fbuf.resize(static_cast<std::size_t>(t_));
      for (long t = 0; t < t_; ++t) ws.fbuf[static_cast<std::size_t>(t)] = state_.f(j, t);
      sv_block(static_cast<int>(m_ + j), ws.fbuf.data(), true, sign, rng, ws, s);
    });

    for (std::size_t i = 0; i < per_block_clamp_.size(); ++i) {
      state_.clamp_count += per_block_clamp_[i];
      per_block_clamp_[i] = 0;
    }

    refresh_variance_caches();

    if (r_ > 0) {
      parallel_for(t_, n_threads_, [&](long t0, int w) {
        auto& ws = ws_[static_cast<std::size_t>(w)];
        math::RngStream rng(math::derive_key(config_.seed, static_cast<std::uint64_t>(s), kScores,
                                             static_cast<std::uint64_t>(t0)));
        ws.ybuf.resize(static_cast<std::size_t>(m_));
        ws.uibuf.resize(static_cast<std::size_t>(m_));
        ws.vibuf.resize(static_cast<std::size_t>(r_));
        ws.fout.resize(static_cast<std::size_t>(r_));
        for (int i = 0; i < m_; ++i) {
          ws.ybuf[static_cast<std::size_t>(i)] = y_(t0, i);
          ws.uibuf[static_cast<std::size_t>(i)] = u_inv_(t0, i);
        }
        for (int j = 0; j < r_; ++j) ws.vibuf[static_cast<std::size_t>(j)] = v_inv_(t0, j);
        factor::sample_factor_at_t(ws.ybuf.data(), state_.loadings, ws.uibuf.data(),
                                   ws.vibuf.data(), rng, ws.fout.data(), ws.fa);
        for (int j = 0; j < r_; ++j) state_.f(j, t0) = ws.fout[static_cast<std::size_t>(j)];
      });

      f_by_t_ = state_.f.transpose();
      parallel_for(m_, n_threads_, [&](long i, int w) {
        auto& ws = ws_[static_cast<std::size_t>(w)];
        math::RngStream rng(math::derive_key(config_.seed, static_cast<std::uint64_t>(s),
                                             kLoadings, static_cast<std::uint64_t>(i)));
        ws.lrow.resize(static_cast<std::size_t>(r_));
        factor::sample_loadings_row(y_.col(i).data(), f_by_t_, u_inv_.col(i).data(),
                                    prior_.loading_var, rng, ws.lrow.data(), ws.fa);
        for (int j = 0; j < r_; ++j) state_.loadings(i, j) = ws.lrow[static_cast<std::size_t>(j)];
      });

      if (opts_.interweaving == Interweaving::deep)
        for (int j = 0; j < r_; ++j) deep_interweave(j, s, sign);
    }

    if (!state_.h.allFinite() || !state_.loadings.allFinite() ||
        (r_ > 0 && !state_.f.allFinite()))
      throw NumericalError("non-finite chain state", s, "state-check");
  }

  void sv_block(int idx, double* resid, bool fix_mu_zero, ArSign sign, math::RngStream& rng,
                Workspaces& ws, long s) {
    const double offset = sv::default_offset(resid, t_);
    sv::linearize_into(resid, t_, offset, ws.z);
    double* h_col = state_.h.col(idx).data();
    sv::SvParams cur{state_.mu[idx], state_.phi[idx], state_.sigma[idx]};
    sv::sample_indicators(ws.z, h_col, table_, rng, ws.s, ws.sv);
    try {
      sv::sample_h_path(ws.z, ws.s, table_, cur, sign, rng, h_col, t_, ws.sv);
      sv::PhiDiag dc, dnc;
      const sv::SvParams next = sv::sample_params(h_col, t_, ws.z, ws.s, table_, cur, sv_prior_,
                                                  fix_mu_zero, sign, rng, ws.sv, &dc, &dnc);
      // clamp after the interweaving move, which rewrites the path
      clamp_column(idx);
      state_.mu[idx] = next.mu;
      state_.phi[idx] = next.phi;
      state_.sigma[idx] = next.sigma;
      state_.phi_prop_c[static_cast<std::size_t>(idx)] += dc.proposals;
      state_.phi_acc_c[static_cast<std::size_t>(idx)] += dc.accepts;
      state_.phi_prop_nc[static_cast<std::size_t>(idx)] += dnc.proposals;
      state_.phi_acc_nc[static_cast<std::size_t>(idx)] += dnc.accepts;
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()), s, "sv-block-" + std::to_string(idx));
    }
  }

  void clamp_column(int idx) {
    double* h_col = state_.h.col(idx).data();
    long clamped = 0;
    for (long t = 0; t <= t_; ++t) {
      if (h_col[t] > kLogVarClamp) {
        h_col[t] = kLogVarClamp;
        ++clamped;
      } else if (h_col[t] < -kLogVarClamp) {
        h_col[t] = -kLogVarClamp;
        ++clamped;
      }
    }
    per_block_clamp_[static_cast<std::size_t>(idx)] += clamped;
  }

  void refresh_variance_caches() {
    // u_inv(t0,i) = exp(-h_{i,t0+1}) computed as 1/exp(h) to keep one
    // transcendental per element.
    for (int i = 0; i < m_; ++i) {
      kernels::vexp(state_.h.col(i).data() + 1, u_inv_.col(i).data(),
                    static_cast<std::size_t>(t_));
      kernels::vrecip(u_inv_.col(i).data(), u_inv_.col(i).data(), static_cast<std::size_t>(t_));
    }
    for (int j = 0; j < r_; ++j) {
      kernels::vexp(state_.h.col(m_ + j).data() + 1, v_inv_.col(j).data(),
                    static_cast<std::size_t>(t_));
      kernels::vrecip(v_inv_.col(j).data(), v_inv_.col(j).data(), static_cast<std::size_t>(t_));
    }
  }

  // Scale move along the (Lambda_j, f_j, h_j) invariance orbit: Lambda_j -> c
  // Lambda_j, f_j -> f_j / c, h_j -> h_j - 2 log c, accepted with the exact
  // prior-plus-Jacobian ratio. The likelihood is invariant; this only helps
  // mixing of the factor scale.
  void deep_interweave(int j, long s, ArSign sign) {
    math::RngStream rng(math::derive_key(config_.seed, static_cast<std::uint64_t>(s), kDeep,
                                         static_cast<std::uint64_t>(j)));
    const double delta = 0.3 * rng.normal();
    const double c = kernels::exp1(delta);
    const double dh = -2.0 * delta;
    const int hidx = m_ + j;
    const double a = (sign == ArSign::minus ? -1.0 : 1.0) * state_.phi[hidx];
    const double inv_s2 = 1.0 / (state_.sigma[hidx] * state_.sigma[hidx]);
    const double* h_col = state_.h.col(hidx).data();

    double log_ratio = static_cast<double>(m_) * delta;
    log_ratio -= (2.0 * h_col[0] * dh + dh * dh) * (1.0 - a * a) * 0.5 * inv_s2;
    const double oma = 1.0 - a;
    double resid_sum = 0.0;
    for (long t = 1; t <= t_; ++t) resid_sum += h_col[t] - a * h_col[t - 1];
    log_ratio -= (2.0 * resid_sum * dh * oma + static_cast<double>(t_) * dh * dh * oma * oma) *
                 0.5 * inv_s2;
    const double c2m1 = c * c - 1.0;
    log_ratio -= c2m1 * state_.loadings.col(j).squaredNorm() / (2.0 * prior_.loading_var);

    if (kernels::log1(rng.uniform01()) < log_ratio) {
      state_.loadings.col(j) *= c;
      state_.f.row(j) /= c;
      state_.h.col(hidx).array() += dh;
      clamp_column(hidx);
      state_.clamp_count += per_block_clamp_[static_cast<std::size_t>(hidx)];
      per_block_clamp_[static_cast<std::size_t>(hidx)] = 0;
    }
  }

  void store_draw(long d) {
    ParameterDraw pd;
    pd.mu = state_.mu.head(m_);
    pd.phi = state_.phi;
    pd.sigma = state_.sigma;
    pd.loadings = state_.loadings;
    LatentPaths lp{state_.h, state_.f};
    factor::identify_signs(pd, lp);
#ifndef NDEBUG
    // debug builds enforce the stored-draw invariants on every draw
    for (long i = 0; i < pd.phi.size(); ++i) {
      assert(std::fabs(pd.phi[i]) < 1.0);
      assert(pd.sigma[i] > 0.0);
    }
    assert(pd.mu.allFinite() && pd.loadings.allFinite());
    assert(lp.h.allFinite() && lp.f.allFinite());
#endif
    store_.set_draw(d, pd, lp);
  }

  void fill_diagnostics(ChainDiagnostics& diag, std::chrono::steady_clock::time_point t0) {
    diag.monitor_names.clear();
    std::vector<const double*> cols;
    auto add = [&](const std::string& name, const double* data) {
      diag.monitor_names.push_back(name);
      cols.push_back(data);
    };
    auto pname = [&](int i) {
      return i < m_ ? panel_.series_names[static_cast<std::size_t>(i)]
                    : "F" + std::to_string(i - m_ + 1);
    };
    for (int i = 0; i < m_; ++i) add("mu[" + pname(i) + "]", store_.mu().col(i).data());
    for (int i = 0; i < m_ + r_; ++i) add("phi[" + pname(i) + "]", store_.phi().col(i).data());
    for (int i = 0; i < m_ + r_; ++i) add("sigma[" + pname(i) + "]", store_.sigma().col(i).data());
    for (int j = 0; j < r_; ++j)
      for (int i = 0; i < m_; ++i)
        add("lambda[" + pname(i) + ",F" + std::to_string(j + 1) + "]",
            store_.loadings().col(static_cast<long>(j) * m_ + i).data());
    const long snaps[3] = {1, (t_ + 1) / 2, t_};
    for (int i = 0; i < m_ + r_; ++i)
      for (long sn : snaps)
        add("h[" + pname(i) + "," + std::to_string(sn) + "]",
            store_.h().col(static_cast<long>(i) * (t_ + 1) + sn).data());

    const long n = store_.size();
    diag.ess.clear();
    diag.constant_flags.clear();
    diag.traceplots.resize(n, static_cast<long>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      for (long d = 0; d < n; ++d) diag.traceplots(d, static_cast<long>(c)) = cols[c][d];
      if (n >= 10) {
        const EssResult ess = effective_sample_size(cols[c], n);
        diag.ess.push_back(ess.ess);
        diag.constant_flags.push_back(ess.constant);
      } else {
        diag.ess.push_back(0.0);
        diag.constant_flags.push_back(true);
      }
    }
    diag.accept_centered.clear();
    diag.accept_noncentered.clear();
    for (int i = 0; i < m_ + r_; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      diag.accept_centered.push_back(
          state_.phi_prop_c[idx] > 0
              ? static_cast<double>(state_.phi_acc_c[idx]) / state_.phi_prop_c[idx]
              : 0.0);
      diag.accept_noncentered.push_back(
          state_.phi_prop_nc[idx] > 0
              ? static_cast<double>(state_.phi_acc_nc[idx]) / state_.phi_prop_nc[idx]
              : 0.0);
    }
    diag.clamp_count = state_.clamp_count;
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    diag.runtime_seconds = dt.count();
  }

  RunOptions opts_;
  const sv::MixtureTable& table_;
  sv::SvPrior sv_prior_;
  ModelConfig config_;
  PriorConfig prior_;
  ReturnPanel panel_;
  Eigen::MatrixXd y_;
  int m_ = 0, r_ = 0;
  long t_ = 0;
  int n_threads_ = 1;
  ChainState state_;
  PosteriorStore store_;
  Eigen::MatrixXd resid_, u_inv_, v_inv_, f_by_t_;
  std::vector<Workspaces> ws_;
  std::vector<long> per_block_clamp_;
};

}  // namespace

PosteriorStore run_chain(const ReturnPanel& panel, const ModelConfig& config,
                         const PriorConfig& prior, const RunOptions& opts,
                         ChainDiagnostics* diag) {
  Engine engine(panel, config, prior, opts);
  engine.init_state();
  return engine.run(diag);
}

PosteriorStore resume_chain(const Checkpoint& checkpoint, const RunOptions& opts,
                            ChainDiagnostics* diag) {
  Engine engine(checkpoint.panel, checkpoint.config, checkpoint.prior, opts);
  engine.load_state(checkpoint.state);
  engine.preload_store(checkpoint.store);
  return engine.run(diag);
}

}  // namespace fsv::mcmc
