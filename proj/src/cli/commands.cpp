#include "fsv/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fsv/data/draws.hpp"
#include "fsv/data/panel.hpp"
#include "fsv/errors.hpp"
#include "fsv/io/csv.hpp"
#include "fsv/io/manifest.hpp"
#include "fsv/io/store_io.hpp"
#include "fsv/io/svg.hpp"
#include "fsv/math/rng.hpp"
#include "fsv/mcmc/engine.hpp"
#include "fsv/mcmc/summarize.hpp"
#include "fsv/risk/risk.hpp"
#include "fsv/sim/simulator.hpp"

namespace fsv::cli {
namespace fs = std::filesystem;
namespace {

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Maps thrown errors onto the documented exit codes.
int guarded(const char* cmd, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const mcmc::BudgetExceeded& e) {
    std::cerr << cmd << ": " << e.what() << "\n";
    return kExitBudget;
  } catch (const InvalidInput& e) {
    std::cerr << cmd << ": invalid input [" << e.code() << "]: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const NumericalError& e) {
    std::cerr << cmd << ": numerical abort";
    if (e.sweep() >= 0) std::cerr << " at sweep " << e.sweep() << " (" << e.block() << ")";
    std::cerr << ": " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << cmd << ": I/O failure: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << cmd << ": error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    std::stringstream inner(token);
    double v;
    while (inner >> v) out.push_back(v);
  }
  return out;
}

std::uint64_t chain_seed(std::uint64_t master, int chain) {
  return chain == 0 ? master : math::derive_key(master, static_cast<std::uint64_t>(chain), 0xCAB);
}

// ---------------------------------------------------------------------------
// config file

std::map<std::string, std::string> read_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line, section;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw InvalidInput("config-syntax", path + ":" + std::to_string(lineno) + ": bad section");
      section = strip(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config-syntax",
                         path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = strip(line.substr(0, eq));
    kv[section.empty() ? key : section + "." + key] = strip(line.substr(eq + 1));
  }
  return kv;
}

ArSign parse_ar_sign(const std::string& s) {
  if (s == "plus" || s == "+") return ArSign::plus;
  if (s == "minus" || s == "-") return ArSign::minus;
  throw InvalidInput("ar-sign", "ar_sign must be 'plus' or 'minus', got '" + s + "'");
}

CovarMode parse_covar_mode(const std::string& s) {
  if (s == "median-sigma") return CovarMode::median_sigma;
  if (s == "per-draw") return CovarMode::per_draw;
  throw InvalidInput("covar-mode", "covar_mode must be 'median-sigma' or 'per-draw'");
}

Interweaving parse_interweaving(const std::string& s) {
  if (s == "standard") return Interweaving::standard;
  if (s == "deep") return Interweaving::deep;
  throw InvalidInput("interweaving", "interweaving must be 'standard' or 'deep'");
}

}  // namespace

FileConfig parse_config_file(const std::string& path) {
  FileConfig out;
  const auto kv = read_ini(path);
  auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto geti = [&](const char* key, auto& target) {
    if (const auto* s = get(key)) target = static_cast<std::remove_reference_t<decltype(target)>>(std::stoll(*s));
  };
  auto getd = [&](const char* key, double& target) {
    if (const auto* s = get(key)) target = std::stod(*s);
  };
  geti("model.factors", out.model.r);
  geti("model.draws", out.model.n_draws);
  geti("model.burnin", out.model.n_burnin);
  geti("model.thin", out.model.thin);
  if (const auto* s = get("model.seed")) out.model.seed = std::stoull(*s);
  if (const auto* s = get("model.quantiles")) out.model.quantiles = parse_double_list(*s);
  if (const auto* s = get("model.ar_sign")) out.model.ar_sign = parse_ar_sign(*s);
  getd("prior.mu_mean", out.prior.mu_mean);
  getd("prior.mu_var", out.prior.mu_var);
  getd("prior.phi_a", out.prior.phi_a);
  getd("prior.phi_b", out.prior.phi_b);
  getd("prior.sigma2_shape", out.prior.sigma2_shape);
  getd("prior.sigma2_rate", out.prior.sigma2_rate);
  getd("prior.loading_var", out.prior.loading_var);
  geti("run.chains", out.run.chains);
  geti("run.threads", out.run.threads);
  getd("run.time_budget_s", out.run.time_budget_s);
  if (const auto* s = get("run.covar_mode")) out.run.covar_mode = parse_covar_mode(*s);
  if (const auto* s = get("run.interweaving")) out.run.interweaving = parse_interweaving(*s);
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// shared store-directory helpers

std::vector<PosteriorStore> load_store_dir(const std::string& store_dir) {
  const fs::path dir = fs::path(store_dir) / "store";
  if (!fs::exists(dir)) throw IoError("store directory not found: " + dir.string());
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".bin") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no chain files in " + dir.string());
  std::vector<PosteriorStore> stores;
  stores.reserve(files.size());
  for (const auto& f : files) stores.push_back(io::load_store(f));
  return stores;
}

PosteriorStore pool_stores(const std::vector<PosteriorStore>& stores) {
  long total = 0;
  for (const auto& s : stores) total += s.size();
  PosteriorStore pooled(stores[0].m(), stores[0].r(), stores[0].t_len(), total);
  pooled.config = stores[0].config;
  pooled.prior = stores[0].prior;
  pooled.panel = stores[0].panel;
  pooled.chain_seed = stores[0].chain_seed;
  pooled.sampler_version = stores[0].sampler_version;
  long at = 0;
  for (const auto& s : stores) {
    pooled.mu().middleRows(at, s.size()) = s.mu();
    pooled.phi().middleRows(at, s.size()) = s.phi();
    pooled.sigma().middleRows(at, s.size()) = s.sigma();
    pooled.loadings().middleRows(at, s.size()) = s.loadings();
    pooled.h().middleRows(at, s.size()) = s.h();
    pooled.f().middleRows(at, s.size()) = s.f();
    at += s.size();
  }
  return pooled;
}

void write_summary_csvs(const mcmc::SummarizeResult& sr, const ReturnPanel& panel,
                        const std::string& dir) {
  ensure_dir(dir);
  const auto& s = sr.series;
  const long t_len = s.marginal_vol.empty() ? 0 : s.marginal_vol[0].rows();
  const long m = s.marginal_vol.empty() ? 0 : s.marginal_vol[0].cols();
  const long r = s.factor_vol.empty() ? 0 : s.factor_vol[0].cols();
  auto name = [&](long i) { return panel.series_names[static_cast<std::size_t>(i)]; };

  {
    auto out = open_out(dir + "/volatility.csv");
    out << "date,series,quantile,value\n";
    for (long t = 0; t < t_len; ++t)
      for (long i = 0; i < m; ++i)
        for (std::size_t q = 0; q < s.quantiles.size(); ++q)
          out << panel.dates[static_cast<std::size_t>(t)] << ',' << name(i) << ','
              << fmt(s.quantiles[q], "%g") << ',' << fmt(s.marginal_vol[q](t, i)) << '\n';
  }
  {
    auto out = open_out(dir + "/factor_volatility.csv");
    out << "date,factor,quantile,value\n";
    for (long t = 0; t < t_len; ++t)
      for (long j = 0; j < r; ++j)
        for (std::size_t q = 0; q < s.quantiles.size(); ++q)
          out << panel.dates[static_cast<std::size_t>(t)] << ",F" << (j + 1) << ','
              << fmt(s.quantiles[q], "%g") << ',' << fmt(s.factor_vol[q](t, j)) << '\n';
  }
  {
    auto out = open_out(dir + "/communalities.csv");
    out << "date,series,quantile,value\n";
    for (long t = 0; t < t_len; ++t)
      for (long i = 0; i < m; ++i)
        for (std::size_t q = 0; q < s.quantiles.size(); ++q)
          out << panel.dates[static_cast<std::size_t>(t)] << ',' << name(i) << ','
              << fmt(s.quantiles[q], "%g") << ',' << fmt(s.communality[q](t, i)) << '\n';
  }
  {
    auto out = open_out(dir + "/correlations.csv");
    out << "date,series_a,series_b,quantile,value\n";
    for (long t = 0; t < t_len; ++t)
      for (long i = 0; i < m; ++i)
        for (long j = i + 1; j < m; ++j)
          for (std::size_t q = 0; q < s.quantiles.size(); ++q)
            out << panel.dates[static_cast<std::size_t>(t)] << ',' << name(i) << ',' << name(j)
                << ',' << fmt(s.quantiles[q], "%g") << ','
                << fmt(s.corr[q][static_cast<std::size_t>(t)](i, j)) << '\n';
  }
  {
    auto out = open_out(dir + "/covariance.csv");
    out << "date,series_a,series_b,quantile,value\n";
    for (long t = 0; t < t_len; ++t)
      for (long i = 0; i < m; ++i)
        for (long j = i; j < m; ++j)
          for (std::size_t q = 0; q < s.quantiles.size(); ++q)
            out << panel.dates[static_cast<std::size_t>(t)] << ',' << name(i) << ',' << name(j)
                << ',' << fmt(s.quantiles[q], "%g") << ','
                << fmt(s.sigma[q][static_cast<std::size_t>(t)](i, j)) << '\n';
  }
  {
    auto out = open_out(dir + "/parameters.csv");
    out << "name,quantile,value\n";
    for (std::size_t p = 0; p < sr.params.names.size(); ++p) {
      out << sr.params.names[p] << ",mean," << fmt(sr.params.mean[static_cast<long>(p)]) << '\n';
      for (std::size_t q = 0; q < s.quantiles.size(); ++q)
        out << sr.params.names[p] << ',' << fmt(s.quantiles[q], "%g") << ','
            << fmt(sr.params.quantile_values(static_cast<long>(p), static_cast<long>(q))) << '\n';
    }
  }
}

void write_diagnostics(const mcmc::ChainDiagnostics& diag, const ReturnPanel& panel, int m, int r,
                       const std::string& dir, int chain) {
  ensure_dir(dir);
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "chain_%02d", chain);
  {
    auto out = open_out(dir + "/" + suffix + "_ess.csv");
    out << "monitor,ess,constant\n";
    for (std::size_t i = 0; i < diag.monitor_names.size(); ++i)
      out << diag.monitor_names[i] << ',' << fmt(diag.ess[i]) << ','
          << (diag.constant_flags[i] ? 1 : 0) << '\n';
  }
  {
    auto out = open_out(dir + "/" + suffix + "_acceptance.csv");
    out << "process,centered_rate,noncentered_rate\n";
    for (int i = 0; i < m + r; ++i) {
      const std::string pname = i < m ? panel.series_names[static_cast<std::size_t>(i)]
                                      : "F" + std::to_string(i - m + 1);
      out << pname << ',' << fmt(diag.accept_centered[static_cast<std::size_t>(i)]) << ','
          << fmt(diag.accept_noncentered[static_cast<std::size_t>(i)]) << '\n';
    }
  }
  {
    auto out = open_out(dir + "/" + suffix + "_traceplots.csv");
    out << "draw";
    for (const auto& n : diag.monitor_names) out << ',' << n;
    out << '\n';
    for (long d = 0; d < diag.traceplots.rows(); ++d) {
      out << d;
      for (long c = 0; c < diag.traceplots.cols(); ++c) out << ',' << fmt(diag.traceplots(d, c));
      out << '\n';
    }
  }
  {
    nlohmann::json j{{"clamp_count", diag.clamp_count},
                     {"runtime_seconds", diag.runtime_seconds}};
    auto out = open_out(dir + "/" + suffix + "_summary.json");
    out << j.dump(2) << '\n';
  }
}

}  // namespace

int cmd_fit(const FitArgs& args) {
  return guarded("fit", [&] {
    FileConfig fc;
    if (!args.config_file.empty()) fc = parse_config_file(args.config_file);
    ModelConfig config = fc.model;
    PriorConfig prior = fc.prior;
    RunSettings run = fc.run;
    if (args.seed) config.seed = *args.seed;
    if (args.draws) config.n_draws = *args.draws;
    if (args.burnin) config.n_burnin = *args.burnin;
    if (args.thin) config.thin = *args.thin;
    if (args.factors) config.r = *args.factors;
    if (args.quantiles) config.quantiles = *args.quantiles;
    if (args.ar_sign) config.ar_sign = parse_ar_sign(*args.ar_sign);
    if (args.chains) run.chains = *args.chains;
    if (args.threads) run.threads = *args.threads;
    if (args.time_budget_s) run.time_budget_s = *args.time_budget_s;
    if (args.covar_mode) run.covar_mode = parse_covar_mode(*args.covar_mode);
    if (args.interweaving) run.interweaving = parse_interweaving(*args.interweaving);
    if (run.chains < 1) throw InvalidInput("chains-positive", "chains must be >= 1");
    if (run.chains > 1 && (run.time_budget_s > 0.0 || args.resume))
      throw InvalidInput("budget-chains",
                         "time budget / resume are supported for single-chain runs only");

    const PricePanel prices = io::read_price_csv(args.input_csv);
    const ReturnPanel returns = demean(compute_log_returns(prices));
    config = require_valid(config, prior, returns).config;

    ensure_dir(args.out_dir);
    ensure_dir(args.out_dir + "/store");

    mcmc::RunOptions opts;
    opts.n_threads = run.threads;
    opts.time_budget_s = run.time_budget_s;
    opts.interweaving = run.interweaving;

    std::vector<PosteriorStore> stores(static_cast<std::size_t>(run.chains));
    std::vector<mcmc::ChainDiagnostics> diags(static_cast<std::size_t>(run.chains));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(run.chains));

    auto run_one = [&](int c) {
      try {
        ModelConfig cc = config;
        cc.seed = chain_seed(config.seed, c);
        mcmc::RunOptions o = opts;
        char buf[48];
        std::snprintf(buf, sizeof buf, "/checkpoint_chain_%02d.bin", c);
        o.checkpoint_path = args.out_dir + buf;
        const auto idx = static_cast<std::size_t>(c);
        if (args.resume && fs::exists(o.checkpoint_path)) {
          const mcmc::Checkpoint cp = io::load_checkpoint(o.checkpoint_path);
          stores[idx] = mcmc::resume_chain(cp, o, &diags[idx]);
        } else {
          stores[idx] = mcmc::run_chain(returns, cc, prior, o, &diags[idx]);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    };

    if (run.chains == 1) {
      run_one(0);
    } else {
      std::vector<std::thread> pool;
      for (int c = 0; c < run.chains; ++c) pool.emplace_back(run_one, c);
      for (auto& th : pool) th.join();
    }
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);

    for (int c = 0; c < run.chains; ++c) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "/store/chain_%02d.bin", c);
      io::save_store(stores[static_cast<std::size_t>(c)], args.out_dir + buf);
      write_diagnostics(diags[static_cast<std::size_t>(c)], returns, config.m,
                        config.r, args.out_dir + "/diagnostics", c);
    }

    const PosteriorStore pooled = run.chains == 1 ? stores[0] : pool_stores(stores);
    const mcmc::SummarizeResult sr = mcmc::summarize(pooled, pooled.config.quantiles);
    write_summary_csvs(sr, returns, args.out_dir + "/summaries");

    io::RunManifest manifest;
    manifest.command = "fit";
    manifest.version = mcmc::kSamplerVersion;
    manifest.config = pooled.config;
    manifest.config.seed = config.seed;
    manifest.prior = prior;
    manifest.input_hash = io::fnv1a64_file(args.input_csv);
    manifest.input_path = args.input_csv;
    manifest.chains = run.chains;
    manifest.threads = run.threads;
    manifest.covar_mode =
        run.covar_mode == CovarMode::per_draw ? "per-draw" : "median-sigma";
    manifest.interweaving = run.interweaving == Interweaving::deep ? "deep" : "standard";
    io::write_manifest(manifest, args.out_dir + "/manifest.json");
  });
}

int cmd_simulate(const SimulateArgs& args) {
  return guarded("simulate", [&] {
    sim::TrueParams truth;
    if (!args.truth_file.empty())
      truth = io::read_truth(args.truth_file);
    else
      truth = sim::fixture(args.fixture, args.seed);
    if (args.seed != 0) truth.seed = args.seed;

    const sim::SimulatedPanel panel = sim::simulate_panel(truth);
    ensure_dir(args.out_dir);
    io::write_price_csv(sim::to_price_panel(panel.returns), args.out_dir + "/prices.csv");
    io::write_truth(panel, args.out_dir + "/truth.json");

    io::RunManifest manifest;
    manifest.command = "simulate";
    manifest.version = mcmc::kSamplerVersion;
    manifest.config.m = static_cast<int>(panel.returns.cols());
    manifest.config.r = static_cast<int>(truth.params.loadings.cols());
    manifest.config.seed = truth.seed;
    manifest.input_path = args.fixture.empty() ? args.truth_file : args.fixture;
    manifest.input_hash = 0;
    io::write_manifest(manifest, args.out_dir + "/manifest.json");
  });
}

namespace {

struct RiskSetup {
  std::vector<double> levels{0.01, 0.05, 0.95, 0.99};
  int single_target = 0;
  std::vector<int> cond_set;
  CovarMode mode = CovarMode::median_sigma;
  int explicit_target = -1;  // restrict output to one series; must not overlap
};

int series_index(const ReturnPanel& panel, const nlohmann::json& j) {
  if (j.is_number_integer()) return j.get<int>();
  const std::string name = j.get<std::string>();
  for (std::size_t i = 0; i < panel.series_names.size(); ++i)
    if (panel.series_names[i] == name) return static_cast<int>(i);
  throw InvalidInput("series-unknown", "unknown series name: " + name);
}

RiskSetup resolve_risk_setup(const RiskArgs& args, const ReturnPanel& panel, int m) {
  RiskSetup setup;
  if (m == 12) setup.cond_set = {0, 3, 6, 9};  // one full region in the 12-series layout
  else {
    for (int i = 0; i < std::min(4, m - 1); ++i) setup.cond_set.push_back(i);
  }
  if (!args.query_file.empty()) {
    std::ifstream in(args.query_file);
    if (!in) throw IoError("cannot read query file: " + args.query_file);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);
    if (j.contains("levels")) setup.levels = j["levels"].get<std::vector<double>>();
    if (j.contains("single")) setup.single_target = series_index(panel, j["single"]);
    if (j.contains("set")) {
      setup.cond_set.clear();
      for (const auto& e : j["set"]) setup.cond_set.push_back(series_index(panel, e));
    }
    if (j.contains("target")) setup.explicit_target = series_index(panel, j["target"]);
    if (j.contains("covar_mode")) setup.mode = parse_covar_mode(j["covar_mode"].get<std::string>());
  }
  if (!args.levels.empty()) setup.levels = args.levels;
  if (args.single_target) setup.single_target = *args.single_target;
  if (args.cond_set) setup.cond_set = *args.cond_set;
  if (args.covar_mode) setup.mode = parse_covar_mode(*args.covar_mode);
  for (double q : setup.levels)
    if (!(q > 0.0 && q < 1.0)) throw InvalidInput("level-range", "risk level outside (0,1)");
  if (setup.single_target < 0 || setup.single_target >= m)
    throw InvalidInput("target-range", "single conditioning series out of range");
  for (int c : setup.cond_set)
    if (c < 0 || c >= m) throw InvalidInput("cond-range", "conditioning set index out of range");
  if (setup.explicit_target >= 0) {
    if (setup.explicit_target >= m)
      throw InvalidInput("target-range", "query target out of range");
    if (setup.explicit_target == setup.single_target)
      throw InvalidInput("cond-overlap", "query target coincides with the conditioning series");
    for (int c : setup.cond_set)
      if (c == setup.explicit_target)
        throw InvalidInput("cond-overlap", "query target is inside the conditioning set");
  }
  return setup;
}

}  // namespace

int cmd_risk(const RiskArgs& args) {
  return guarded("risk", [&] {
    const auto stores = load_store_dir(args.store_dir);
    const PosteriorStore store = stores.size() == 1 ? stores[0] : pool_stores(stores);
    const ReturnPanel& panel = store.panel;
    const int m = store.m();
    const long t_len = store.t_len();
    const RiskSetup setup = resolve_risk_setup(args, panel, m);

    ensure_dir(args.out_dir);
    ensure_dir(args.out_dir + "/risk");

    // Pointwise covariance source.
    risk::MedianCovarianceResult med;
    if (setup.mode == CovarMode::median_sigma) med = risk::median_covariance_series(store);

    // The exceedance flags always use the two-sided 5% and 1% bands.
    auto var_series = [&](int i, double q) {
      std::vector<double> v(static_cast<std::size_t>(t_len));
      if (setup.mode == CovarMode::median_sigma) {
        for (long t = 0; t < t_len; ++t)
          v[static_cast<std::size_t>(t)] =
              risk::var_quantile(med.sigma[static_cast<std::size_t>(t)](i, i), q);
      } else {
        v = risk::per_draw_median(
            store, [&](const Eigen::MatrixXd& s) { return risk::var_quantile(s(i, i), q); });
      }
      return v;
    };
    auto covar_series = [&](int i, const std::vector<int>& cond, double q) {
      risk::RiskQuery query{i, cond, q};
      std::vector<double> v(static_cast<std::size_t>(t_len));
      if (setup.mode == CovarMode::median_sigma) {
        for (long t = 0; t < t_len; ++t)
          v[static_cast<std::size_t>(t)] = risk::covar(med.sigma[static_cast<std::size_t>(t)], query);
      } else {
        v = risk::per_draw_median(store,
                                  [&](const Eigen::MatrixXd& s) { return risk::covar(s, query); });
      }
      return v;
    };

    for (int i = 0; i < m; ++i) {
      if (setup.explicit_target >= 0 && i != setup.explicit_target) continue;
      const std::vector<double> var05 = var_series(i, 0.05);
      const std::vector<double> var95 = var_series(i, 0.95);
      const std::vector<double> var01 = var_series(i, 0.01);
      const std::vector<double> var99 = var_series(i, 0.99);
      std::vector<int> single_cond{setup.single_target};
      const bool has_single = setup.single_target != i;
      // an empty conditioning set degrades CoVaR to plain VaR
      const bool has_set =
          std::find(setup.cond_set.begin(), setup.cond_set.end(), i) == setup.cond_set.end();

      for (double q : setup.levels) {
        const std::vector<double> var_q = var_series(i, q);
        std::vector<double> cov_single, cov_set;
        if (has_single) cov_single = covar_series(i, single_cond, q);
        if (has_set) cov_set = covar_series(i, setup.cond_set, q);

        char fname[160];
        std::snprintf(fname, sizeof fname, "%s/risk/%s_q%g.csv", args.out_dir.c_str(),
                      panel.series_names[static_cast<std::size_t>(i)].c_str(), q);
        auto out = open_out(fname);
        out << "date,var,covar_single,covar_set,return,exceed_5,exceed_1\n";
        for (long t = 0; t < t_len; ++t) {
          const double ret = panel.returns(t, i);
          const bool ex5 = ret < var05[static_cast<std::size_t>(t)] || ret > var95[static_cast<std::size_t>(t)];
          const bool ex1 = ret < var01[static_cast<std::size_t>(t)] || ret > var99[static_cast<std::size_t>(t)];
          out << panel.dates[static_cast<std::size_t>(t)] << ',' << fmt(var_q[static_cast<std::size_t>(t)])
              << ',' << (has_single ? fmt(cov_single[static_cast<std::size_t>(t)]) : "") << ','
              << (has_set ? fmt(cov_set[static_cast<std::size_t>(t)]) : "") << ',' << fmt(ret)
              << ',' << (ex5 ? 1 : 0) << ',' << (ex1 ? 1 : 0) << '\n';
        }
      }
    }

    io::RunManifest manifest;
    manifest.command = "risk";
    manifest.version = mcmc::kSamplerVersion;
    manifest.config = store.config;
    manifest.prior = store.prior;
    manifest.input_path = args.store_dir;
    manifest.input_hash = 0;
    manifest.covar_mode = setup.mode == CovarMode::per_draw ? "per-draw" : "median-sigma";
    io::write_manifest(manifest, args.out_dir + "/manifest.json");

    if (setup.mode == CovarMode::median_sigma && med.repaired_count > 0)
      std::cerr << "risk: PSD repair applied to " << med.repaired_count
                << " posterior-median covariance matrices\n";
  });
}

int cmd_report(const ReportArgs& args) {
  return guarded("report", [&] {
    const auto stores = load_store_dir(args.store_dir);
    const PosteriorStore store = stores.size() == 1 ? stores[0] : pool_stores(stores);
    const ReturnPanel& panel = store.panel;
    const int m = store.m();
    const int r = store.r();
    const long t_len = store.t_len();

    std::vector<long> heat_idx;
    if (args.dates.empty()) {
      for (int k = 0; k < 5; ++k) heat_idx.push_back((t_len - 1) * k / 4);
    } else {
      for (const auto& d : args.dates) {
        const auto it = std::find(panel.dates.begin(), panel.dates.end(), d);
        if (it == panel.dates.end())
          throw InvalidInput("date-unknown", "date not in sample: " + d);
        heat_idx.push_back(it - panel.dates.begin());
      }
    }

    const mcmc::SummarizeResult sr = mcmc::summarize(store, store.config.quantiles);
    const std::string report = args.out_dir + "/report";
    ensure_dir(report);
    write_summary_csvs(sr, panel, report);

    const auto& quantiles = sr.series.quantiles;
    static const char* palette[] = {"#9ecae1", "#1f6fb5", "#08306b", "#6baed6", "#2171b5"};
    auto quantile_lines = [&](auto getter) {
      std::vector<io::SvgSeries> lines;
      for (std::size_t q = 0; q < quantiles.size(); ++q) {
        io::SvgSeries s;
        s.label = "q" + fmt(quantiles[q], "%g");
        s.color = palette[q % 5];
        s.values.resize(static_cast<std::size_t>(t_len));
        for (long t = 0; t < t_len; ++t) s.values[static_cast<std::size_t>(t)] = getter(q, t);
        lines.push_back(std::move(s));
      }
      return lines;
    };

    for (int i = 0; i < m; ++i) {
      const std::string name = panel.series_names[static_cast<std::size_t>(i)];
      io::write_line_chart_svg(report + "/vol_" + name + ".svg", "Marginal volatility: " + name,
                           panel.dates,
                           quantile_lines([&](std::size_t q, long t) {
                             return sr.series.marginal_vol[q](t, i);
                           }));
      io::write_line_chart_svg(report + "/comm_" + name + ".svg", "Communality: " + name, panel.dates,
                           quantile_lines([&](std::size_t q, long t) {
                             return sr.series.communality[q](t, i);
                           }));
    }
    for (int j = 0; j < r; ++j) {
      const std::string name = "F" + std::to_string(j + 1);
      io::write_line_chart_svg(report + "/factorvol_" + name + ".svg", "Factor volatility: " + name,
                           panel.dates,
                           quantile_lines([&](std::size_t q, long t) {
                             return sr.series.factor_vol[q](t, j);
                           }));
    }

    // Heatmaps use the quantile closest to the median.
    std::size_t qmid = 0;
    for (std::size_t q = 1; q < quantiles.size(); ++q)
      if (std::fabs(quantiles[q] - 0.5) < std::fabs(quantiles[qmid] - 0.5)) qmid = q;
    for (long idx : heat_idx) {
      const std::string date = panel.dates[static_cast<std::size_t>(idx)];
      io::write_heatmap_svg(report + "/corr_" + date + ".svg", "Correlations " + date,
                        sr.series.corr[qmid][static_cast<std::size_t>(idx)], panel.series_names);
    }

    io::RunManifest manifest;
    manifest.command = "report";
    manifest.version = mcmc::kSamplerVersion;
    manifest.config = store.config;
    manifest.prior = store.prior;
    manifest.input_path = args.store_dir;
    manifest.input_hash = 0;
    io::write_manifest(manifest, args.out_dir + "/manifest.json");
  });
}

}  // namespace fsv::cli
