#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "fsv/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bayesian factor stochastic volatility engine"};
  app.require_subcommand(1);

  // fit ----------------------------------------------------------------
  fsv::cli::FitArgs fit;
  std::uint64_t fit_seed = 0;
  long fit_draws = 0, fit_burnin = -1, fit_thin = 0;
  int fit_factors = -1, fit_chains = 0, fit_threads = 0;
  double fit_budget = -1.0;
  std::string fit_quantiles, fit_arsign, fit_covar, fit_iw;
  auto* cfit = app.add_subcommand("fit", "fit the model to a price CSV");
  cfit->add_option("--input,-i", fit.input_csv, "input price CSV")->required();
  cfit->add_option("--out,-o", fit.out_dir, "output directory")->required();
  cfit->add_option("--config,-c", fit.config_file, "config file ([model]/[prior]/[run] sections)");
  cfit->add_flag("--resume", fit.resume, "resume from a checkpoint in the output directory");
  auto* oseed = cfit->add_option("--seed", fit_seed, "RNG seed");
  auto* odraws = cfit->add_option("--draws", fit_draws, "posterior draws after burn-in");
  auto* oburn = cfit->add_option("--burnin", fit_burnin, "burn-in sweeps");
  auto* othin = cfit->add_option("--thin", fit_thin, "thinning factor");
  auto* ofac = cfit->add_option("--factors", fit_factors, "number of latent factors");
  auto* oquant = cfit->add_option("--quantiles", fit_quantiles, "summary quantiles, e.g. 0.1,0.5,0.9");
  auto* ochains = cfit->add_option("--chains", fit_chains, "independent chains run in parallel");
  auto* othreads = cfit->add_option("--threads", fit_threads, "within-sweep update threads");
  auto* oarsign = cfit->add_option("--ar-sign", fit_arsign, "latent AR recursion sign: plus|minus");
  auto* ocovar = cfit->add_option("--covar-mode", fit_covar, "median-sigma|per-draw (recorded for risk)");
  auto* oiw = cfit->add_option("--interweaving", fit_iw, "standard|deep");
  auto* obudget = cfit->add_option("--time-budget", fit_budget, "wall-clock budget in seconds");

  // simulate -------------------------------------------------------------
  fsv::cli::SimulateArgs simu;
  auto* csim = app.add_subcommand("simulate", "generate a synthetic panel");
  csim->add_option("--fixture,-f", simu.fixture, "fixture name: tiny|paper-shape|recovery");
  csim->add_option("--truth", simu.truth_file, "truth JSON driving the simulation");
  csim->add_option("--out,-o", simu.out_dir, "output directory")->required();
  csim->add_option("--seed", simu.seed, "seed override (0 keeps the fixture seed)");

  // risk -----------------------------------------------------------------
  fsv::cli::RiskArgs risk;
  std::string risk_levels, risk_covar, risk_cond;
  int risk_single = -1;
  auto* crisk = app.add_subcommand("risk", "VaR/CoVaR from a fitted store");
  crisk->add_option("--store,-s", risk.store_dir, "fit output directory")->required();
  crisk->add_option("--out,-o", risk.out_dir, "output directory")->required();
  crisk->add_option("--query,-q", risk.query_file, "query spec JSON");
  auto* olevels = crisk->add_option("--levels", risk_levels, "risk levels, e.g. 0.01,0.05,0.95,0.99");
  auto* osingle = crisk->add_option("--single", risk_single, "conditioning series for CoVaR|single");
  auto* ocond = crisk->add_option("--set", risk_cond, "conditioning set for CoVaR|set, e.g. 0,3,6,9");
  auto* orcovar = crisk->add_option("--covar-mode", risk_covar, "median-sigma|per-draw");

  // report ---------------------------------------------------------------
  fsv::cli::ReportArgs rep;
  std::string rep_dates;
  auto* crep = app.add_subcommand("report", "SVG charts and summary CSVs from a fitted store");
  crep->add_option("--store,-s", rep.store_dir, "fit output directory")->required();
  crep->add_option("--out,-o", rep.out_dir, "output directory")->required();
  auto* odates = crep->add_option("--dates", rep_dates, "heatmap dates, comma separated");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cfit->parsed()) {
      if (*oseed) fit.seed = fit_seed;
      if (*odraws) fit.draws = fit_draws;
      if (*oburn) fit.burnin = fit_burnin;
      if (*othin) fit.thin = fit_thin;
      if (*ofac) fit.factors = fit_factors;
      if (*ochains) fit.chains = fit_chains;
      if (*othreads) fit.threads = fit_threads;
      if (*obudget) fit.time_budget_s = fit_budget;
      if (*oarsign) fit.ar_sign = fit_arsign;
      if (*ocovar) fit.covar_mode = fit_covar;
      if (*oiw) fit.interweaving = fit_iw;
      if (*oquant) {
        std::vector<double> qs;
        std::stringstream ss(fit_quantiles);
        std::string tok;
        while (std::getline(ss, tok, ',')) qs.push_back(std::stod(tok));
        fit.quantiles = qs;
      }
      return fsv::cli::cmd_fit(fit);
    }
    if (csim->parsed()) return fsv::cli::cmd_simulate(simu);
    if (crisk->parsed()) {
      if (*olevels) {
        std::stringstream ss(risk_levels);
        std::string tok;
        while (std::getline(ss, tok, ',')) risk.levels.push_back(std::stod(tok));
      }
      if (*osingle) risk.single_target = risk_single;
      if (*ocond) {
        std::vector<int> set;
        std::stringstream ss(risk_cond);
        std::string tok;
        while (std::getline(ss, tok, ',')) set.push_back(std::stoi(tok));
        risk.cond_set = set;
      }
      if (*orcovar) risk.covar_mode = risk_covar;
      return fsv::cli::cmd_risk(risk);
    }
    if (crep->parsed()) {
      if (*odates) {
        std::stringstream ss(rep_dates);
        std::string tok;
        while (std::getline(ss, tok, ',')) rep.dates.push_back(tok);
      }
      return fsv::cli::cmd_report(rep);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fsv: %s\n", e.what());
    return fsv::cli::kExitInvalidInput;
  }
  return fsv::cli::kExitInvalidInput;
}
