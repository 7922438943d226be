#include "fsv/io/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "fsv/errors.hpp"

namespace fsv::io {
namespace {

using nlohmann::json;

json config_to_json(const ModelConfig& c) {
  return json{{"m", c.m},
              {"r", c.r},
              {"draws", c.n_draws},
              {"burnin", c.n_burnin},
              {"thin", c.thin},
              {"seed", c.seed},
              {"quantiles", c.quantiles},
              {"ar_sign", c.ar_sign == ArSign::minus ? "minus" : "plus"}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.m = j.at("m").get<int>();
  c.r = j.at("r").get<int>();
  c.n_draws = j.at("draws").get<long>();
  c.n_burnin = j.at("burnin").get<long>();
  c.thin = j.at("thin").get<long>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.quantiles = j.at("quantiles").get<std::vector<double>>();
  c.ar_sign = j.at("ar_sign") == "minus" ? ArSign::minus : ArSign::plus;
  return c;
}

json prior_to_json(const PriorConfig& p) {
  return json{{"mu_mean", p.mu_mean},         {"mu_var", p.mu_var},
              {"phi_a", p.phi_a},             {"phi_b", p.phi_b},
              {"sigma2_shape", p.sigma2_shape}, {"sigma2_rate", p.sigma2_rate},
              {"loading_var", p.loading_var}};
}

PriorConfig prior_from_json(const json& j) {
  PriorConfig p;
  p.mu_mean = j.at("mu_mean").get<double>();
  p.mu_var = j.at("mu_var").get<double>();
  p.phi_a = j.at("phi_a").get<double>();
  p.phi_b = j.at("phi_b").get<double>();
  p.sigma2_shape = j.at("sigma2_shape").get<double>();
  p.sigma2_rate = j.at("sigma2_rate").get<double>();
  p.loading_var = j.at("loading_var").get<double>();
  return p;
}

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot hash input file: " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  return h;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  json j{{"command", m.command},
         {"version", m.version},
         {"config", config_to_json(m.config)},
         {"prior", prior_to_json(m.prior)},
         {"input_hash", m.input_hash},
         {"input_path", m.input_path},
         {"chains", m.chains},
         {"threads", m.threads},
         {"covar_mode", m.covar_mode},
         {"interweaving", m.interweaving},
         {"created_utc", m.created_utc.empty() ? now_utc() : m.created_utc}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing manifest: " + path);
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest: " + path);
  json j = json::parse(in, nullptr, true, true);
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.config = config_from_json(j.at("config"));
  m.prior = prior_from_json(j.at("prior"));
  m.input_hash = j.at("input_hash").get<std::uint64_t>();
  m.input_path = j.at("input_path").get<std::string>();
  m.chains = j.at("chains").get<int>();
  m.threads = j.at("threads").get<int>();
  m.covar_mode = j.at("covar_mode").get<std::string>();
  m.interweaving = j.at("interweaving").get<std::string>();
  m.created_utc = j.at("created_utc").get<std::string>();
  return m;
}

void write_truth(const sim::SimulatedPanel& panel, const std::string& path) {
  const auto& t = panel.truth;
  json j;
  j["seed"] = t.seed;
  j["t_len"] = t.t_len;
  j["ar_sign"] = t.ar_sign == ArSign::minus ? "minus" : "plus";
  j["series_names"] = panel.returns.series_names;
  j["mu"] = std::vector<double>(t.params.mu.data(), t.params.mu.data() + t.params.mu.size());
  j["phi"] = std::vector<double>(t.params.phi.data(), t.params.phi.data() + t.params.phi.size());
  j["sigma"] =
      std::vector<double>(t.params.sigma.data(), t.params.sigma.data() + t.params.sigma.size());
  std::vector<std::vector<double>> lam;
  for (long i = 0; i < t.params.loadings.rows(); ++i) {
    std::vector<double> row;
    for (long c = 0; c < t.params.loadings.cols(); ++c) row.push_back(t.params.loadings(i, c));
    lam.push_back(row);
  }
  j["loadings"] = lam;
  std::vector<std::vector<double>> h, f;
  for (long c = 0; c < panel.latents.h.cols(); ++c)
    h.emplace_back(panel.latents.h.col(c).data(),
                   panel.latents.h.col(c).data() + panel.latents.h.rows());
  for (long r = 0; r < panel.latents.f.rows(); ++r) {
    std::vector<double> row;
    for (long c = 0; c < panel.latents.f.cols(); ++c) row.push_back(panel.latents.f(r, c));
    f.push_back(row);
  }
  j["h"] = h;
  j["f"] = f;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write truth file: " + path);
  out << j.dump() << '\n';
  if (!out) throw IoError("failed writing truth file: " + path);
}

sim::TrueParams read_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read truth file: " + path);
  json j = json::parse(in);
  sim::TrueParams t;
  t.seed = j.at("seed").get<std::uint64_t>();
  t.t_len = j.at("t_len").get<long>();
  t.ar_sign = j.at("ar_sign") == "minus" ? ArSign::minus : ArSign::plus;
  t.series_names = j.at("series_names").get<std::vector<std::string>>();
  const auto mu = j.at("mu").get<std::vector<double>>();
  const auto phi = j.at("phi").get<std::vector<double>>();
  const auto sigma = j.at("sigma").get<std::vector<double>>();
  const auto lam = j.at("loadings").get<std::vector<std::vector<double>>>();
  t.params.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), static_cast<long>(mu.size()));
  t.params.phi = Eigen::Map<const Eigen::VectorXd>(phi.data(), static_cast<long>(phi.size()));
  t.params.sigma =
      Eigen::Map<const Eigen::VectorXd>(sigma.data(), static_cast<long>(sigma.size()));
  const long m = static_cast<long>(lam.size());
  const long r = m > 0 ? static_cast<long>(lam[0].size()) : 0;
  t.params.loadings.resize(m, r);
  for (long i = 0; i < m; ++i)
    for (long c = 0; c < r; ++c) t.params.loadings(i, c) = lam[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  return t;
}

}  // namespace fsv::io
