#include "fsv/io/store_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "fsv/errors.hpp"

namespace fsv::io {
namespace {

constexpr char kStoreMagic[8] = {'F', 'S', 'V', 'S', 'T', 'O', 'R', '1'};
constexpr char kCheckpointMagic[8] = {'F', 'S', 'V', 'C', 'H', 'K', 'P', '1'};

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open for writing: " + path);
    path_ = path;
  }
  void raw(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void i64(long long v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void byte(unsigned char v) { raw(&v, 1); }
  void str(const std::string& s) {
    u64(s.size());
    raw(s.data(), s.size());
  }
  void strings(const std::vector<std::string>& v) {
    u64(v.size());
    for (const auto& s : v) str(s);
  }
  void doubles(const double* p, std::size_t n) {
    u64(n);
    raw(p, n * sizeof(double));
  }
  void matrix(const Eigen::MatrixXd& m) {
    i64(m.rows());
    i64(m.cols());
    raw(m.data(), static_cast<std::size_t>(m.size()) * sizeof(double));
  }
  void vector(const Eigen::VectorXd& v) {
    i64(v.size());
    raw(v.data(), static_cast<std::size_t>(v.size()) * sizeof(double));
  }
  void longs(const std::vector<long>& v) {
    u64(v.size());
    for (long x : v) i64(x);
  }
  void done() {
    out_.flush();
    if (!out_) throw IoError("failed writing: " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw IoError("cannot open for reading: " + path);
  }
  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in_) throw IoError("truncated or corrupt file: " + path_);
  }
  std::uint64_t u64() {
    std::uint64_t v;
    raw(&v, sizeof v);
    return v;
  }
  long long i64() {
    long long v;
    raw(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    raw(&v, sizeof v);
    return v;
  }
  unsigned char byte() {
    unsigned char v;
    raw(&v, 1);
    return v;
  }
  std::string str() {
    std::string s(u64(), '\0');
    raw(s.data(), s.size());
    return s;
  }
  std::vector<std::string> strings() {
    std::vector<std::string> v(u64());
    for (auto& s : v) s = str();
    return v;
  }
  std::vector<double> doubles() {
    std::vector<double> v(u64());
    raw(v.data(), v.size() * sizeof(double));
    return v;
  }
  Eigen::MatrixXd matrix() {
    const long rows = static_cast<long>(i64());
    const long cols = static_cast<long>(i64());
    Eigen::MatrixXd m(rows, cols);
    raw(m.data(), static_cast<std::size_t>(m.size()) * sizeof(double));
    return m;
  }
  Eigen::VectorXd vector() {
    Eigen::VectorXd v(static_cast<long>(i64()));
    raw(v.data(), static_cast<std::size_t>(v.size()) * sizeof(double));
    return v;
  }
  std::vector<long> longs() {
    std::vector<long> v(u64());
    for (auto& x : v) x = static_cast<long>(i64());
    return v;
  }

 private:
  std::ifstream in_;
  std::string path_;
};

void write_config(Writer& w, const ModelConfig& c) {
  w.i64(c.m);
  w.i64(c.r);
  w.i64(c.n_draws);
  w.i64(c.n_burnin);
  w.i64(c.thin);
  w.u64(c.seed);
  w.doubles(c.quantiles.data(), c.quantiles.size());
  w.byte(c.ar_sign == ArSign::minus ? 1 : 0);
}

ModelConfig read_config(Reader& r) {
  ModelConfig c;
  c.m = static_cast<int>(r.i64());
  c.r = static_cast<int>(r.i64());
  c.n_draws = static_cast<long>(r.i64());
  c.n_burnin = static_cast<long>(r.i64());
  c.thin = static_cast<long>(r.i64());
  c.seed = r.u64();
  c.quantiles = r.doubles();
  c.ar_sign = r.byte() ? ArSign::minus : ArSign::plus;
  return c;
}

void write_prior(Writer& w, const PriorConfig& p) {
  w.f64(p.mu_mean);
  w.f64(p.mu_var);
  w.f64(p.phi_a);
  w.f64(p.phi_b);
  w.f64(p.sigma2_shape);
  w.f64(p.sigma2_rate);
  w.f64(p.loading_var);
}

PriorConfig read_prior(Reader& r) {
  PriorConfig p;
  p.mu_mean = r.f64();
  p.mu_var = r.f64();
  p.phi_a = r.f64();
  p.phi_b = r.f64();
  p.sigma2_shape = r.f64();
  p.sigma2_rate = r.f64();
  p.loading_var = r.f64();
  return p;
}

void write_panel(Writer& w, const ReturnPanel& p) {
  w.strings(p.dates);
  w.strings(p.series_names);
  w.matrix(p.returns);
  w.byte(p.demeaned ? 1 : 0);
}

ReturnPanel read_panel(Reader& r) {
  ReturnPanel p;
  p.dates = r.strings();
  p.series_names = r.strings();
  p.returns = r.matrix();
  p.demeaned = r.byte() != 0;
  return p;
}

void write_store_body(Writer& w, const PosteriorStore& s) {
  w.i64(s.m());
  w.i64(s.r());
  w.i64(s.t_len());
  w.i64(s.size());
  write_config(w, s.config);
  write_prior(w, s.prior);
  write_panel(w, s.panel);
  w.u64(s.chain_seed);
  w.str(s.sampler_version);
  w.matrix(s.mu());
  w.matrix(s.phi());
  w.matrix(s.sigma());
  w.matrix(s.loadings());
  w.matrix(s.h());
  w.matrix(s.f());
}

PosteriorStore read_store_body(Reader& r) {
  const int m = static_cast<int>(r.i64());
  const int rr = static_cast<int>(r.i64());
  const long t = static_cast<long>(r.i64());
  const long n = static_cast<long>(r.i64());
  PosteriorStore s(m, rr, t, n);
  s.config = read_config(r);
  s.prior = read_prior(r);
  s.panel = read_panel(r);
  s.chain_seed = r.u64();
  s.sampler_version = r.str();
  s.mu() = r.matrix();
  s.phi() = r.matrix();
  s.sigma() = r.matrix();
  s.loadings() = r.matrix();
  s.h() = r.matrix();
  s.f() = r.matrix();
  return s;
}

}  // namespace

void save_store(const PosteriorStore& store, const std::string& path) {
  Writer w(path);
  w.raw(kStoreMagic, sizeof kStoreMagic);
  write_store_body(w, store);
  w.done();
}

PosteriorStore load_store(const std::string& path) {
  Reader r(path);
  char magic[8];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kStoreMagic, sizeof magic) != 0)
    throw IoError("not a store file (bad magic): " + path);
  return read_store_body(r);
}

void save_checkpoint(const mcmc::Checkpoint& checkpoint, const std::string& path) {
  Writer w(path);
  w.raw(kCheckpointMagic, sizeof kCheckpointMagic);
  write_config(w, checkpoint.config);
  write_prior(w, checkpoint.prior);
  write_panel(w, checkpoint.panel);
  const auto& st = checkpoint.state;
  w.i64(st.sweep);
  w.matrix(st.h);
  w.vector(st.mu);
  w.vector(st.phi);
  w.vector(st.sigma);
  w.matrix(st.loadings);
  w.matrix(st.f);
  w.i64(st.clamp_count);
  w.longs(st.phi_prop_c);
  w.longs(st.phi_acc_c);
  w.longs(st.phi_prop_nc);
  w.longs(st.phi_acc_nc);
  write_store_body(w, checkpoint.store);
  w.done();
}

mcmc::Checkpoint load_checkpoint(const std::string& path) {
  Reader r(path);
  char magic[8];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0)
    throw IoError("not a checkpoint file (bad magic): " + path);
  mcmc::Checkpoint c;
  c.config = read_config(r);
  c.prior = read_prior(r);
  c.panel = read_panel(r);
  auto& st = c.state;
  st.sweep = static_cast<long>(r.i64());
  st.h = r.matrix();
  st.mu = r.vector();
  st.phi = r.vector();
  st.sigma = r.vector();
  st.loadings = r.matrix();
  st.f = r.matrix();
  st.clamp_count = static_cast<long>(r.i64());
  st.phi_prop_c = r.longs();
  st.phi_acc_c = r.longs();
  st.phi_prop_nc = r.longs();
  st.phi_acc_nc = r.longs();
  c.store = read_store_body(r);
  return c;
}

}  // namespace fsv::io
