#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fsv/data/config.hpp"
#include "fsv/data/panel.hpp"

namespace fsv {

// One posterior draw of the static parameters. mu holds the m idiosyncratic
// log-variance levels; factor levels are structurally zero. phi and sigma
// hold m idiosyncratic entries followed by r factor entries.
struct ParameterDraw {
  Eigen::VectorXd mu;        // m
  Eigen::VectorXd phi;       // m + r
  Eigen::VectorXd sigma;     // m + r
  Eigen::MatrixXd loadings;  // m x r
};

// One posterior draw of the latent state. h is (T+1) x (m+r), one column per
// process with the stationary initial value in row 0; f is r x T.
struct LatentPaths {
  Eigen::MatrixXd h;
  Eigen::MatrixXd f;
};

// Retained (thinned) draws in variable-major layout: for each scalar the
// values across draws are contiguous, which keeps quantile extraction and
// traceplot export cache-friendly. Accessors assemble per-draw views.
class PosteriorStore {
 public:
  PosteriorStore() = default;
  PosteriorStore(int m, int r, long t, long n_retained);

  int m() const { return m_; }
  int r() const { return r_; }
  long t_len() const { return t_; }
  long size() const { return n_; }

  // Variable-major blocks, draw index is the row.
  Eigen::MatrixXd& mu() { return mu_; }              // n x m
  Eigen::MatrixXd& phi() { return phi_; }            // n x (m+r)
  Eigen::MatrixXd& sigma() { return sigma_; }        // n x (m+r)
  Eigen::MatrixXd& loadings() { return loadings_; }  // n x (m*r), column-major (i,j) -> j*m+i
  Eigen::MatrixXd& h() { return h_; }                // n x ((m+r)*(T+1)), (i,t) -> i*(T+1)+t
  Eigen::MatrixXd& f() { return f_; }                // n x (r*T), (j,t) -> j*T+t
  const Eigen::MatrixXd& mu() const { return mu_; }
  const Eigen::MatrixXd& phi() const { return phi_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::MatrixXd& loadings() const { return loadings_; }
  const Eigen::MatrixXd& h() const { return h_; }
  const Eigen::MatrixXd& f() const { return f_; }

  void set_draw(long d, const ParameterDraw& p, const LatentPaths& l);
  ParameterDraw parameter_draw(long d) const;
  LatentPaths latent_paths(long d) const;

  // Variances at data row t0 (0-based, corresponds to latent index t0+1).
  Eigen::VectorXd idio_variances(long d, long t0) const;    // m
  Eigen::VectorXd factor_variances(long d, long t0) const;  // r

  ModelConfig config;
  PriorConfig prior;
  ReturnPanel panel;  // demeaned returns the chain was fit to
  std::uint64_t chain_seed = 0;
  std::string sampler_version;

 private:
  int m_ = 0, r_ = 0;
  long t_ = 0, n_ = 0;
  Eigen::MatrixXd mu_, phi_, sigma_, loadings_, h_, f_;
};

}  // namespace fsv
