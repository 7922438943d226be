#include <cmath>

#include "fsv/data/draws.hpp"
#include "fsv/errors.hpp"

namespace fsv {

PosteriorStore::PosteriorStore(int m, int r, long t, long n_retained)
    : m_(m), r_(r), t_(t), n_(n_retained) {
  mu_.setZero(n_, m_);
  phi_.setZero(n_, m_ + r_);
  sigma_.setZero(n_, m_ + r_);
  loadings_.setZero(n_, static_cast<long>(m_) * r_);
  h_.setZero(n_, static_cast<long>(m_ + r_) * (t_ + 1));
  f_.setZero(n_, static_cast<long>(r_) * t_);
}

void PosteriorStore::set_draw(long d, const ParameterDraw& p, const LatentPaths& l) {
  mu_.row(d) = p.mu.transpose();
  phi_.row(d) = p.phi.transpose();
  sigma_.row(d) = p.sigma.transpose();
  for (int j = 0; j < r_; ++j)
    for (int i = 0; i < m_; ++i) loadings_(d, static_cast<long>(j) * m_ + i) = p.loadings(i, j);
  for (int i = 0; i < m_ + r_; ++i)
    for (long t = 0; t <= t_; ++t) h_(d, static_cast<long>(i) * (t_ + 1) + t) = l.h(t, i);
  for (int j = 0; j < r_; ++j)
    for (long t = 0; t < t_; ++t) f_(d, static_cast<long>(j) * t_ + t) = l.f(j, t);
}

ParameterDraw PosteriorStore::parameter_draw(long d) const {
  ParameterDraw p;
  p.mu = mu_.row(d).transpose();
  p.phi = phi_.row(d).transpose();
  p.sigma = sigma_.row(d).transpose();
  p.loadings.resize(m_, r_);
  for (int j = 0; j < r_; ++j)
    for (int i = 0; i < m_; ++i) p.loadings(i, j) = loadings_(d, static_cast<long>(j) * m_ + i);
  return p;
}

LatentPaths PosteriorStore::latent_paths(long d) const {
  LatentPaths l;
  l.h.resize(t_ + 1, m_ + r_);
  for (int i = 0; i < m_ + r_; ++i)
    for (long t = 0; t <= t_; ++t) l.h(t, i) = h_(d, static_cast<long>(i) * (t_ + 1) + t);
  l.f.resize(r_, t_);
  for (int j = 0; j < r_; ++j)
    for (long t = 0; t < t_; ++t) l.f(j, t) = f_(d, static_cast<long>(j) * t_ + t);
  return l;
}

Eigen::VectorXd PosteriorStore::idio_variances(long d, long t0) const {
  Eigen::VectorXd u(m_);
  for (int i = 0; i < m_; ++i)
    u[i] = std::exp(h_(d, static_cast<long>(i) * (t_ + 1) + t0 + 1));
  return u;
}

Eigen::VectorXd PosteriorStore::factor_variances(long d, long t0) const {
  Eigen::VectorXd v(r_);
  for (int j = 0; j < r_; ++j)
    v[j] = std::exp(h_(d, static_cast<long>(m_ + j) * (t_ + 1) + t0 + 1));
  return v;
}

}  // namespace fsv
