#include "fsv/factor/identify.hpp"

#include <cmath>

namespace fsv::factor {

void identify_signs(ParameterDraw& params, LatentPaths& latents) {
  const long m = params.loadings.rows();
  const long r = params.loadings.cols();
  for (long j = 0; j < r; ++j) {
    long argmax = 0;
    double best = -1.0;
    for (long i = 0; i < m; ++i) {
      const double a = std::fabs(params.loadings(i, j));
      if (a > best) {
        best = a;
        argmax = i;
      }
    }
    if (params.loadings(argmax, j) < 0.0) {
      params.loadings.col(j) = -params.loadings.col(j);
      latents.f.row(j) = -latents.f.row(j);
    }
  }
}

void identify_signs(PosteriorStore& store) {
  const long m = store.m();
  const long r = store.r();
  const long t_len = store.t_len();
  auto& loadings = store.loadings();
  auto& f = store.f();
  for (long d = 0; d < store.size(); ++d) {
    for (long j = 0; j < r; ++j) {
      long argmax = 0;
      double best = -1.0;
      for (long i = 0; i < m; ++i) {
        const double a = std::fabs(loadings(d, j * m + i));
        if (a > best) {
          best = a;
          argmax = i;
        }
      }
      if (loadings(d, j * m + argmax) < 0.0) {
        for (long i = 0; i < m; ++i) loadings(d, j * m + i) = -loadings(d, j * m + i);
        for (long t = 0; t < t_len; ++t) f(d, j * t_len + t) = -f(d, j * t_len + t);
      }
    }
  }
}

}  // namespace fsv::factor
