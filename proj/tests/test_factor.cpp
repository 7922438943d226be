#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "fsv/factor/covariance.hpp"
#include "fsv/factor/factor.hpp"
#include "fsv/factor/identify.hpp"
#include "fsv/math/rng.hpp"
#include "support/oracles.hpp"

using namespace fsv;
using fsv::math::RngStream;

TEST_CASE("reconstruct_covariance: closed-form cases and dense oracle") {
  Eigen::MatrixXd lam0 = Eigen::MatrixXd::Zero(2, 1);
  Eigen::VectorXd v1(1), u2(2);
  v1 << 1.0;
  u2 << 1.0, 1.0;
  CHECK(factor::reconstruct_covariance(lam0, v1, u2).isApprox(Eigen::MatrixXd::Identity(2, 2)));

  Eigen::MatrixXd lam(1, 1);
  lam << 2.0;
  Eigen::VectorXd v(1), u(1);
  v << 1.0;
  u << 1.0;
  CHECK(factor::reconstruct_covariance(lam, v, u)(0, 0) == doctest::Approx(5.0));

  Eigen::MatrixXd lam2(2, 1);
  lam2 << 1.0, 0.5;
  Eigen::VectorXd vf(1), ui(2);
  vf << std::exp(0.2);
  ui << std::exp(-0.1), std::exp(0.3);
  const Eigen::MatrixXd sigma = factor::reconstruct_covariance(lam2, vf, ui);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double expect = lam2(i, 0) * vf[0] * lam2(j, 0) + (i == j ? ui[i] : 0.0);
      CHECK(std::fabs(sigma(i, j) - expect) < 1e-14);
    }

  Eigen::VectorXd bad = u;
  bad[0] = -1.0;
  CHECK_THROWS(factor::reconstruct_covariance(lam, v, bad));
}

TEST_CASE("covariance_to_correlation") {
  Eigen::MatrixXd diag = Eigen::Vector3d(2.0, 3.0, 0.5).asDiagonal();
  CHECK(factor::covariance_to_correlation(diag).isApprox(Eigen::MatrixXd::Identity(3, 3)));

  Eigen::MatrixXd s(2, 2);
  s << 4.0, 2.0, 2.0, 4.0;
  const Eigen::MatrixXd r = factor::covariance_to_correlation(s);
  CHECK(r(0, 1) == doctest::Approx(0.5));
  CHECK(r(0, 0) == 1.0);
  CHECK(r(1, 1) == 1.0);

  std::mt19937_64 gen(17);
  const Eigen::MatrixXd spd = oracle::random_spd(3, gen);
  const Eigen::MatrixXd rr = factor::covariance_to_correlation(spd);
  for (int i = 0; i < 3; ++i) {
    CHECK(rr(i, i) == 1.0);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::fabs(rr(i, j)) <= 1.0 + 1e-12);
      CHECK(rr(i, j) == doctest::Approx(rr(j, i)));
    }
  }

  Eigen::MatrixXd nonpos = s;
  nonpos(0, 0) = 0.0;
  CHECK_THROWS(factor::covariance_to_correlation(nonpos));
}

TEST_CASE("communalities: closed forms, bounds and the share identity") {
  Eigen::MatrixXd lam0 = Eigen::MatrixXd::Zero(3, 2);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(2), u = Eigen::VectorXd::Ones(3);
  CHECK(factor::communalities(lam0, v, u).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd lam(1, 1);
  Eigen::VectorXd v1 = Eigen::VectorXd::Ones(1), u1 = Eigen::VectorXd::Ones(1);
  lam << 1.0;
  CHECK(factor::communalities(lam, v1, u1)[0] == doctest::Approx(0.5));
  lam << 2.0;
  CHECK(factor::communalities(lam, v1, u1)[0] == doctest::Approx(0.8));

  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd lr(5, 2);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 2; ++j) lr(i, j) = nd(gen);
  Eigen::VectorXd vr(2), ur(5);
  for (int j = 0; j < 2; ++j) vr[j] = std::exp(nd(gen));
  for (int i = 0; i < 5; ++i) ur[i] = std::exp(nd(gen));
  const Eigen::VectorXd c = factor::communalities(lr, vr, ur);
  for (int i = 0; i < 5; ++i) {
    CHECK(c[i] >= 0.0);
    CHECK(c[i] <= 1.0);
    const double common = (lr.row(i).array().square() * vr.transpose().array()).sum();
    const double idio_share = ur[i] / (common + ur[i]);
    CHECK(std::fabs(c[i] + idio_share - 1.0) < 1e-14);
  }
}

TEST_CASE("dynamic_loadings: scaling and algebraic identity") {
  Eigen::MatrixXd lam(3, 2);
  lam << 1.0, -0.5, 0.2, 0.8, -0.3, 0.4;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  CHECK(factor::dynamic_loadings(lam, ones).isApprox(lam));

  Eigen::VectorXd v4(1);
  v4 << 4.0;
  Eigen::MatrixXd lam1(2, 1);
  lam1 << 1.0, 2.0;
  CHECK(factor::dynamic_loadings(lam1, v4).isApprox(2.0 * lam1));

  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(2), u(3);
  for (int j = 0; j < 2; ++j) v[j] = std::exp(0.5 * nd(gen));
  for (int i = 0; i < 3; ++i) u[i] = std::exp(0.5 * nd(gen));
  const Eigen::MatrixXd lam_t = factor::dynamic_loadings(lam, v);
  Eigen::MatrixXd direct = lam_t * lam_t.transpose();
  direct.diagonal() += u;
  const Eigen::MatrixXd via_cov = factor::reconstruct_covariance(lam, v, u);
  CHECK((direct - via_cov).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sample_factor_at_t: prior fallback and conjugate oracles") {
  factor::FactorWorkspace ws;
  RngStream rng(5);

  {
    Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(3, 2);
    const double y[3] = {1.0, -2.0, 0.5};
    const double u_inv[3] = {1.0, 2.0, 0.5};
    const double v_inv[2] = {1.0 / 2.0, 1.0 / 0.5};
    const long reps = 100000;
    std::vector<double> f0(static_cast<std::size_t>(reps)), f1(static_cast<std::size_t>(reps));
    double f[2];
    for (long i = 0; i < reps; ++i) {
      factor::sample_factor_at_t(y, lam, u_inv, v_inv, rng, f, ws);
      f0[static_cast<std::size_t>(i)] = f[0];
      f1[static_cast<std::size_t>(i)] = f[1];
    }
    const auto m0 = oracle::mean_sd(f0);
    const auto m1 = oracle::mean_sd(f1);
    CHECK(std::fabs(m0.mean) < 3.0 * std::sqrt(2.0 / reps));
    CHECK(std::fabs(m1.mean) < 3.0 * std::sqrt(0.5 / reps));
    CHECK(std::fabs(m0.sd * m0.sd - 2.0) < 3.0 * 2.0 * std::sqrt(2.0 / reps));
    CHECK(std::fabs(m1.sd * m1.sd - 0.5) < 3.0 * 0.5 * std::sqrt(2.0 / reps));
  }

  {
    Eigen::MatrixXd lam = Eigen::MatrixXd::Ones(1, 1);
    const double y[1] = {2.0};
    const double u_inv[1] = {1.0};
    const double v_inv[1] = {1.0};
    const long reps = 100000;
    std::vector<double> draws(static_cast<std::size_t>(reps));
    double f[1];
    for (long i = 0; i < reps; ++i) {
      factor::sample_factor_at_t(y, lam, u_inv, v_inv, rng, f, ws);
      draws[static_cast<std::size_t>(i)] = f[0];
    }
    const auto ms = oracle::mean_sd(draws);
    CHECK(std::fabs(ms.mean - 1.0) < 3.0 * std::sqrt(0.5 / reps));
    CHECK(std::fabs(ms.sd * ms.sd - 0.5) < 3.0 * 0.5 * std::sqrt(2.0 / reps));
  }

  {
    Eigen::MatrixXd lam(2, 1);
    lam << 0.7, -1.2;
    const double y[2] = {0.4, -0.9};
    const double u_inv[2] = {1.0 / 0.8, 1.0 / 1.7};
    const double v_inv[1] = {1.0 / 1.3};
    Eigen::MatrixXd prec(1, 1);
    prec(0, 0) = v_inv[0] + lam(0, 0) * lam(0, 0) * u_inv[0] + lam(1, 0) * lam(1, 0) * u_inv[1];
    Eigen::VectorXd b(1);
    b[0] = lam(0, 0) * u_inv[0] * y[0] + lam(1, 0) * u_inv[1] * y[1];
    const auto ref = oracle::dense_gaussian_from_precision(prec, b);
    const long reps = 100000;
    std::vector<double> draws(static_cast<std::size_t>(reps));
    double f[1];
    for (long i = 0; i < reps; ++i) {
      factor::sample_factor_at_t(y, lam, u_inv, v_inv, rng, f, ws);
      draws[static_cast<std::size_t>(i)] = f[0];
    }
    const auto ms = oracle::mean_sd(draws);
    CHECK(std::fabs(ms.mean - ref.mean[0]) < 3.0 * std::sqrt(ref.cov(0, 0) / reps));
    CHECK(std::fabs(ms.sd * ms.sd - ref.cov(0, 0)) <
          3.0 * ref.cov(0, 0) * std::sqrt(2.0 / reps));
  }
}

TEST_CASE("sample_loadings_row: prior fallback and conjugate oracles") {
  factor::FactorWorkspace ws;
  RngStream rng(6);

  {
    Eigen::MatrixXd f_by_t = Eigen::MatrixXd::Zero(50, 1);
    std::vector<double> y(50, 1.0), w(50, 1.0);
    const long reps = 50000;
    std::vector<double> draws(static_cast<std::size_t>(reps));
    double row[1];
    for (long i = 0; i < reps; ++i) {
      factor::sample_loadings_row(y.data(), f_by_t, w.data(), 1.0, rng, row, ws);
      draws[static_cast<std::size_t>(i)] = row[0];
    }
    const auto ms = oracle::mean_sd(draws);
    CHECK(std::fabs(ms.mean) < 3.0 / std::sqrt(static_cast<double>(reps)));
    CHECK(std::fabs(ms.sd * ms.sd - 1.0) < 3.0 * std::sqrt(2.0 / reps));
  }

  {
    Eigen::MatrixXd f_by_t = Eigen::MatrixXd::Ones(1, 1);
    std::vector<double> y = {3.0}, w = {1.0};
    const long reps = 100000;
    std::vector<double> draws(static_cast<std::size_t>(reps));
    double row[1];
    for (long i = 0; i < reps; ++i) {
      factor::sample_loadings_row(y.data(), f_by_t, w.data(), 1.0, rng, row, ws);
      draws[static_cast<std::size_t>(i)] = row[0];
    }
    const auto ms = oracle::mean_sd(draws);
    CHECK(std::fabs(ms.mean - 1.5) < 3.0 * std::sqrt(0.5 / reps));
    CHECK(std::fabs(ms.sd * ms.sd - 0.5) < 3.0 * 0.5 * std::sqrt(2.0 / reps));
  }

  {
    const long t_len = 6;
    std::mt19937_64 gen(8);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd f_by_t(t_len, 2);
    std::vector<double> y(static_cast<std::size_t>(t_len)), w(static_cast<std::size_t>(t_len));
    for (long t = 0; t < t_len; ++t) {
      f_by_t(t, 0) = nd(gen);
      f_by_t(t, 1) = nd(gen);
      y[static_cast<std::size_t>(t)] = nd(gen);
      w[static_cast<std::size_t>(t)] = std::exp(0.5 * nd(gen));
    }
    const double lv = 0.7;
    Eigen::MatrixXd prec = Eigen::MatrixXd::Identity(2, 2) / lv;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2);
    for (long t = 0; t < t_len; ++t) {
      prec += w[static_cast<std::size_t>(t)] * f_by_t.row(t).transpose() * f_by_t.row(t);
      b += w[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)] * f_by_t.row(t).transpose();
    }
    const auto ref = oracle::dense_gaussian_from_precision(prec, b);
    const long reps = 200000;
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    Eigen::Matrix2d sumsq = Eigen::Matrix2d::Zero();
    double row[2];
    for (long i = 0; i < reps; ++i) {
      factor::sample_loadings_row(y.data(), f_by_t, w.data(), lv, rng, row, ws);
      const Eigen::Vector2d r(row[0], row[1]);
      sum += r;
      sumsq += r * r.transpose();
    }
    const Eigen::Vector2d mean = sum / reps;
    const Eigen::Matrix2d cov = (sumsq - reps * mean * mean.transpose()) / (reps - 1.0);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::fabs(mean[i] - ref.mean[i]) < 3.0 * std::sqrt(ref.cov(i, i) / reps));
      for (int j = 0; j <= i; ++j) {
        const double se =
            std::sqrt((ref.cov(i, i) * ref.cov(j, j) + ref.cov(i, j) * ref.cov(i, j)) / reps);
        CHECK(std::fabs(cov(i, j) - ref.cov(i, j)) < 3.0 * se);
      }
    }
  }
}

TEST_CASE("identify_signs: flip rules and covariance invariance") {
  ParameterDraw p;
  p.mu = Eigen::VectorXd::Zero(2);
  p.phi = Eigen::VectorXd::Constant(3, 0.9);
  p.sigma = Eigen::VectorXd::Constant(3, 0.2);
  p.loadings.resize(2, 1);
  p.loadings << -3.0, 1.0;
  LatentPaths l;
  l.h = Eigen::MatrixXd::Zero(4, 3);
  l.f.resize(1, 3);
  l.f << 0.5, -0.2, 0.9;
  const Eigen::MatrixXd f_before = l.f;

  factor::identify_signs(p, l);
  CHECK(p.loadings(0, 0) == 3.0);
  CHECK(p.loadings(1, 0) == -1.0);
  CHECK(l.f.row(0) == (-f_before.row(0)));

  ParameterDraw q = p;
  q.loadings << 2.0, 1.0;
  LatentPaths l2 = l;
  factor::identify_signs(q, l2);
  CHECK(q.loadings(0, 0) == 2.0);
  CHECK(l2.f == l.f);

  std::mt19937_64 gen(23);
  std::normal_distribution<double> nd;
  ParameterDraw rp;
  rp.loadings.resize(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) rp.loadings(i, j) = nd(gen);
  rp.loadings.col(1) *= -1.0;
  LatentPaths rl;
  rl.f.resize(2, 5);
  for (int j = 0; j < 2; ++j)
    for (int t = 0; t < 5; ++t) rl.f(j, t) = nd(gen);
  rl.h = Eigen::MatrixXd::Zero(6, 6);
  Eigen::VectorXd v(2), u(4);
  for (int j = 0; j < 2; ++j) v[j] = std::exp(nd(gen));
  for (int i = 0; i < 4; ++i) u[i] = std::exp(nd(gen));
  const Eigen::MatrixXd before = factor::reconstruct_covariance(rp.loadings, v, u);
  factor::identify_signs(rp, rl);
  const Eigen::MatrixXd after = factor::reconstruct_covariance(rp.loadings, v, u);
  CHECK((before - after).cwiseAbs().maxCoeff() < 1e-14);
  for (int j = 0; j < 2; ++j) {
    int argmax = 0;
    for (int i = 0; i < 4; ++i)
      if (std::fabs(rp.loadings(i, j)) > std::fabs(rp.loadings(argmax, j))) argmax = i;
    CHECK(rp.loadings(argmax, j) > 0.0);
  }
}

TEST_CASE("factor/loadings draws match dense oracles across all small instances") {
  // every instance with m <= 3, r <= 2 (factors) and r <= 2, T <= 4 (loadings)
  factor::FactorWorkspace ws;
  std::mt19937_64 gen(77);
  std::normal_distribution<double> nd;
  const long reps = 20000;

  for (int m = 1; m <= 3; ++m)
    for (int r = 1; r <= 2; ++r) {
      Eigen::MatrixXd lam(m, r);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) lam(i, j) = nd(gen);
      std::vector<double> y(static_cast<std::size_t>(m)), ui(static_cast<std::size_t>(m)),
          vi(static_cast<std::size_t>(r));
      for (int i = 0; i < m; ++i) {
        y[static_cast<std::size_t>(i)] = nd(gen);
        ui[static_cast<std::size_t>(i)] = std::exp(0.5 * nd(gen));
      }
      for (int j = 0; j < r; ++j) vi[static_cast<std::size_t>(j)] = std::exp(0.5 * nd(gen));

      Eigen::MatrixXd prec = Eigen::MatrixXd::Zero(r, r);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(r);
      for (int i = 0; i < m; ++i) {
        prec += ui[static_cast<std::size_t>(i)] * lam.row(i).transpose() * lam.row(i);
        b += ui[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)] * lam.row(i).transpose();
      }
      for (int j = 0; j < r; ++j) prec(j, j) += vi[static_cast<std::size_t>(j)];
      const auto ref = oracle::dense_gaussian_from_precision(prec, b);

      math::RngStream rng(static_cast<std::uint64_t>(100 * m + r));
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(r);
      Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(r, r);
      std::vector<double> f(static_cast<std::size_t>(r));
      for (long it = 0; it < reps; ++it) {
        factor::sample_factor_at_t(y.data(), lam, ui.data(), vi.data(), rng, f.data(), ws);
        const Eigen::Map<Eigen::VectorXd> fv(f.data(), r);
        sum += fv;
        sumsq += fv * fv.transpose();
      }
      const Eigen::VectorXd mean = sum / reps;
      const Eigen::MatrixXd cov = (sumsq - reps * mean * mean.transpose()) / (reps - 1.0);
      INFO("factors m=", m, " r=", r);
      for (int i = 0; i < r; ++i) {
        CHECK(std::fabs(mean[i] - ref.mean[i]) < 4.0 * std::sqrt(ref.cov(i, i) / reps));
        for (int j = 0; j <= i; ++j) {
          const double se = std::sqrt(
              (ref.cov(i, i) * ref.cov(j, j) + ref.cov(i, j) * ref.cov(i, j)) / reps);
          CHECK(std::fabs(cov(i, j) - ref.cov(i, j)) < 4.0 * se);
        }
      }
    }

  for (int r = 1; r <= 2; ++r)
    for (long t_len = 1; t_len <= 4; ++t_len) {
      Eigen::MatrixXd f_by_t(t_len, r);
      std::vector<double> y(static_cast<std::size_t>(t_len)), w(static_cast<std::size_t>(t_len));
      for (long t = 0; t < t_len; ++t) {
        for (int j = 0; j < r; ++j) f_by_t(t, j) = nd(gen);
        y[static_cast<std::size_t>(t)] = nd(gen);
        w[static_cast<std::size_t>(t)] = std::exp(0.5 * nd(gen));
      }
      const double lv = 0.9;
      Eigen::MatrixXd prec = Eigen::MatrixXd::Identity(r, r) / lv;
      Eigen::VectorXd b = Eigen::VectorXd::Zero(r);
      for (long t = 0; t < t_len; ++t) {
        prec += w[static_cast<std::size_t>(t)] * f_by_t.row(t).transpose() * f_by_t.row(t);
        b += w[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)] *
             f_by_t.row(t).transpose();
      }
      const auto ref = oracle::dense_gaussian_from_precision(prec, b);

      math::RngStream rng(static_cast<std::uint64_t>(200 * r + t_len));
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(r);
      Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(r, r);
      std::vector<double> row(static_cast<std::size_t>(r));
      for (long it = 0; it < reps; ++it) {
        factor::sample_loadings_row(y.data(), f_by_t, w.data(), lv, rng, row.data(), ws);
        const Eigen::Map<Eigen::VectorXd> rv(row.data(), r);
        sum += rv;
        sumsq += rv * rv.transpose();
      }
      const Eigen::VectorXd mean = sum / reps;
      const Eigen::MatrixXd cov = (sumsq - reps * mean * mean.transpose()) / (reps - 1.0);
      INFO("loadings r=", r, " T=", t_len);
      for (int i = 0; i < r; ++i) {
        CHECK(std::fabs(mean[i] - ref.mean[i]) < 4.0 * std::sqrt(ref.cov(i, i) / reps));
        for (int j = 0; j <= i; ++j) {
          const double se = std::sqrt(
              (ref.cov(i, i) * ref.cov(j, j) + ref.cov(i, j) * ref.cov(i, j)) / reps);
          CHECK(std::fabs(cov(i, j) - ref.cov(i, j)) < 4.0 * se);
        }
      }
    }
}
