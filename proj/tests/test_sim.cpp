#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fsv/errors.hpp"
#include "fsv/math/rng.hpp"
#include "fsv/sim/simulator.hpp"
#include "support/oracles.hpp"

using namespace fsv;

TEST_CASE("simulate_panel: determinism and fixture shapes") {
  const sim::TrueParams truth = sim::fixture("tiny");
  const sim::SimulatedPanel a = sim::simulate_panel(truth);
  const sim::SimulatedPanel b = sim::simulate_panel(truth);
  CHECK(a.returns.returns == b.returns.returns);
  CHECK(a.latents.h == b.latents.h);
  CHECK(a.latents.f == b.latents.f);
  CHECK(a.returns.rows() == 200);
  CHECK(a.returns.cols() == 3);

  const sim::SimulatedPanel c = sim::simulate_panel(sim::fixture("tiny", 99));
  CHECK(a.returns.returns != c.returns.returns);

  const sim::TrueParams ps = sim::fixture("paper-shape");
  CHECK(ps.t_len == 425);
  CHECK(ps.params.loadings.rows() == 12);
  CHECK(ps.params.loadings.cols() == 4);
  const sim::TrueParams rec = sim::fixture("recovery");
  CHECK(rec.t_len == 1000);
  CHECK(rec.params.loadings.rows() == 6);
  CHECK_THROWS_AS(sim::fixture("nope"), InvalidInput);
}

TEST_CASE("simulated latents replay the AR recursion from the documented draw order") {
  const sim::TrueParams truth = sim::fixture("recovery");
  const sim::SimulatedPanel p = sim::simulate_panel(truth);
  const long m = p.returns.cols();
  const long r = p.latents.f.rows();

  // independent test-side replay: h paths first (series major), then per t
  // the factor scores followed by the observation noise
  math::RngStream rng(truth.seed);
  Eigen::MatrixXd h(truth.t_len + 1, m + r);
  for (long i = 0; i < m + r; ++i) {
    const double mu = i < m ? truth.params.mu[i] : 0.0;
    const double phi = truth.params.phi[i];
    const double sigma = truth.params.sigma[i];
    h(0, i) = mu + rng.normal() * sigma / std::sqrt(1.0 - phi * phi);
    for (long t = 1; t <= truth.t_len; ++t)
      h(t, i) = mu + phi * (h(t - 1, i) - mu) + sigma * rng.normal();
  }
  CHECK((h - p.latents.h).cwiseAbs().maxCoeff() < 1e-12);

  for (long t = 1; t <= truth.t_len; ++t) {
    for (long j = 0; j < r; ++j) {
      const double f = rng.normal() * std::exp(0.5 * h(t, m + j));
      CHECK(std::fabs(f - p.latents.f(j, t - 1)) < 1e-12);
    }
    for (long i = 0; i < m; ++i) {
      double y = rng.normal() * std::exp(0.5 * h(t, i));
      for (long j = 0; j < r; ++j) y += truth.params.loadings(i, j) * p.latents.f(j, t - 1);
      CHECK(std::fabs(y - p.returns.returns(t - 1, i)) < 1e-12);
    }
  }
}

TEST_CASE("sigma=0 panels have constant log variance and the exact moment structure") {
  sim::TrueParams truth = sim::fixture("tiny");
  truth.t_len = 60000;
  truth.params.sigma.setConstant(1e-300);  // sigma -> 0 limit
  const sim::SimulatedPanel p = sim::simulate_panel(truth);
  const long m = p.returns.cols();

  for (long i = 0; i < m; ++i)
    CHECK(std::fabs(p.latents.h(10, i) - truth.params.mu[i]) < 1e-9);

  // sample covariance approaches Lambda V Lambda' + U with V, U constant
  Eigen::VectorXd v(1), u(m);
  v << std::exp(0.0);
  for (long i = 0; i < m; ++i) u[i] = std::exp(truth.params.mu[i]);
  Eigen::MatrixXd expect = truth.params.loadings * v.asDiagonal() *
                               truth.params.loadings.transpose() +
                           Eigen::MatrixXd(u.asDiagonal());
  Eigen::MatrixXd centered = p.returns.returns.rowwise() - p.returns.returns.colwise().mean();
  const Eigen::MatrixXd sample_cov =
      centered.transpose() * centered / static_cast<double>(p.returns.rows() - 1);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) {
      const double se = std::sqrt((expect(i, i) * expect(j, j) + expect(i, j) * expect(i, j)) /
                                  static_cast<double>(p.returns.rows()));
      CHECK(std::fabs(sample_cov(i, j) - expect(i, j)) < 4.0 * se);
    }
}

TEST_CASE("zero loadings de-correlate the panel") {
  sim::TrueParams truth = sim::fixture("recovery");
  truth.t_len = 50000;
  truth.params.loadings.setZero();
  const sim::SimulatedPanel p = sim::simulate_panel(truth);
  Eigen::MatrixXd centered = p.returns.returns.rowwise() - p.returns.returns.colwise().mean();
  const long n = p.returns.rows();
  const long m = p.returns.cols();
  for (long i = 0; i < m; ++i)
    for (long j = i + 1; j < m; ++j) {
      const double corr = centered.col(i).dot(centered.col(j)) /
                          std::sqrt(centered.col(i).squaredNorm() * centered.col(j).squaredNorm());
      // heavy-tailed SV returns mix slowly; a generous multiple of 1/sqrt(n)
      CHECK(std::fabs(corr) < 8.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("price panel reconstruction cumulates from base 100") {
  const sim::SimulatedPanel p = sim::simulate_panel(sim::fixture("paper-shape"));
  const PricePanel prices = sim::to_price_panel(p.returns);
  CHECK(prices.prices.rows() == 426);
  CHECK(prices.prices.cols() == 12);
  CHECK(prices.prices(0, 0) == 100.0);
  CHECK(prices.dates.size() == 426);
  prices.validate();
  // round trip through log returns
  for (long j = 0; j < 12; ++j) {
    double price = 100.0;
    for (long t = 0; t < p.returns.rows(); ++t) {
      price *= std::exp(p.returns.returns(t, j));
      CHECK(price == doctest::Approx(prices.prices(t + 1, j)).epsilon(1e-9));
    }
  }
}
