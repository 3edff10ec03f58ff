#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "kgsig/dynamics.hpp"

using namespace kgsig;

namespace {

struct Setup {
  SpatialGrid grid = build_grid(8, 5.0);
  SpectralBasis basis = spectral_decompose(laplacian(grid), grid.spacing);
};

// Closed form of int cos^4(pi s / (2a)) cos(w s) ds over [-a, a].
double pulse_cosine_transform(double a, double w) {
  auto i = [&](double k) {
    if (k == 0.0) return 2.0 * std::sin(w * a) / w;
    return std::sin((k - w) * a) / (k - w) + std::sin((k + w) * a) / (k + w);
  };
  const double p = std::numbers::pi / a;
  return 0.375 * i(0.0) + 0.5 * i(p) + 0.125 * i(2.0 * p);
}

}  // namespace

TEST_CASE("spectral propagation agrees with the matrix exponential of the generator") {
  Setup s;
  const int n = s.grid.num_points;
  const double m = 0.7, t = 3.3;
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const Eigen::MatrixXd k = laplacian(s.grid) + m * m * Eigen::MatrixXd::Identity(n, n);
  gen.topRightCorner(n, n) = std::complex<double>(0, -1) * Eigen::MatrixXcd::Identity(n, n);
  gen.bottomLeftCorner(n, n) = std::complex<double>(0, -1) * k.cast<std::complex<double>>();
  const Eigen::MatrixXcd u = (t * gen).exp();

  CauchyDatum d{Eigen::VectorXcd::Random(n), Eigen::VectorXcd::Random(n)};
  Eigen::VectorXcd stacked(2 * n);
  stacked << d.phi, d.pi;
  const Eigen::VectorXcd expected = u * stacked;
  const CauchyDatum got = propagate(d, t, m, s.basis);
  CHECK((got.phi - expected.head(n)).norm() < 1e-11);
  CHECK((got.pi - expected.tail(n)).norm() < 1e-11);
}

TEST_CASE("test functions must vanish at the window edges") {
  const TimeGrid tg = TimeGrid::symmetric(1.0, 0.1);
  CHECK(tg.count == 21);
  CHECK(tg.t_max() == doctest::Approx(1.0));
  std::vector<Eigen::VectorXcd> v(tg.count, Eigen::VectorXcd::Ones(3));
  CHECK_THROWS_AS(SpacetimeTestFunction(tg, v), std::invalid_argument);
  v.pop_back();
  CHECK_THROWS_AS(SpacetimeTestFunction(tg, v), std::invalid_argument);
}

TEST_CASE("retarded solution of a raised-cosine pulse matches the closed form after the pulse") {
  Setup s;
  const double m = 1.2, a = 1.5, t0 = -1.0;
  const int mode = 2;
  const double w = omega(s.basis.eigenvalue(mode), m);
  const Eigen::VectorXcd spatial = s.basis.eigenvectors().col(mode).cast<std::complex<double>>();
  auto pulse = [&](double t) {
    const double x = t - t0;
    return std::abs(x) < a ? std::pow(std::cos(std::numbers::pi * x / (2.0 * a)), 4) : 0.0;
  };
  double previous = 0.0;
  for (double dt : {0.04, 0.02}) {
    const TimeGrid tg = TimeGrid::symmetric(4.0, dt);
    const auto f = SpacetimeTestFunction::separable(tg, pulse, spatial);
    const SpacetimeField u = retarded_green(f, m, s.basis);
    double err = 0.0;
    for (int j = 0; j < tg.count; ++j) {
      const double t = tg.node(j);
      if (t <= t0 + a) continue;
      const std::complex<double> c = s.basis.to_modes(u.values[j])(mode);
      const double exact = std::sin(w * (t - t0)) / w * pulse_cosine_transform(a, w);
      err = std::max(err, std::abs(c - exact));
    }
    CHECK(err < 1e-5);
    if (previous > 0.0) CHECK(previous / err > 3.0);
    previous = err;
  }
}

TEST_CASE("advanced solution is the time reflection of the retarded one") {
  Setup s;
  std::mt19937_64 rng(7);
  const TimeGrid tg = TimeGrid::symmetric(3.0, 0.05);
  const auto f = random_real_test_function(rng, s.basis, tg);
  const SpacetimeField adv = advanced_green(f, 0.9, s.basis);
  const SpacetimeField ret = retarded_green(f.reflected(), 0.9, s.basis);
  for (int j = 0; j < tg.count; ++j) CHECK((adv.values[j] - ret.values[tg.count - 1 - j]).norm() < 1e-12);
}

TEST_CASE("Green's operators solve the discrete Klein-Gordon equation to second order in dt") {
  Setup s;
  std::mt19937_64 rng(3);
  const RandomProfile p = random_profile(rng, s.basis, -3.0, 3.0);
  double previous = 0.0;
  for (double dt : {0.05, 0.025}) {
    const TimeGrid tg = TimeGrid::symmetric(3.0, dt);
    const auto f = p.sample(tg);
    const double r = kg_residual(retarded_green(f, 1.0, s.basis), &f, 1.0, s.grid);
    const double g = kg_residual(causal_field(f, 1.0, s.basis), nullptr, 1.0, s.grid);
    CHECK(r < 1e-2);
    CHECK(g < 1e-2);
    if (previous > 0.0) CHECK(previous / r > 3.0);
    previous = r;
  }
}

TEST_CASE("causal data at t = 0 matches the causal field sampled at t = 0") {
  Setup s;
  std::mt19937_64 rng(11);
  const TimeGrid tg = TimeGrid::symmetric(3.0, 0.01);
  const auto f = random_real_test_function(rng, s.basis, tg);
  const CauchyDatum d = causal_fundamental(f, 1.1, s.basis);
  const SpacetimeField g = causal_field(f, 1.1, s.basis);
  CHECK((d.phi - g.values[(tg.count - 1) / 2]).norm() < 1e-7 * (1.0 + d.phi.norm()));
}
