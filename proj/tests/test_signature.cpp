#include <cmath>
#include <memory>
#include <numbers>

#include <doctest.h>

#include "kgsig/errors.hpp"
#include "kgsig/signature.hpp"

using namespace kgsig;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralBasis make_basis(int n, double l) {
  const SpatialGrid grid = build_grid(n, l);
  return spectral_decompose(laplacian(grid), grid.spacing);
}

}  // namespace

TEST_CASE("signature squares to pi^2 and splits frequencies") {
  const double w = 1.7;
  const Eigen::Matrix2d b = signature_block(w);
  CHECK((b * b - kPi * kPi * Eigen::Matrix2d::Identity()).norm() < 1e-13);
  CHECK((b * Eigen::Vector2d(1, w) + kPi * Eigen::Vector2d(1, w)).norm() < 1e-14);
  CHECK((b * Eigen::Vector2d(1, -w) - kPi * Eigen::Vector2d(1, -w)).norm() < 1e-14);
}

TEST_CASE("assembled operator on a two-point grid has eigenvalues -pi, -pi, pi, pi") {
  const SpectralBasis basis = make_basis(2, 3.0);
  const SignatureSpectrum s = assembled_spectrum(signature_analytic(1.0, basis), basis);
  REQUIRE(s.eigenvalues.size() == 4);
  CHECK(s.eigenvalues(0).real() == doctest::Approx(-kPi).epsilon(1e-13));
  CHECK(s.eigenvalues(1).real() == doctest::Approx(-kPi).epsilon(1e-13));
  CHECK(s.eigenvalues(2).real() == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(s.eigenvalues(3).real() == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(s.count_minus == 2);
  CHECK(s.count_plus == 2);
  CHECK(s.max_eigenspace_distance < 1e-10);
}

TEST_CASE("complex structure and projectors") {
  const SpectralBasis basis = make_basis(5, 3.0);
  const SignatureOperator s = signature_analytic(0.8, basis);
  const ModeBlockOperator j = complex_structure(s);
  const Projectors p = projectors(j);
  const ModeBlockOperator one = ModeBlockOperator::identity(5);
  CHECK((p.holomorphic * p.holomorphic - p.holomorphic).max_abs() < 1e-14);
  CHECK((p.holomorphic + p.antiholomorphic - one).max_abs() < 1e-14);
  CHECK((p.holomorphic * p.antiholomorphic).max_abs() < 1e-14);
  for (int n = 0; n < 5; ++n) {
    const double w = omega(basis.eigenvalue(n), 0.8);
    const Eigen::Vector2cd pos(1.0, w), neg(1.0, -w);
    CHECK((p.holomorphic.block(n) * pos).norm() < 1e-14);
    CHECK((p.holomorphic.block(n) * neg - neg).norm() < 1e-14);
  }
  CHECK_THROWS_AS(projectors(one), std::invalid_argument);
}

TEST_CASE("scalar product from the signature is positive and conserved") {
  const SpectralBasis basis = make_basis(6, 3.0);
  const SignatureOperator s = signature_analytic(1.1, basis);
  std::srand(4);
  const CauchyDatum a{Eigen::VectorXcd::Random(6), Eigen::VectorXcd::Random(6)};
  const auto n0 = scalar_product_m(a, a, s, basis);
  CHECK(n0.real() > 0.0);
  CHECK(std::abs(n0.imag()) < 1e-13 * n0.real());
  const auto nt = scalar_product_m(propagate(a, 42.0, 1.1, basis), propagate(a, 42.0, 1.1, basis), s, basis);
  CHECK(std::abs(nt - n0) < 1e-12 * n0.real());
}

TEST_CASE("massless limit norm matches the per-mode closed form") {
  const SpectralBasis basis = make_basis(8, 5.0);
  const std::vector<double> masses{1.0, 0.5, 0.25};
  const MasslessLimitReport r = massless_limit(basis, masses);
  for (const auto& row : r.table) {
    double expected = 0.0;
    for (int n = 0; n < 8; ++n) {
      const double k = std::sqrt(basis.eigenvalue(n));
      const double w = omega(basis.eigenvalue(n), row.mass);
      expected = std::max(expected, kPi * row.mass * row.mass / (k * (k + w)));
    }
    CHECK(row.norm_difference == doctest::Approx(expected).epsilon(1e-12));
    CHECK(row.norm_difference <= row.bound);
  }
  const std::vector<double> bad{0.5, 1.0};
  CHECK_THROWS_AS(massless_limit(basis, bad), std::invalid_argument);
}

TEST_CASE("Riesz pairing reproduces the massless symplectic form up to -i") {
  const SpectralBasis basis = make_basis(6, 3.0);
  const SignatureOperator s0 = signature_analytic(0.0, basis);
  std::srand(8);
  const CauchyDatum a{Eigen::VectorXcd::Random(6), Eigen::VectorXcd::Random(6)};
  const CauchyDatum b{Eigen::VectorXcd::Random(6), Eigen::VectorXcd::Random(6)};
  const RieszConsistency r = riesz_consistency(a, b, s0, basis);
  CHECK(std::abs(r.ratio - std::complex<double>(0.0, -1.0)) < 1e-12);
  const SignatureOperator inv = riesz_inverse(s0);
  for (int n = 0; n < 6; ++n) CHECK((inv.block(n) - s0.block(n) / (kPi * kPi)).norm() < 1e-14);
}

TEST_CASE("reconstruction from spacetime products approaches the closed form") {
  const SpectralBasis basis = make_basis(4, 3.0);
  ReconstructionOptions opts;
  opts.mass_nodes = 200;
  opts.window = {0.1, 100.0, 1e-6, 51200.0};
  const ReconstructionReport r = signature_reconstruct(1.5, basis, MassInterval(1.0, 2.0), 0.1, opts);
  CHECK(r.max_deviation < 1e-2);
  CHECK(r.max_imaginary < 1e-6);
  CHECK_THROWS_AS(signature_reconstruct(1.5, basis, MassInterval(1.45, 2.0), 0.1, opts), ConfigError);
}
