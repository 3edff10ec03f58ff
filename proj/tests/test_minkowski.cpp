#include <numbers>

#include <doctest.h>

#include "kgsig/minkowski.hpp"
#include "kgsig/signature.hpp"

using namespace kgsig::minkowski;

namespace {

constexpr double kPi = std::numbers::pi;

ModeSuperposition single_mode(std::complex<double> plus, std::complex<double> minus) {
  Mode m;
  m.a_plus = plus;
  m.a_minus = minus;
  return ModeSuperposition(3, 2.0, {m});  // k = 0, omega = 2
}

}  // namespace

TEST_CASE("single resting mode has the expected symplectic and scalar-product coefficients") {
  const auto a = single_mode(1.0, 0.0);
  CHECK(std::abs(symplectic(a, a) - std::complex<double>(0.0, 1.0 / (16.0 * kPi * kPi))) < 1e-16);
  CHECK(std::abs(scalar_product(a, a) - 1.0 / (16.0 * kPi)) < 1e-16);
  const auto b = single_mode(0.0, 1.0);
  CHECK(std::abs(symplectic(b, b) + std::complex<double>(0.0, 1.0 / (16.0 * kPi * kPi))) < 1e-16);
  const auto s = signature_action(single_mode(1.0, 1.0));
  CHECK(s.modes()[0].a_plus == std::complex<double>(-kPi, 0.0));
  CHECK(s.modes()[0].a_minus == std::complex<double>(kPi, 0.0));
}

TEST_CASE("amplitude and Cauchy transforms are mutually inverse") {
  for (double w : {0.3, 1.0, 4.5}) {
    CHECK((forward_transform_matrix(w) * inverse_transform_matrix(w) - Eigen::Matrix2d::Identity()).norm() < 1e-14);
    CHECK((cauchy_signature_block_via_amplitudes(w) - cauchy_signature_block(w)).cwiseAbs().maxCoeff() <
          1e-14 * std::max(w, 1.0 / w));
  }
}

TEST_CASE("mode sets are validated") {
  Mode m;
  CHECK_THROWS_AS(ModeSuperposition(2, 1.0, {m}), std::invalid_argument);
  CHECK_THROWS_AS(ModeSuperposition(3, 0.0, {m}), std::invalid_argument);
  CHECK_THROWS_AS(ModeSuperposition(3, 1.0, {m, m}), std::invalid_argument);
  m.weight = 0.0;
  CHECK_THROWS_AS(ModeSuperposition(3, 1.0, {m}), std::invalid_argument);
}

TEST_CASE("lattice blocks agree with the continuum formula") {
  const kgsig::SpatialGrid grid = kgsig::build_grid(16, 10.0);
  const kgsig::SpectralBasis basis = kgsig::spectral_decompose(kgsig::laplacian(grid), grid.spacing);
  const CrossCheckReport r = cross_check_lattice(1.5, basis);
  CHECK(r.rows.size() == 16);
  CHECK(r.max_closed_form_deviation <= 1e-14);
  CHECK(r.max_transform_deviation <= 1e-14);
}
