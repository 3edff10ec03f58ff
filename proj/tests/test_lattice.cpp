#include <cmath>
#include <numbers>

#include <doctest.h>

#include "kgsig/lattice.hpp"

using namespace kgsig;

TEST_CASE("two-point grid has eigenvalues 1 and 3 with symmetric and antisymmetric modes") {
  const SpatialGrid grid = build_grid(2, 3.0);
  CHECK(grid.spacing == doctest::Approx(1.0));
  const SpectralBasis basis = spectral_decompose(laplacian(grid), grid.spacing);
  CHECK(basis.eigenvalue(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(basis.eigenvalue(1) == doctest::Approx(3.0).epsilon(1e-14));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(basis.eigenvectors()(0, 0) == doctest::Approx(r));
  CHECK(basis.eigenvectors()(1, 0) == doctest::Approx(r));
  CHECK(basis.eigenvectors()(0, 1) == doctest::Approx(r));
  CHECK(basis.eigenvectors()(1, 1) == doctest::Approx(-r));
}

TEST_CASE("eigenvalues follow the Dirichlet sine formula and vectors are h-orthonormal") {
  const SpatialGrid grid = build_grid(16, 10.0);
  const SpectralBasis basis = spectral_decompose(laplacian(grid), grid.spacing);
  for (int n = 0; n < 16; ++n) {
    const double s = std::sin((n + 1) * std::numbers::pi / 34.0);
    CHECK(basis.eigenvalue(n) == doctest::Approx(4.0 / (grid.spacing * grid.spacing) * s * s).epsilon(1e-13));
  }
  const Eigen::MatrixXd& v = basis.eigenvectors();
  CHECK((grid.spacing * v.transpose() * v - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-13);
  Eigen::VectorXcd f = Eigen::VectorXcd::Random(16);
  CHECK((basis.to_field(basis.to_modes(f)) - f).norm() < 1e-13);
}

TEST_CASE("invalid grids and operators are rejected") {
  CHECK_THROWS(build_grid(1, 1.0));
  CHECK_THROWS(build_grid(4, 0.0));
  Eigen::MatrixXd asym(2, 2);
  asym << 2, -1, 0, 2;
  CHECK_THROWS_AS(spectral_decompose(asym, 1.0), std::invalid_argument);
  Eigen::MatrixXd singular(2, 2);
  singular << 1, -1, -1, 1;
  CHECK_THROWS_AS(spectral_decompose(singular, 1.0), std::domain_error);
  CHECK_THROWS_AS(omega(0.0, 0.0), std::domain_error);
  CHECK(omega(3.0, 1.0) == doctest::Approx(2.0));
}
