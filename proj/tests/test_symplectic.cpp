#include <random>

#include <doctest.h>

#include "kgsig/symplectic.hpp"

using namespace kgsig;

namespace {

CauchyDatum random_datum(int n, unsigned seed) {
  std::srand(seed);
  return {Eigen::VectorXcd::Random(n), Eigen::VectorXcd::Random(n)};
}

}  // namespace

TEST_CASE("symplectic form is skew-hermitian and agrees in field and mode coordinates") {
  const SpatialGrid grid = build_grid(10, 4.0);
  const SpectralBasis basis = spectral_decompose(laplacian(grid), grid.spacing);
  const CauchyDatum a = random_datum(10, 1), b = random_datum(10, 2);
  const auto ab = symplectic(a, b, grid);
  CHECK(std::abs(ab + std::conj(symplectic(b, a, grid))) < 1e-14);
  CHECK(std::abs(ab - symplectic(to_modes(a, basis), to_modes(b, basis))) < 1e-13);
  CHECK_THROWS(symplectic(a, CauchyDatum::zero(3), grid));
}

TEST_CASE("symplectic form is conserved by propagation") {
  const SpatialGrid grid = build_grid(12, 6.0);
  const SpectralBasis basis = spectral_decompose(laplacian(grid), grid.spacing);
  const CauchyDatum a = random_datum(12, 3), b = random_datum(12, 4);
  const auto s0 = symplectic(a, b, grid);
  for (double t : {0.5, 17.0, 100.0}) {
    const auto st = symplectic(propagate(a, t, 0.8, basis), propagate(b, t, 0.8, basis), grid);
    CHECK(std::abs(st - s0) < 1e-12 * std::abs(s0));
  }
}

TEST_CASE("spacetime form of the causal propagator equals the symplectic form of the solutions") {
  const SpatialGrid grid = build_grid(12, 6.0);
  const SpectralBasis basis = spectral_decompose(laplacian(grid), grid.spacing);
  std::mt19937_64 rng(5);
  const TimeGrid tg = TimeGrid::symmetric(6.0, 0.05);
  for (int i = 0; i < 3; ++i) {
    const auto f = random_real_test_function(rng, basis, tg);
    const auto g = random_real_test_function(rng, basis, tg);
    const auto lhs = gm_form(f, g, 1.3, basis);
    const auto rhs = symplectic(causal_fundamental(f, 1.3, basis), causal_fundamental(g, 1.3, basis), grid);
    CHECK(std::abs(lhs - rhs) < 1e-6 * std::max(1.0, std::abs(lhs)));
  }
}
