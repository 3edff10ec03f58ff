#include <algorithm>
#include <memory>
#include <numeric>
#include <random>

#include <doctest.h>

#include "kgsig/state.hpp"
#include "kgsig/symplectic.hpp"

using namespace kgsig;

namespace {

// Sum over all orderings with increasing pairs, divided by the number of pair orderings.
std::complex<double> permutation_oracle(int count, const Eigen::MatrixXcd& w) {
  std::vector<int> p(count);
  std::iota(p.begin(), p.end(), 0);
  std::complex<double> total{0.0, 0.0};
  do {
    bool ok = true;
    for (int k = 0; k < count; k += 2) ok = ok && p[k] < p[k + 1];
    if (!ok) continue;
    std::complex<double> term{1.0, 0.0};
    for (int k = 0; k < count; k += 2) term *= w(p[k], p[k + 1]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  double pairs_factorial = 1.0;
  for (int k = 2; k <= count / 2; ++k) pairs_factorial *= k;
  return total / pairs_factorial;
}

}  // namespace

TEST_CASE("perfect matchings are counted by the double factorial") {
  CHECK(perfect_matchings(0).size() == 1);
  CHECK(perfect_matchings(2).size() == 1);
  CHECK(perfect_matchings(4).size() == 3);
  CHECK(perfect_matchings(6).size() == 15);
  CHECK(perfect_matchings(8).size() == 105);
  CHECK_THROWS_AS(perfect_matchings(3), std::invalid_argument);
  CHECK_THROWS_AS(perfect_matchings(10), std::invalid_argument);
  for (const auto& m : perfect_matchings(6)) {
    for (const auto& [i, j] : m) CHECK(i < j);
  }
}

TEST_CASE("Wick sum agrees with brute-force permutation enumeration") {
  std::srand(12);
  const Eigen::MatrixXcd w = Eigen::MatrixXcd::Random(8, 8);
  for (int n : {2, 4, 6, 8}) {
    const auto got = wick_sum(n, [&](int i, int j) { return w(i, j); });
    CHECK(std::abs(got - permutation_oracle(n, w)) < 1e-12 * std::max(1.0, std::abs(got)));
  }
  const auto four = wick_sum(4, [&](int i, int j) { return w(i, j); });
  CHECK(four == w(0, 1) * w(2, 3) + w(0, 2) * w(1, 3) + w(0, 3) * w(1, 2));
  CHECK(wick_sum(5, [&](int i, int j) { return w(i, j); }) == std::complex<double>(0.0, 0.0));
  CHECK_THROWS_AS(wick_sum(10, [&](int i, int j) { return w(i, j); }), std::invalid_argument);
}

TEST_CASE("two-point function is positive, hermitian and reproduces the commutator") {
  const SpatialGrid grid = build_grid(8, 5.0);
  const auto basis = std::make_shared<const SpectralBasis>(spectral_decompose(laplacian(grid), grid.spacing));
  const TwoPointEvaluator state(1.2, basis);
  const PositivityReport r = state_positivity_suite(state, 5, 6, TimeGrid::symmetric(5.0, 0.05));
  CHECK(r.min_gram_eigenvalue > -1e-10);
  CHECK(r.min_real_diagonal > 0.0);
  CHECK(r.max_imag_identity_residual < 1e-10);
  CHECK(r.max_ccr_residual < 1e-6);

  std::mt19937_64 rng(2);
  const TimeGrid tg = TimeGrid::symmetric(5.0, 0.05);
  std::vector<SpacetimeTestFunction> fs;
  for (int i = 0; i < 3; ++i) fs.push_back(random_real_test_function(rng, *basis, tg));
  const Eigen::MatrixXcd w = state.gram(fs);
  CHECK((w - w.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(wick_n_point(state, std::span<const SpacetimeTestFunction>(fs.data(), 3)) == std::complex<double>(0, 0));
}
