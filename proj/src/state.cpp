#include "kgsig/state.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

#include "kgsig/symplectic.hpp"

namespace kgsig {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
constexpr int kMaxWickPoints = 8;

void extend_matchings(std::vector<int>& free, Matching& current, std::vector<Matching>& out) {
  if (free.empty()) {
    out.push_back(current);
    return;
  }
  const int first = free.front();
  for (std::size_t k = 1; k < free.size(); ++k) {
    const int partner = free[k];
    std::vector<int> rest;
    rest.reserve(free.size() - 2);
    for (std::size_t r = 1; r < free.size(); ++r) {
      if (r != k) rest.push_back(free[r]);
    }
    current.emplace_back(first, partner);
    extend_matchings(rest, current, out);
    current.pop_back();
  }
}

}  // namespace

TwoPointEvaluator::TwoPointEvaluator(double mass, std::shared_ptr<const SpectralBasis> basis)
    : mass_(mass),
      basis_(std::move(basis)),
      signature_(signature_analytic(mass, *basis_)),
      holomorphic_(projectors(complex_structure(signature_)).holomorphic) {}

std::complex<double> TwoPointEvaluator::two_point(const SpacetimeTestFunction& f,
                                                  const SpacetimeTestFunction& g) const {
  return two_point(causal_fundamental(f, mass_, *basis_), causal_fundamental(g, mass_, *basis_));
}

std::complex<double> TwoPointEvaluator::two_point(const CauchyDatum& gf, const CauchyDatum& gg) const {
  return kI * symplectic(to_modes(gf, *basis_), holomorphic_.apply(to_modes(gg, *basis_)));
}

Eigen::MatrixXcd TwoPointEvaluator::gram(std::span<const SpacetimeTestFunction> fs) const {
  std::vector<CauchyDatum> data;
  data.reserve(fs.size());
  for (const auto& f : fs) data.push_back(causal_fundamental(f, mass_, *basis_));
  const int n = static_cast<int>(fs.size());
  Eigen::MatrixXcd w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = two_point(data[i], data[j]);
  }
  return w;
}

std::vector<Matching> perfect_matchings(int count) {
  if (count < 0 || count % 2 != 0) throw std::invalid_argument("perfect_matchings: count must be even");
  if (count > kMaxWickPoints) throw std::invalid_argument("perfect_matchings: at most 8 points supported");
  std::vector<int> free(count);
  for (int i = 0; i < count; ++i) free[i] = i;
  std::vector<Matching> out;
  Matching current;
  extend_matchings(free, current, out);
  return out;
}

std::complex<double> wick_sum(int count, const std::function<std::complex<double>(int, int)>& two_point) {
  if (count < 0) throw std::invalid_argument("wick_sum: negative count");
  if (count > kMaxWickPoints) throw std::invalid_argument("wick_sum: at most 8 points supported");
  if (count % 2 != 0) return {0.0, 0.0};
  std::complex<double> total{0.0, 0.0};
  for (const auto& m : perfect_matchings(count)) {
    std::complex<double> term{1.0, 0.0};
    for (const auto& [i, j] : m) term *= two_point(i, j);
    total += term;
  }
  return total;
}

std::complex<double> wick_n_point(const TwoPointEvaluator& state, std::span<const SpacetimeTestFunction> fs) {
  const int n = static_cast<int>(fs.size());
  if (n > kMaxWickPoints) throw std::invalid_argument("wick_n_point: at most 8 points supported");
  if (n % 2 != 0) return {0.0, 0.0};
  const Eigen::MatrixXcd w = state.gram(fs);
  return wick_sum(n, [&](int i, int j) { return w(i, j); });
}

PositivityReport state_positivity_suite(const TwoPointEvaluator& state, std::uint64_t seed, int trials,
                                        const TimeGrid& time) {
  if (trials < 1) throw std::invalid_argument("state_positivity_suite: need at least one trial");
  std::mt19937_64 rng(seed);
  std::vector<SpacetimeTestFunction> fs;
  fs.reserve(trials);
  for (int i = 0; i < trials; ++i) fs.push_back(random_real_test_function(rng, state.basis(), time));

  std::vector<CauchyDatum> data;
  for (const auto& f : fs) data.push_back(causal_fundamental(f, state.mass(), state.basis()));
  Eigen::MatrixXcd w(trials, trials);
  for (int i = 0; i < trials; ++i) {
    for (int j = 0; j < trials; ++j) w(i, j) = state.two_point(data[i], data[j]);
  }

  PositivityReport r;
  r.trials = trials;
  const Eigen::MatrixXcd herm = 0.5 * (w + w.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  r.min_gram_eigenvalue = es.eigenvalues().minCoeff();
  r.max_gram_eigenvalue = es.eigenvalues().maxCoeff();
  r.min_real_diagonal = std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    r.max_imag_diagonal = std::max(r.max_imag_diagonal, std::abs(w(i, i).imag()));
    r.min_real_diagonal = std::min(r.min_real_diagonal, w(i, i).real());
  }
  for (int i = 0; i < trials; ++i) {
    for (int j = 0; j < trials; ++j) {
      if (i == j) continue;
      const std::complex<double> sig = symplectic(to_modes(data[i], state.basis()), to_modes(data[j], state.basis()));
      r.max_imag_identity_residual = std::max(r.max_imag_identity_residual, std::abs(w(i, j).imag() - 0.5 * sig));
      const std::complex<double> g = gm_form(fs[i], fs[j], state.mass(), state.basis());
      r.max_ccr_residual = std::max(r.max_ccr_residual, std::abs(w(i, j) - w(j, i) - kI * g));
    }
  }
  return r;
}

}  // namespace kgsig
