#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kgsig/dynamics.hpp"
#include "kgsig/signature.hpp"

namespace kgsig {

/// Two-point function of the bosonic projector state,
/// w2(f, g) = i sigma(G_m f, chi_hol G_m g).
class TwoPointEvaluator {
 public:
  TwoPointEvaluator(double mass, std::shared_ptr<const SpectralBasis> basis);

  double mass() const { return mass_; }
  const SpectralBasis& basis() const { return *basis_; }
  const SignatureOperator& signature() const { return signature_; }
  const ModeBlockOperator& holomorphic() const { return holomorphic_; }

  std::complex<double> two_point(const SpacetimeTestFunction& f, const SpacetimeTestFunction& g) const;
  /// Same, from precomputed Cauchy data of G_m f and G_m g.
  std::complex<double> two_point(const CauchyDatum& gf, const CauchyDatum& gg) const;

  /// Matrix W(i, j) = w2(f_i, f_j).
  Eigen::MatrixXcd gram(std::span<const SpacetimeTestFunction> fs) const;

 private:
  double mass_;
  std::shared_ptr<const SpectralBasis> basis_;
  SignatureOperator signature_;
  ModeBlockOperator holomorphic_;
};

using Matching = std::vector<std::pair<int, int>>;

/// All perfect matchings of {0..count-1}, each pair ordered (first < second) and pairs
/// ordered by their first element; (count - 1)!! of them. Throws for odd count or count > 8.
std::vector<Matching> perfect_matchings(int count);

/// Wick sum over perfect matchings of products two_point(i, j), i < j.
/// Odd count gives exactly 0; count > 8 throws std::invalid_argument.
std::complex<double> wick_sum(int count, const std::function<std::complex<double>(int, int)>& two_point);

/// 2n-point function of the quasi-free state.
std::complex<double> wick_n_point(const TwoPointEvaluator& state, std::span<const SpacetimeTestFunction> fs);

struct PositivityReport {
  int trials = 0;
  double min_gram_eigenvalue = 0.0;
  double max_gram_eigenvalue = 0.0;
  double max_imag_diagonal = 0.0;
  double min_real_diagonal = 0.0;
  /// max |Im w2(f,g) - sigma(Gf, Gg)/2| over pairs.
  double max_imag_identity_residual = 0.0;
  /// max |w2(f,g) - w2(g,f) - i G_m(f,g)| over pairs.
  double max_ccr_residual = 0.0;
};

/// Draws `trials` random real test functions on `time` and checks one-particle positivity
/// (Gram matrix), the imaginary-part relation and the commutator identity.
PositivityReport state_positivity_suite(const TwoPointEvaluator& state, std::uint64_t seed, int trials,
                                        const TimeGrid& time);

}  // namespace kgsig
