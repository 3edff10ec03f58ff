#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "kgsig/lattice.hpp"

namespace kgsig::minkowski {

/// One Fourier mode with upper/lower mass-shell amplitudes. In dimension 1 only
/// momentum.x() is used. `weight` is the quadrature weight standing in for d^dk/(2pi)^d.
struct Mode {
  Eigen::Vector3d momentum = Eigen::Vector3d::Zero();
  std::complex<double> a_plus;
  std::complex<double> a_minus;
  double weight = 1.0;
};

class ModeSuperposition {
 public:
  /// Throws std::invalid_argument on bad dimension, repeated momenta, non-positive
  /// weights or a zero frequency.
  ModeSuperposition(int dimension, double mass, std::vector<Mode> modes);

  int dimension() const { return dimension_; }
  double mass() const { return mass_; }
  const std::vector<Mode>& modes() const { return modes_; }
  double momentum_norm(int i) const;
  double omega(int i) const;

  /// Same mode set with new amplitudes.
  ModeSuperposition with_amplitudes(const std::vector<std::complex<double>>& plus,
                                    const std::vector<std::complex<double>>& minus) const;

 private:
  int dimension_;
  double mass_;
  std::vector<Mode> modes_;
};

/// sum_k weight i/(8 pi^2 w) [conj(a+) b+ - conj(a-) b-].
std::complex<double> symplectic(const ModeSuperposition& a, const ModeSuperposition& b);

/// sum_k weight 1/(8 pi w) [conj(a+) b+ + conj(a-) b-].
std::complex<double> scalar_product(const ModeSuperposition& a, const ModeSuperposition& b);

/// a+ -> -pi a+, a- -> +pi a-.
ModeSuperposition signature_action(const ModeSuperposition& a);

struct CauchyPair {
  std::complex<double> phi;
  std::complex<double> pi;
};

/// (phi^, pi^) = 1/(4 pi) [[1/w, -1/w], [1, 1]] (a+, a-).
std::vector<CauchyPair> cauchy_transform(const ModeSuperposition& a);
/// (a+, a-) = 2 pi [[w, 1], [-w, 1]] (phi^, pi^), on the mode set of `shape`.
ModeSuperposition inverse_cauchy_transform(const std::vector<CauchyPair>& data, const ModeSuperposition& shape);

Eigen::Matrix2d forward_transform_matrix(double omega);
Eigen::Matrix2d inverse_transform_matrix(double omega);

/// Signature in Cauchy variables from the closed form -pi [[0, 1/w], [w, 0]].
Eigen::Matrix2d cauchy_signature_block(double omega);
/// Same block obtained by conjugating diag(-pi, pi) with the amplitude transforms.
Eigen::Matrix2d cauchy_signature_block_via_amplitudes(double omega);

struct CrossCheckRow {
  double lambda = 0.0;
  double omega = 0.0;
  double closed_form_deviation = 0.0;  // |lattice block - closed-form Minkowski block|_max
  double transform_deviation = 0.0;    // relative, against the amplitude-transform route
  double eigen_deviation = 0.0;        // eigenvalues of the block vs {-pi, +pi}
};

struct CrossCheckReport {
  std::vector<CrossCheckRow> rows;
  double max_closed_form_deviation = 0.0;
  double max_transform_deviation = 0.0;
  double max_eigen_deviation = 0.0;
};

/// Compares the lattice signature blocks at mass m with the Minkowski block at |k| = sqrt(lambda_n).
CrossCheckReport cross_check_lattice(double mass, const SpectralBasis& basis);

}  // namespace kgsig::minkowski
