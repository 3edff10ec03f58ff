#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kgsig/dynamics.hpp"
#include "kgsig/lattice.hpp"
#include "kgsig/mass_family.hpp"

namespace kgsig {

/// Operator acting independently on each mode's (phi, pi) coefficient pair.
class ModeBlockOperator {
 public:
  explicit ModeBlockOperator(std::vector<Eigen::Matrix2cd> blocks);
  static ModeBlockOperator identity(int modes);

  int size() const { return static_cast<int>(blocks_.size()); }
  const Eigen::Matrix2cd& block(int n) const { return blocks_[n]; }
  const std::vector<Eigen::Matrix2cd>& blocks() const { return blocks_; }

  ModeDatum apply(const ModeDatum& x) const;
  CauchyDatum apply(const CauchyDatum& x, const SpectralBasis& basis) const;

  ModeBlockOperator operator*(const ModeBlockOperator& rhs) const;
  ModeBlockOperator operator+(const ModeBlockOperator& rhs) const;
  ModeBlockOperator operator-(const ModeBlockOperator& rhs) const;
  ModeBlockOperator scaled(std::complex<double> factor) const;

  /// Dense 2N x 2N matrix on interleaved mode coordinates (phi_0, pi_0, phi_1, pi_1, ...).
  Eigen::MatrixXcd mode_matrix() const;
  /// max_n of the blockwise max-abs entry.
  double max_abs() const;

 private:
  std::vector<Eigen::Matrix2cd> blocks_;
};

/// Bosonic signature operator: real 2x2 block per mode.
class SignatureOperator {
 public:
  SignatureOperator(double mass, std::vector<Eigen::Matrix2d> blocks);

  double mass() const { return mass_; }
  int size() const { return static_cast<int>(blocks_.size()); }
  const Eigen::Matrix2d& block(int n) const { return blocks_[n]; }
  const std::vector<Eigen::Matrix2d>& blocks() const { return blocks_; }

  ModeDatum apply(const ModeDatum& x) const;
  CauchyDatum apply(const CauchyDatum& x, const SpectralBasis& basis) const;
  ModeBlockOperator as_block_operator() const;

  /// Interleaved mode coordinates.
  Eigen::MatrixXd mode_matrix() const;
  /// Action on stacked field values (phi(x_1..x_N), pi(x_1..x_N)).
  Eigen::MatrixXd field_matrix(const SpectralBasis& basis) const;

 private:
  double mass_;
  std::vector<Eigen::Matrix2d> blocks_;
};

/// -pi [[0, 1/w], [w, 0]].
Eigen::Matrix2d signature_block(double omega);

/// Closed form at mass m >= 0. Throws std::domain_error for m = 0 with a zero mode.
SignatureOperator signature_analytic(double mass, const SpectralBasis& basis);

/// <a|b>_m = i sigma(a, S b).
std::complex<double> scalar_product_m(const CauchyDatum& a, const CauchyDatum& b, const SignatureOperator& op,
                                      const SpectralBasis& basis);

/// Right-hand side of the mass decomposition, i int_I sigma(a_m, S_m b_m) m dm, with the
/// closed-form S_m and Gauss-Legendre nodes on the overlap of the two weight supports.
std::complex<double> mass_decomposition_rhs(const MassFamily& a, const MassFamily& b, int nodes = 400);

struct ReconstructionOptions {
  WindowOptions window{0.05, 200.0, 1e-6, 51200.0};
  int mass_nodes = 200;
  /// If positive, a deviation from the closed form above this throws ConvergenceError.
  double max_deviation = 0.0;
};

struct ReconstructionReport {
  SignatureOperator op;
  /// Recovered operator on interleaved mode coordinates.
  Eigen::MatrixXcd mode_matrix;
  double max_deviation = 0.0;
  /// Largest imaginary entry of the recovered blocks before taking the real part.
  double max_imaginary = 0.0;
  double max_half_width = 0.0;
  double last_increment = 0.0;
  std::vector<double> mode_deviation;
  std::vector<double> mode_half_width;
};

/// Recovers S_m from spacetime scalar products of families localised at m (bump of
/// half width delta), normalised by int w^2 m dm and solved against the symplectic Gram matrix.
ReconstructionReport signature_reconstruct(double mass, const SpectralBasis& basis, const MassInterval& interval,
                                           double delta, const ReconstructionOptions& options = {});

/// J = i |S|^{-1} S. Each block must square to a positive multiple of the identity
/// (true for every signature operator built here); throws std::domain_error otherwise.
ModeBlockOperator complex_structure(const SignatureOperator& op);

struct Projectors {
  ModeBlockOperator holomorphic;
  ModeBlockOperator antiholomorphic;
};

/// chi_hol = (1 - iJ)/2, chi_ah = (1 + iJ)/2. Throws std::invalid_argument unless J^2 = -1.
Projectors projectors(const ModeBlockOperator& complex_structure);

/// Operator norm of a 2x2 block in the <.|.>_0 geometry of a mode with momentum k,
/// where the phi and pi components carry weights k and 1/k.
double massless_block_norm(const Eigen::Matrix2d& block, double k);

struct MasslessLimitRow {
  double mass = 0.0;
  double norm_difference = 0.0;       // sup_n in the <.|.>_0 geometry
  double euclidean_difference = 0.0;  // sup_n plain 2-norm, for reference
  double bound = 0.0;                 // sup_n pi m^2 max(1/(k^2 w), 1/(k (k + w)))
};

struct MasslessLimitReport {
  SignatureOperator limit;
  std::vector<MasslessLimitRow> table;
};

/// Throws std::invalid_argument unless masses are positive and strictly decreasing,
/// std::domain_error if the basis has a zero mode.
MasslessLimitReport massless_limit(const SpectralBasis& basis, std::span<const double> masses);

/// <a|b>_0 = i sigma(a, S_0 b).
std::complex<double> scalar_product_0(const CauchyDatum& a, const CauchyDatum& b, const SignatureOperator& s0,
                                      const SpectralBasis& basis);

/// Blockwise inverse of S_0 (equal to S_0 / pi^2). Throws std::domain_error on a singular block.
SignatureOperator riesz_inverse(const SignatureOperator& s0);

struct RieszConsistency {
  std::complex<double> symplectic;     // sigma_0(a, b)
  std::complex<double> riesz_pairing;  // <a | S_0^{-1} b>_0
  std::complex<double> ratio;          // symplectic / riesz_pairing (-i with these conventions)
};

RieszConsistency riesz_consistency(const CauchyDatum& a, const CauchyDatum& b, const SignatureOperator& s0,
                                   const SpectralBasis& basis);

struct SignatureSpectrum {
  Eigen::VectorXcd eigenvalues;  // sorted by real part
  int count_minus = 0;           // eigenvalues within tol of -pi
  int count_plus = 0;            // eigenvalues within tol of +pi
  double max_eigenvalue_deviation = 0.0;
  /// max over positive-frequency data (1, w_n) v_n of |(S + pi) x| / |x|, and likewise
  /// (S - pi) on (1, -w_n) v_n.
  double max_eigenvector_residual = 0.0;
  /// Largest distance of a computed eigenvector from the span predicted for its eigenvalue.
  double max_eigenspace_distance = 0.0;
};

/// Assembles S on stacked field values and diagonalises it with a general eigensolver.
SignatureSpectrum assembled_spectrum(const SignatureOperator& op, const SpectralBasis& basis, double tol = 1e-10);

}  // namespace kgsig
