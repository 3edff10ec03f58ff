#pragma once

#include <Eigen/Dense>

namespace kgsig {

/// Uniform interior grid on (0, L) with homogeneous Dirichlet boundary.
/// Point i (0-based) sits at x = (i + 1) h, and every point carries quadrature weight h.
struct SpatialGrid {
  int num_points = 0;
  double length = 0.0;
  double spacing = 0.0;

  double point(int i) const { return (i + 1) * spacing; }
};

SpatialGrid build_grid(int num_points, double length);

/// The positive operator -Delta_N as a dense N x N matrix (3-point stencil).
Eigen::MatrixXd laplacian(const SpatialGrid& grid);

/// Eigenpairs of a symmetric positive operator, with eigenvectors normalised
/// in the h-weighted inner product <u, v> = h sum_x conj(u) v.
///
/// Mode coefficients of a field u are c_n = <v_n, u>; the field is recovered as
/// u = sum_n c_n v_n. All downstream operators act mode-wise in this basis.
class SpectralBasis {
 public:
  SpectralBasis(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors, double spacing);

  int size() const { return static_cast<int>(eigenvalues_.size()); }
  double spacing() const { return spacing_; }
  double eigenvalue(int n) const { return eigenvalues_(n); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

  Eigen::VectorXcd to_modes(const Eigen::VectorXcd& field) const;
  Eigen::VectorXcd to_field(const Eigen::VectorXcd& coefficients) const;

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  double spacing_;
};

/// Dense symmetric eigensolve of `op`; eigenvalues ascending, eigenvectors
/// h-orthonormal with the first significant component positive.
/// Throws std::invalid_argument for non-symmetric input and std::domain_error
/// if any eigenvalue is not strictly positive.
SpectralBasis spectral_decompose(const Eigen::MatrixXd& op, double spacing);

/// Dispersion relation sqrt(lambda + m^2).
double omega(double lambda, double mass);

}  // namespace kgsig
