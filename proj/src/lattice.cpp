#include "kgsig/lattice.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace kgsig {

SpatialGrid build_grid(int num_points, double length) {
  if (num_points < 2) {
    throw std::invalid_argument(fmt::format("grid needs at least 2 points, got {}", num_points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument(fmt::format("grid length must be positive, got {}", length));
  }
  return {num_points, length, length / (num_points + 1)};
}

Eigen::MatrixXd laplacian(const SpatialGrid& grid) {
  const int n = grid.num_points;
  const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    op(i, i) = 2.0 * inv_h2;
    if (i + 1 < n) {
      op(i, i + 1) = -inv_h2;
      op(i + 1, i) = -inv_h2;
    }
  }
  return op;
}

SpectralBasis::SpectralBasis(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors, double spacing)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)), spacing_(spacing) {
  if (eigenvectors_.rows() != eigenvalues_.size() || eigenvectors_.cols() != eigenvalues_.size()) {
    throw std::invalid_argument("spectral basis: eigenvector matrix must be square and match eigenvalues");
  }
  if (!(spacing_ > 0.0)) {
    throw std::invalid_argument("spectral basis: spacing must be positive");
  }
}

Eigen::VectorXcd SpectralBasis::to_modes(const Eigen::VectorXcd& field) const {
  if (field.size() != size()) {
    throw std::invalid_argument(fmt::format("field of length {} does not match basis of size {}", field.size(), size()));
  }
  return spacing_ * (eigenvectors_.transpose().cast<std::complex<double>>() * field);
}

Eigen::VectorXcd SpectralBasis::to_field(const Eigen::VectorXcd& coefficients) const {
  if (coefficients.size() != size()) {
    throw std::invalid_argument(
        fmt::format("coefficient vector of length {} does not match basis of size {}", coefficients.size(), size()));
  }
  return eigenvectors_.cast<std::complex<double>>() * coefficients;
}

SpectralBasis spectral_decompose(const Eigen::MatrixXd& op, double spacing) {
  if (op.rows() != op.cols() || op.rows() == 0) {
    throw std::invalid_argument("spectral_decompose: operator must be square and non-empty");
  }
  const double scale = std::max(op.cwiseAbs().maxCoeff(), 1e-300);
  if ((op - op.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("spectral_decompose: operator is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral_decompose: eigensolver failed");
  }
  Eigen::VectorXd values = solver.eigenvalues();
  for (int n = 0; n < values.size(); ++n) {
    if (!(values(n) > 0.0)) {
      throw std::domain_error(fmt::format(
          "spectral_decompose: eigenvalue {} = {} is not positive (zero mode; check the boundary treatment)", n,
          values(n)));
    }
  }
  // Euclidean-orthonormal -> h-orthonormal, then fix signs.
  Eigen::MatrixXd vectors = solver.eigenvectors() / std::sqrt(spacing);
  for (int n = 0; n < vectors.cols(); ++n) {
    const double cutoff = 1e-8 * vectors.col(n).cwiseAbs().maxCoeff();
    for (int i = 0; i < vectors.rows(); ++i) {
      if (std::abs(vectors(i, n)) > cutoff) {
        if (vectors(i, n) < 0.0) vectors.col(n) *= -1.0;
        break;
      }
    }
  }
  return SpectralBasis(std::move(values), std::move(vectors), spacing);
}

double omega(double lambda, double mass) {
  if (lambda < 0.0 || mass < 0.0) {
    throw std::invalid_argument(fmt::format("omega: lambda = {} and m = {} must be nonnegative", lambda, mass));
  }
  const double w2 = lambda + mass * mass;
  if (!(w2 > 0.0)) {
    throw std::domain_error("omega: zero frequency (lambda = m = 0)");
  }
  return std::sqrt(w2);
}

}  // namespace kgsig
