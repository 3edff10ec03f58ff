#pragma once

#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "kgsig/lattice.hpp"

namespace kgsig {

/// Cauchy data (phi, pi) on the spatial grid, with pi = i d/dt phi.
struct CauchyDatum {
  Eigen::VectorXcd phi;
  Eigen::VectorXcd pi;

  static CauchyDatum zero(int n) { return {Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)}; }
  int size() const { return static_cast<int>(phi.size()); }
};

/// The same pair expressed in mode coefficients of a SpectralBasis.
struct ModeDatum {
  Eigen::VectorXcd phi;
  Eigen::VectorXcd pi;

  static ModeDatum zero(int n) { return {Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)}; }
  int size() const { return static_cast<int>(phi.size()); }
};

ModeDatum to_modes(const CauchyDatum& datum, const SpectralBasis& basis);
CauchyDatum to_field(const ModeDatum& modes, const SpectralBasis& basis);

/// Per-mode block of exp(-i t H_m): [[cos wt, -i sin(wt)/w], [-i w sin wt, cos wt]].
Eigen::Matrix2cd propagator_block(double omega, double t);

/// Exact spectral evolution of Cauchy data by time t at mass m.
/// Throws std::domain_error if some mode has zero frequency.
CauchyDatum propagate(const CauchyDatum& datum, double t, double mass, const SpectralBasis& basis);
ModeDatum propagate(const ModeDatum& datum, double t, double mass, const SpectralBasis& basis);

/// Uniform time nodes t_j = t_min + j dt, j = 0..count-1.
struct TimeGrid {
  double t_min = 0.0;
  double dt = 0.0;
  int count = 0;

  double node(int j) const { return t_min + j * dt; }
  double t_max() const { return node(count - 1); }

  /// Nodes covering [-half_width, half_width] with an even number of intervals;
  /// dt is shrunk if needed so that the end points are hit exactly.
  static TimeGrid symmetric(double half_width, double dt);
};

/// Spacetime field sampled on a time grid: values[j] is the spatial field at t_j.
struct SpacetimeField {
  TimeGrid time;
  std::vector<Eigen::VectorXcd> values;
};

/// Test function on a finite time window; vanishes at both window end nodes.
class SpacetimeTestFunction {
 public:
  /// Throws std::invalid_argument if the end nodes are nonzero, the number of
  /// samples does not match the grid, or the fields have inconsistent lengths.
  SpacetimeTestFunction(TimeGrid time, std::vector<Eigen::VectorXcd> values);

  /// profile(t) * spatial, sampled on the grid.
  static SpacetimeTestFunction separable(const TimeGrid& time, const std::function<double(double)>& profile,
                                         const Eigen::VectorXcd& spatial);

  const TimeGrid& time() const { return time_; }
  const std::vector<Eigen::VectorXcd>& values() const { return values_; }
  int spatial_size() const { return static_cast<int>(values_.front().size()); }

  /// True at nodes where the sample is nonzero.
  std::vector<bool> support() const;

  SpacetimeTestFunction scaled(std::complex<double> factor) const;
  SpacetimeTestFunction reflected() const;  // t -> t_min + t_max - t

 private:
  TimeGrid time_;
  std::vector<Eigen::VectorXcd> values_;
};

/// Retarded solution (S^ f)(t) = int_{t' <= t} sin(K(t - t'))/K f(t') dt', evaluated
/// mode-wise at every window node with running Simpson quadrature.
SpacetimeField retarded_green(const SpacetimeTestFunction& f, double mass, const SpectralBasis& basis);

/// Advanced solution, supported towards decreasing t.
SpacetimeField advanced_green(const SpacetimeTestFunction& f, double mass, const SpectralBasis& basis);

/// G_m f = S^ f - S_v f on the window nodes.
SpacetimeField causal_field(const SpacetimeTestFunction& f, double mass, const SpectralBasis& basis);

/// Cauchy data of G_m f at t = 0 (full-window quadrature).
CauchyDatum causal_fundamental(const SpacetimeTestFunction& f, double mass, const SpectralBasis& basis);

/// Discrete Klein-Gordon residual (D_tt - Delta_N + m^2) u - f on interior nodes,
/// using the stencil matrix and central differences (independent of the spectral route).
/// Returns the max-norm of the residual over interior nodes.
double kg_residual(const SpacetimeField& u, const SpacetimeTestFunction* source, double mass,
                   const SpatialGrid& grid);

/// Bump exp(-1/(1 - s^2)), s = (t - center) / half_width, zero for |s| >= 1.
double bump(double t, double center, double half_width);

/// Real separable test function bump(t; center, half_width) * spatial, kept as a
/// continuous description so that it can be sampled on grids of different resolution.
struct RandomProfile {
  double center = 0.0;
  double half_width = 0.0;
  Eigen::VectorXcd spatial;

  SpacetimeTestFunction sample(const TimeGrid& time) const;
};

/// Time bump of random width (0.15 to 0.30 of the window) and position inside
/// [window_lower, window_upper], times a smooth random real profile built from the lowest modes.
RandomProfile random_profile(std::mt19937_64& rng, const SpectralBasis& basis, double window_lower,
                             double window_upper, int max_mode = 8);

/// Random real test function: a time bump placed inside the window times a
/// smooth random spatial profile built from the lowest modes.
SpacetimeTestFunction random_real_test_function(std::mt19937_64& rng, const SpectralBasis& basis,
                                                const TimeGrid& time, int max_mode = 8);

}  // namespace kgsig
