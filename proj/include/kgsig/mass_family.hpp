#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "kgsig/dynamics.hpp"
#include "kgsig/lattice.hpp"
#include "kgsig/quadrature.hpp"

namespace kgsig {

/// Open mass interval (m_L, m_R) whose closure excludes 0.
class MassInterval {
 public:
  /// Throws ConfigError unless 0 < m_L < m_R.
  MassInterval(double lower, double upper);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  /// True if [a, b] lies strictly inside the interval.
  bool encloses(double a, double b) const { return lower_ < a && b < upper_; }

 private:
  double lower_;
  double upper_;
};

/// Smooth bump weight w(m) = amplitude * exp(-1/(1 - s^2)), s = (m - center) / half_width,
/// with a Gauss-Legendre rule on its support [center - half_width, center + half_width].
class MassWeight {
 public:
  MassWeight(double center, double half_width, int node_count = 200, double amplitude = 1.0);

  double center() const { return center_; }
  double half_width() const { return half_width_; }
  double amplitude() const { return amplitude_; }
  int node_count() const { return node_count_; }
  double support_lower() const { return center_ - half_width_; }
  double support_upper() const { return center_ + half_width_; }

  double operator()(double mass) const;
  QuadratureRule rule() const { return gauss_legendre(node_count_, support_lower(), support_upper()); }

 private:
  double center_;
  double half_width_;
  int node_count_;
  double amplitude_;
};

/// Family m -> phi_m = m^k w(m) * (solution of mass m with fixed initial data), k = number of
/// applications of T. The Cauchy data at t = 0 is the same datum at every mass, scaled.
class MassFamily {
 public:
  MassFamily(std::shared_ptr<const SpectralBasis> basis, CauchyDatum base, MassWeight weight,
             MassInterval interval, int mass_power = 0);

  const SpectralBasis& basis() const { return *basis_; }
  const std::shared_ptr<const SpectralBasis>& basis_ptr() const { return basis_; }
  const CauchyDatum& base() const { return base_; }
  const ModeDatum& base_modes() const { return base_modes_; }
  const MassWeight& weight() const { return weight_; }
  const MassInterval& interval() const { return interval_; }
  int mass_power() const { return mass_power_; }

  /// m^k w(m).
  double amplitude(double mass) const;

  const QuadratureRule& rule() const { return rule_; }
  /// Cauchy data of phi_m at time t.
  CauchyDatum datum_at(double mass, double t) const;

 private:
  std::shared_ptr<const SpectralBasis> basis_;
  CauchyDatum base_;
  ModeDatum base_modes_;
  MassWeight weight_;
  MassInterval interval_;
  int mass_power_;
  QuadratureRule rule_;
};

/// Throws ConfigError if the weight support is not strictly inside the interval.
MassFamily make_family(const CauchyDatum& datum, const MassWeight& weight, const MassInterval& interval,
                       std::shared_ptr<const SpectralBasis> basis);

/// (T phi)_m = m phi_m.
MassFamily apply_T(const MassFamily& family);

/// (p phi)(t) = int_I phi_m(t) m dm as a spatial field (Gauss-Legendre in m).
Eigen::VectorXcd integrate_p(const MassFamily& family, double t);

/// Mode coefficients of (p phi)(t) at t_j = t0 + j step, j < count.
/// Row j holds the coefficients at t_j.
Eigen::MatrixXcd integrate_p_modes(const MassFamily& family, double t0, double step, int count);

/// For t_k = t0 + k step (k < cos_out.size()):
///   cos_out[k] = sum_j c_j cos(w_j t_k),  sin_out[k] = sum_j c_j sin(w_j t_k) / w_j.
/// Phases advance by complex rotation and are re-seeded exactly every few steps.
void oscillatory_sums(std::span<const double> frequencies, std::span<const double> coefficients, double t0,
                      double step, std::span<double> cos_out, std::span<double> sin_out);

struct WindowOptions {
  double dt = 0.05;
  double initial_half_width = 200.0;
  double tol = 1e-6;
  double max_half_width = 25600.0;
};

struct WindowStep {
  double half_width;
  double increment;
};

struct SpacetimeInnerReport {
  std::complex<double> value;
  double half_width = 0.0;
  double last_increment = 0.0;
  std::vector<WindowStep> history;
};

/// <p a | p b>_{L^2} over [-T, T] x grid, doubling T from the initial half width until
/// the added contribution is below tol. Throws ConvergenceError past max_half_width.
SpacetimeInnerReport spacetime_inner(const MassFamily& a, const MassFamily& b, const WindowOptions& options);

}  // namespace kgsig
