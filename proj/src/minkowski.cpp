#include "kgsig/minkowski.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "kgsig/signature.hpp"

namespace kgsig::minkowski {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

void require_same_modes(const ModeSuperposition& a, const ModeSuperposition& b) {
  if (a.dimension() != b.dimension() || a.mass() != b.mass() || a.modes().size() != b.modes().size()) {
    throw std::invalid_argument("mode superpositions live on different mode sets");
  }
  for (std::size_t i = 0; i < a.modes().size(); ++i) {
    if (a.modes()[i].momentum != b.modes()[i].momentum || a.modes()[i].weight != b.modes()[i].weight) {
      throw std::invalid_argument("mode superpositions live on different mode sets");
    }
  }
}

}  // namespace

ModeSuperposition::ModeSuperposition(int dimension, double mass, std::vector<Mode> modes)
    : dimension_(dimension), mass_(mass), modes_(std::move(modes)) {
  if (dimension != 1 && dimension != 3) throw std::invalid_argument("dimension must be 1 or 3");
  if (!(mass >= 0.0)) throw std::invalid_argument("mass must be non-negative");
  if (dimension == 1) {
    for (auto& m : modes_) m.momentum.tail<2>().setZero();
  }
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (!(modes_[i].weight > 0.0)) throw std::invalid_argument(fmt::format("mode {} has non-positive weight", i));
    if (!(omega(static_cast<int>(i)) > 0.0)) throw std::invalid_argument(fmt::format("mode {} has zero frequency", i));
    for (std::size_t j = 0; j < i; ++j) {
      if (modes_[i].momentum == modes_[j].momentum) {
        throw std::invalid_argument(fmt::format("modes {} and {} share a momentum", j, i));
      }
    }
  }
}

double ModeSuperposition::momentum_norm(int i) const { return modes_.at(i).momentum.norm(); }

double ModeSuperposition::omega(int i) const {
  const double k = momentum_norm(i);
  return std::sqrt(k * k + mass_ * mass_);
}

ModeSuperposition ModeSuperposition::with_amplitudes(const std::vector<std::complex<double>>& plus,
                                                     const std::vector<std::complex<double>>& minus) const {
  if (plus.size() != modes_.size() || minus.size() != modes_.size()) {
    throw std::invalid_argument("with_amplitudes: amplitude count mismatch");
  }
  std::vector<Mode> out = modes_;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].a_plus = plus[i];
    out[i].a_minus = minus[i];
  }
  return ModeSuperposition(dimension_, mass_, std::move(out));
}

std::complex<double> symplectic(const ModeSuperposition& a, const ModeSuperposition& b) {
  require_same_modes(a, b);
  std::complex<double> s{0.0, 0.0};
  for (std::size_t i = 0; i < a.modes().size(); ++i) {
    const auto& x = a.modes()[i];
    const auto& y = b.modes()[i];
    const double w = a.omega(static_cast<int>(i));
    s += x.weight * kI / (8.0 * kPi * kPi * w) * (std::conj(x.a_plus) * y.a_plus - std::conj(x.a_minus) * y.a_minus);
  }
  return s;
}

std::complex<double> scalar_product(const ModeSuperposition& a, const ModeSuperposition& b) {
  require_same_modes(a, b);
  std::complex<double> s{0.0, 0.0};
  for (std::size_t i = 0; i < a.modes().size(); ++i) {
    const auto& x = a.modes()[i];
    const auto& y = b.modes()[i];
    const double w = a.omega(static_cast<int>(i));
    s += x.weight / (8.0 * kPi * w) * (std::conj(x.a_plus) * y.a_plus + std::conj(x.a_minus) * y.a_minus);
  }
  return s;
}

ModeSuperposition signature_action(const ModeSuperposition& a) {
  std::vector<std::complex<double>> plus, minus;
  for (const auto& m : a.modes()) {
    plus.push_back(-kPi * m.a_plus);
    minus.push_back(kPi * m.a_minus);
  }
  return a.with_amplitudes(plus, minus);
}

Eigen::Matrix2d forward_transform_matrix(double omega) {
  Eigen::Matrix2d f;
  f << 1.0 / omega, -1.0 / omega, 1.0, 1.0;
  return f / (4.0 * kPi);
}

Eigen::Matrix2d inverse_transform_matrix(double omega) {
  Eigen::Matrix2d f;
  f << omega, 1.0, -omega, 1.0;
  return 2.0 * kPi * f;
}

std::vector<CauchyPair> cauchy_transform(const ModeSuperposition& a) {
  std::vector<CauchyPair> out;
  out.reserve(a.modes().size());
  for (std::size_t i = 0; i < a.modes().size(); ++i) {
    const Eigen::Matrix2cd f = forward_transform_matrix(a.omega(static_cast<int>(i))).cast<std::complex<double>>();
    const Eigen::Vector2cd v = f * Eigen::Vector2cd(a.modes()[i].a_plus, a.modes()[i].a_minus);
    out.push_back({v(0), v(1)});
  }
  return out;
}

ModeSuperposition inverse_cauchy_transform(const std::vector<CauchyPair>& data, const ModeSuperposition& shape) {
  if (data.size() != shape.modes().size()) throw std::invalid_argument("inverse_cauchy_transform: size mismatch");
  std::vector<std::complex<double>> plus, minus;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Eigen::Matrix2cd g = inverse_transform_matrix(shape.omega(static_cast<int>(i))).cast<std::complex<double>>();
    const Eigen::Vector2cd v = g * Eigen::Vector2cd(data[i].phi, data[i].pi);
    plus.push_back(v(0));
    minus.push_back(v(1));
  }
  return shape.with_amplitudes(plus, minus);
}

Eigen::Matrix2d cauchy_signature_block(double omega) {
  Eigen::Matrix2d b;
  b << 0.0, -kPi / omega, -kPi * omega, 0.0;
  return b;
}

Eigen::Matrix2d cauchy_signature_block_via_amplitudes(double omega) {
  const Eigen::Vector2d diag(-kPi, kPi);
  return forward_transform_matrix(omega) * diag.asDiagonal() * inverse_transform_matrix(omega);
}

CrossCheckReport cross_check_lattice(double mass, const SpectralBasis& basis) {
  const SignatureOperator lattice = signature_analytic(mass, basis);
  CrossCheckReport report;
  for (int n = 0; n < basis.size(); ++n) {
    CrossCheckRow row;
    row.lambda = basis.eigenvalue(n);
    const double k = std::sqrt(row.lambda);
    row.omega = std::sqrt(k * k + mass * mass);
    const Eigen::Matrix2d& s = lattice.block(n);
    row.closed_form_deviation = (s - cauchy_signature_block(row.omega)).cwiseAbs().maxCoeff();
    row.transform_deviation =
        (s - cauchy_signature_block_via_amplitudes(row.omega)).cwiseAbs().maxCoeff() / s.cwiseAbs().maxCoeff();
    Eigen::EigenSolver<Eigen::Matrix2d> es(s);
    std::array<double, 2> ev{es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
    std::sort(ev.begin(), ev.end());
    row.eigen_deviation = std::max({std::abs(ev[0] + kPi), std::abs(ev[1] - kPi),
                                    std::abs(es.eigenvalues()(0).imag()), std::abs(es.eigenvalues()(1).imag())}) /
                          kPi;
    report.max_closed_form_deviation = std::max(report.max_closed_form_deviation, row.closed_form_deviation);
    report.max_transform_deviation = std::max(report.max_transform_deviation, row.transform_deviation);
    report.max_eigen_deviation = std::max(report.max_eigen_deviation, row.eigen_deviation);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace kgsig::minkowski
