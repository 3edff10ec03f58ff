#include "kgsig/mass_family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "kgsig/errors.hpp"

namespace kgsig {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
constexpr int kReseedInterval = 64;
constexpr int kChunk = 4096;

// Gauss-Legendre weight times m times the family amplitude, per mass node.
std::vector<double> p_coefficients(const MassFamily& family) {
  const auto& rule = family.rule();
  std::vector<double> c(rule.nodes.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double m = rule.nodes[j];
    c[j] = rule.weights[j] * m * family.amplitude(m);
  }
  return c;
}

// int over [t_start, t_start + intervals * step] of h sum_x conj(p a) (p b), composite Simpson.
std::complex<double> segment_integral(const MassFamily& a, const MassFamily& b, double t_start, int intervals,
                                      double step) {
  const int count = intervals + 1;
  const auto q = composite_simpson_weights(count, step);
  const SpectralBasis& basis = a.basis();
  const Eigen::MatrixXcd v = basis.eigenvectors().cast<std::complex<double>>();
  std::vector<std::complex<double>> terms(count);
  for (int k0 = 0; k0 < count; k0 += kChunk) {
    const int len = std::min(kChunk, count - k0);
    const double t0 = t_start + k0 * step;
    const Eigen::MatrixXcd pa = integrate_p_modes(a, t0, step, len);
    const Eigen::MatrixXcd pb = integrate_p_modes(b, t0, step, len);
    for (int k = 0; k < len; ++k) {
      const Eigen::VectorXcd fa = v * pa.row(k).transpose();
      const Eigen::VectorXcd fb = v * pb.row(k).transpose();
      terms[k0 + k] = q[k0 + k] * basis.spacing() * fa.dot(fb);
    }
  }
  return pairwise_sum(terms);
}

std::complex<double> window_integral(const MassFamily& a, const MassFamily& b, double lo, double hi, double dt) {
  int intervals = std::max(2, static_cast<int>(std::ceil((hi - lo) / dt - 1e-9)));
  if (intervals % 2 != 0) ++intervals;
  return segment_integral(a, b, lo, intervals, (hi - lo) / intervals);
}

}  // namespace

MassInterval::MassInterval(double lower, double upper) : lower_(lower), upper_(upper) {
  if (!(lower > 0.0)) {
    throw ConfigError(fmt::format("mass interval must satisfy 0 ∉ Ī (need m_L > 0, got m_L = {})", lower));
  }
  if (!(upper > lower)) {
    throw ConfigError(fmt::format("mass interval needs m_R > m_L (got m_L = {}, m_R = {})", lower, upper));
  }
}

MassWeight::MassWeight(double center, double half_width, int node_count, double amplitude)
    : center_(center), half_width_(half_width), node_count_(node_count), amplitude_(amplitude) {
  if (!(half_width > 0.0)) throw std::invalid_argument("mass weight half width must be positive");
  if (node_count < 2) throw std::invalid_argument("mass weight needs at least 2 quadrature nodes");
}

double MassWeight::operator()(double mass) const { return amplitude_ * bump(mass, center_, half_width_); }

MassFamily::MassFamily(std::shared_ptr<const SpectralBasis> basis, CauchyDatum base, MassWeight weight,
                       MassInterval interval, int mass_power)
    : basis_(std::move(basis)),
      base_(std::move(base)),
      weight_(weight),
      interval_(interval),
      mass_power_(mass_power),
      rule_(weight_.rule()) {
  if (!basis_) throw std::invalid_argument("mass family needs a spectral basis");
  if (!interval_.encloses(weight_.support_lower(), weight_.support_upper())) {
    throw ConfigError(fmt::format("mass weight support [{}, {}] is not strictly inside I = ({}, {})",
                                  weight_.support_lower(), weight_.support_upper(), interval_.lower(),
                                  interval_.upper()));
  }
  base_modes_ = to_modes(base_, *basis_);
}

double MassFamily::amplitude(double mass) const { return std::pow(mass, mass_power_) * weight_(mass); }

CauchyDatum MassFamily::datum_at(double mass, double t) const {
  ModeDatum d = propagate(base_modes_, t, mass, *basis_);
  const double a = amplitude(mass);
  d.phi *= a;
  d.pi *= a;
  return to_field(d, *basis_);
}

MassFamily make_family(const CauchyDatum& datum, const MassWeight& weight, const MassInterval& interval,
                       std::shared_ptr<const SpectralBasis> basis) {
  return MassFamily(std::move(basis), datum, weight, interval, 0);
}

MassFamily apply_T(const MassFamily& family) {
  return MassFamily(family.basis_ptr(), family.base(), family.weight(), family.interval(),
                    family.mass_power() + 1);
}

Eigen::VectorXcd integrate_p(const MassFamily& family, double t) {
  const auto& rule = family.rule();
  const auto c = p_coefficients(family);
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(family.basis().size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0.0) continue;
    acc += c[j] * propagate(family.base_modes(), t, rule.nodes[j], family.basis()).phi;
  }
  return family.basis().to_field(acc);
}

void oscillatory_sums(std::span<const double> w, std::span<const double> c, double t0, double step,
                      std::span<double> cos_out, std::span<double> sin_out) {
  const std::size_t count = cos_out.size();
  const std::size_t nodes = w.size();
  std::vector<std::complex<double>> z(nodes), rot(nodes);
  std::vector<double> c_over_w(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    rot[j] = std::polar(1.0, w[j] * step);
    c_over_w[j] = c[j] / w[j];
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (k % kReseedInterval == 0) {
      const double t = t0 + static_cast<double>(k) * step;
      for (std::size_t j = 0; j < nodes; ++j) z[j] = std::polar(1.0, w[j] * t);
    }
    double sc = 0.0, ss = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
      sc += c[j] * z[j].real();
      ss += c_over_w[j] * z[j].imag();
      z[j] *= rot[j];
    }
    cos_out[k] = sc;
    sin_out[k] = ss;
  }
}

Eigen::MatrixXcd integrate_p_modes(const MassFamily& family, double t0, double step, int count) {
  const auto& rule = family.rule();
  const auto c = p_coefficients(family);
  const SpectralBasis& basis = family.basis();
  const ModeDatum& base = family.base_modes();
  Eigen::MatrixXcd out(count, basis.size());
  std::vector<double> w(c.size()), cs(count), sn(count);
  for (int n = 0; n < basis.size(); ++n) {
    if (base.phi(n) == 0.0 && base.pi(n) == 0.0) {
      out.col(n).setZero();
      continue;
    }
    for (std::size_t j = 0; j < c.size(); ++j) w[j] = omega(basis.eigenvalue(n), rule.nodes[j]);
    oscillatory_sums(w, c, t0, step, cs, sn);
    for (int k = 0; k < count; ++k) out(k, n) = cs[k] * base.phi(n) - kI * sn[k] * base.pi(n);
  }
  return out;
}

SpacetimeInnerReport spacetime_inner(const MassFamily& a, const MassFamily& b, const WindowOptions& options) {
  if (a.basis_ptr() != b.basis_ptr() &&
      (a.basis().size() != b.basis().size() || a.basis().spacing() != b.basis().spacing())) {
    throw std::invalid_argument("spacetime_inner: families live on different grids");
  }
  if (!(options.dt > 0.0) || !(options.initial_half_width > 0.0) || !(options.tol > 0.0)) {
    throw std::invalid_argument("spacetime_inner: dt, initial window and tol must be positive");
  }
  SpacetimeInnerReport report;
  double half = options.initial_half_width;
  report.value = window_integral(a, b, -half, half, options.dt);
  while (true) {
    if (2.0 * half > options.max_half_width) {
      throw ConvergenceError(fmt::format(
          "spacetime scalar product did not converge: increment {:.3e} > tol {:.3e} at T = {} (ceiling {}); "
          "mass oscillation decay too slow (m_L too small or weight too narrow?)",
          report.last_increment, options.tol, half, options.max_half_width));
    }
    const std::complex<double> inc = window_integral(a, b, -2.0 * half, -half, options.dt) +
                                     window_integral(a, b, half, 2.0 * half, options.dt);
    report.value += inc;
    half *= 2.0;
    report.last_increment = std::abs(inc);
    report.history.push_back({half, report.last_increment});
    if (report.last_increment <= options.tol) break;
  }
  report.half_width = half;
  return report;
}

}  // namespace kgsig
