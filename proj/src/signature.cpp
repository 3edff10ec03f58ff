#include "kgsig/signature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "kgsig/errors.hpp"
#include "kgsig/symplectic.hpp"

namespace kgsig {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

void require_same_size(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(fmt::format("{}: size mismatch ({} vs {})", what, a, b));
}

struct ModeSums {
  double cc = 0.0;
  double cs = 0.0;
  double ss = 0.0;
};

// Simpson integrals of C^2, C S, S^2 over [lo, hi] for one mode.
ModeSums mode_window(std::span<const double> w, std::span<const double> c, double lo, double hi, double dt) {
  int intervals = std::max(2, static_cast<int>(std::ceil((hi - lo) / dt - 1e-9)));
  if (intervals % 2 != 0) ++intervals;
  const double step = (hi - lo) / intervals;
  const int count = intervals + 1;
  const auto q = composite_simpson_weights(count, step);
  std::vector<double> cs(count), sn(count);
  oscillatory_sums(w, c, lo, step, cs, sn);
  std::vector<double> a(count), b(count), d(count);
  for (int k = 0; k < count; ++k) {
    a[k] = q[k] * cs[k] * cs[k];
    b[k] = q[k] * cs[k] * sn[k];
    d[k] = q[k] * sn[k] * sn[k];
  }
  return {pairwise_sum(a), pairwise_sum(b), pairwise_sum(d)};
}

}  // namespace

ModeBlockOperator::ModeBlockOperator(std::vector<Eigen::Matrix2cd> blocks) : blocks_(std::move(blocks)) {}

ModeBlockOperator ModeBlockOperator::identity(int modes) {
  return ModeBlockOperator(std::vector<Eigen::Matrix2cd>(modes, Eigen::Matrix2cd::Identity()));
}

ModeDatum ModeBlockOperator::apply(const ModeDatum& x) const {
  require_same_size(x.size(), size(), "ModeBlockOperator::apply");
  ModeDatum out = ModeDatum::zero(size());
  for (int n = 0; n < size(); ++n) {
    const auto& b = blocks_[n];
    out.phi(n) = b(0, 0) * x.phi(n) + b(0, 1) * x.pi(n);
    out.pi(n) = b(1, 0) * x.phi(n) + b(1, 1) * x.pi(n);
  }
  return out;
}

CauchyDatum ModeBlockOperator::apply(const CauchyDatum& x, const SpectralBasis& basis) const {
  return to_field(apply(to_modes(x, basis)), basis);
}

ModeBlockOperator ModeBlockOperator::operator*(const ModeBlockOperator& rhs) const {
  require_same_size(size(), rhs.size(), "ModeBlockOperator product");
  std::vector<Eigen::Matrix2cd> out(size());
  for (int n = 0; n < size(); ++n) out[n] = blocks_[n] * rhs.blocks_[n];
  return ModeBlockOperator(std::move(out));
}

ModeBlockOperator ModeBlockOperator::operator+(const ModeBlockOperator& rhs) const {
  require_same_size(size(), rhs.size(), "ModeBlockOperator sum");
  std::vector<Eigen::Matrix2cd> out(size());
  for (int n = 0; n < size(); ++n) out[n] = blocks_[n] + rhs.blocks_[n];
  return ModeBlockOperator(std::move(out));
}

ModeBlockOperator ModeBlockOperator::operator-(const ModeBlockOperator& rhs) const {
  require_same_size(size(), rhs.size(), "ModeBlockOperator difference");
  std::vector<Eigen::Matrix2cd> out(size());
  for (int n = 0; n < size(); ++n) out[n] = blocks_[n] - rhs.blocks_[n];
  return ModeBlockOperator(std::move(out));
}

ModeBlockOperator ModeBlockOperator::scaled(std::complex<double> factor) const {
  std::vector<Eigen::Matrix2cd> out(size());
  for (int n = 0; n < size(); ++n) out[n] = factor * blocks_[n];
  return ModeBlockOperator(std::move(out));
}

Eigen::MatrixXcd ModeBlockOperator::mode_matrix() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * size(), 2 * size());
  for (int n = 0; n < size(); ++n) m.block<2, 2>(2 * n, 2 * n) = blocks_[n];
  return m;
}

double ModeBlockOperator::max_abs() const {
  double r = 0.0;
  for (const auto& b : blocks_) r = std::max(r, b.cwiseAbs().maxCoeff());
  return r;
}

SignatureOperator::SignatureOperator(double mass, std::vector<Eigen::Matrix2d> blocks)
    : mass_(mass), blocks_(std::move(blocks)) {}

ModeDatum SignatureOperator::apply(const ModeDatum& x) const { return as_block_operator().apply(x); }

CauchyDatum SignatureOperator::apply(const CauchyDatum& x, const SpectralBasis& basis) const {
  return to_field(apply(to_modes(x, basis)), basis);
}

ModeBlockOperator SignatureOperator::as_block_operator() const {
  std::vector<Eigen::Matrix2cd> out(size());
  for (int n = 0; n < size(); ++n) out[n] = blocks_[n].cast<std::complex<double>>();
  return ModeBlockOperator(std::move(out));
}

Eigen::MatrixXd SignatureOperator::mode_matrix() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * size(), 2 * size());
  for (int n = 0; n < size(); ++n) m.block<2, 2>(2 * n, 2 * n) = blocks_[n];
  return m;
}

Eigen::MatrixXd SignatureOperator::field_matrix(const SpectralBasis& basis) const {
  require_same_size(basis.size(), size(), "SignatureOperator::field_matrix");
  const int n = size();
  const Eigen::MatrixXd& v = basis.eigenvectors();
  const Eigen::MatrixXd proj = basis.spacing() * v.transpose();
  Eigen::MatrixXd f(2 * n, 2 * n);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      Eigen::VectorXd d(n);
      for (int k = 0; k < n; ++k) d(k) = blocks_[k](r, c);
      f.block(r * n, c * n, n, n) = v * d.asDiagonal() * proj;
    }
  }
  return f;
}

Eigen::Matrix2d signature_block(double omega) {
  Eigen::Matrix2d b;
  b << 0.0, -kPi / omega, -kPi * omega, 0.0;
  return b;
}

SignatureOperator signature_analytic(double mass, const SpectralBasis& basis) {
  if (!(mass >= 0.0)) throw std::invalid_argument("signature_analytic: mass must be non-negative");
  std::vector<Eigen::Matrix2d> blocks(basis.size());
  for (int n = 0; n < basis.size(); ++n) blocks[n] = signature_block(omega(basis.eigenvalue(n), mass));
  return SignatureOperator(mass, std::move(blocks));
}

std::complex<double> scalar_product_m(const CauchyDatum& a, const CauchyDatum& b, const SignatureOperator& op,
                                      const SpectralBasis& basis) {
  return kI * symplectic(to_modes(a, basis), op.apply(to_modes(b, basis)));
}

std::complex<double> mass_decomposition_rhs(const MassFamily& a, const MassFamily& b, int nodes) {
  if (a.basis().size() != b.basis().size()) throw std::invalid_argument("mass_decomposition_rhs: grid mismatch");
  const double lo = std::max(a.weight().support_lower(), b.weight().support_lower());
  const double hi = std::min(a.weight().support_upper(), b.weight().support_upper());
  if (!(hi > lo)) return {0.0, 0.0};
  const auto rule = gauss_legendre(nodes, lo, hi);
  const SpectralBasis& basis = a.basis();
  std::vector<std::complex<double>> terms(rule.nodes.size());
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const double m = rule.nodes[j];
    const SignatureOperator s = signature_analytic(m, basis);
    const std::complex<double> pairing = kI * symplectic(a.base_modes(), s.apply(b.base_modes()));
    terms[j] = rule.weights[j] * m * a.amplitude(m) * b.amplitude(m) * pairing;
  }
  return pairwise_sum(terms);
}

ReconstructionReport signature_reconstruct(double mass, const SpectralBasis& basis, const MassInterval& interval,
                                           double delta, const ReconstructionOptions& options) {
  if (!(delta > 0.0)) throw ConfigError("reconstruction width delta must be positive");
  const MassWeight weight(mass, delta, options.mass_nodes);
  if (!interval.encloses(weight.support_lower(), weight.support_upper())) {
    throw ConfigError(fmt::format("reconstruction support [{}, {}] is not strictly inside I = ({}, {})",
                                  weight.support_lower(), weight.support_upper(), interval.lower(),
                                  interval.upper()));
  }
  const WindowOptions& win = options.window;
  const auto rule = weight.rule();
  const std::size_t nodes = rule.nodes.size();
  std::vector<double> c(nodes), w(nodes);
  std::vector<double> norm_terms(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double m = rule.nodes[j];
    const double wm = weight(m);
    c[j] = rule.weights[j] * m * wm;
    norm_terms[j] = rule.weights[j] * m * wm * wm;
  }
  const double norm = pairwise_sum(norm_terms);
  const SignatureOperator exact = signature_analytic(mass, basis);

  const int modes = basis.size();
  std::vector<Eigen::Matrix2d> blocks(modes);
  Eigen::MatrixXcd recovered = Eigen::MatrixXcd::Zero(2 * modes, 2 * modes);
  ReconstructionReport report{SignatureOperator(mass, {}), {}, 0.0, 0.0, 0.0, 0.0, {}, {}};
  for (int n = 0; n < modes; ++n) {
    for (std::size_t j = 0; j < nodes; ++j) w[j] = omega(basis.eigenvalue(n), rule.nodes[j]);
    double half = win.initial_half_width;
    ModeSums sums = mode_window(w, c, -half, half, win.dt);
    double last = 0.0;
    while (true) {
      if (2.0 * half > win.max_half_width) {
        throw ConvergenceError(fmt::format(
            "signature reconstruction did not converge for mode {}: increment {:.3e} > tol {:.3e} at T = {} "
            "(ceiling {})",
            n, last, win.tol, half, win.max_half_width));
      }
      const ModeSums left = mode_window(w, c, -2.0 * half, -half, win.dt);
      const ModeSums right = mode_window(w, c, half, 2.0 * half, win.dt);
      const ModeSums inc{left.cc + right.cc, left.cs + right.cs, left.ss + right.ss};
      sums.cc += inc.cc;
      sums.cs += inc.cs;
      sums.ss += inc.ss;
      half *= 2.0;
      last = std::max({std::abs(inc.cc), std::abs(inc.cs), std::abs(inc.ss)}) / norm;
      if (last <= win.tol) break;
    }
    // Gram of the unit data (1, 0) and (0, 1) in this mode, then S = -Omega M.
    Eigen::Matrix2cd gram;
    gram << sums.cc, -kI * sums.cs, kI * sums.cs, sums.ss;
    gram /= norm;
    Eigen::Matrix2cd s;
    s << -gram(1, 0), -gram(1, 1), -gram(0, 0), -gram(0, 1);
    recovered.block<2, 2>(2 * n, 2 * n) = s;
    blocks[n] = s.real();
    const double dev = (blocks[n] - exact.block(n)).cwiseAbs().maxCoeff();
    report.mode_deviation.push_back(dev);
    report.mode_half_width.push_back(half);
    report.max_deviation = std::max(report.max_deviation, dev);
    report.max_imaginary = std::max(report.max_imaginary, s.imag().cwiseAbs().maxCoeff());
    report.max_half_width = std::max(report.max_half_width, half);
    report.last_increment = std::max(report.last_increment, last);
  }
  report.op = SignatureOperator(mass, std::move(blocks));
  report.mode_matrix = std::move(recovered);
  if (options.max_deviation > 0.0 && report.max_deviation > options.max_deviation) {
    throw ConvergenceError(fmt::format("reconstructed signature deviates by {:.3e} > {:.3e}", report.max_deviation,
                                       options.max_deviation));
  }
  return report;
}

ModeBlockOperator complex_structure(const SignatureOperator& op) {
  std::vector<Eigen::Matrix2cd> out(op.size());
  for (int n = 0; n < op.size(); ++n) {
    const Eigen::Matrix2d sq = op.block(n) * op.block(n);
    const double c = sq(0, 0);
    if (!(c > 0.0) || (sq - c * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() > 1e-10 * c) {
      throw std::domain_error(fmt::format("complex_structure: block {} does not square to a positive scalar", n));
    }
    out[n] = kI * op.block(n).cast<std::complex<double>>() / std::sqrt(c);
  }
  return ModeBlockOperator(std::move(out));
}

Projectors projectors(const ModeBlockOperator& j) {
  const ModeBlockOperator sq = j * j;
  for (int n = 0; n < sq.size(); ++n) {
    if ((sq.block(n) + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
      throw std::invalid_argument(fmt::format("projectors: J^2 != -1 on mode {}", n));
    }
  }
  const ModeBlockOperator one = ModeBlockOperator::identity(j.size());
  const ModeBlockOperator ij = j.scaled(kI);
  return {(one - ij).scaled(0.5), (one + ij).scaled(0.5)};
}

double massless_block_norm(const Eigen::Matrix2d& block, double k) {
  Eigen::Matrix2d scaled;
  scaled << block(0, 0), block(0, 1) * k, block(1, 0) / k, block(1, 1);
  return Eigen::JacobiSVD<Eigen::Matrix2d>(scaled).singularValues()(0);
}

MasslessLimitReport massless_limit(const SpectralBasis& basis, std::span<const double> masses) {
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] > 0.0)) throw std::invalid_argument("massless_limit: masses must be positive");
    if (i > 0 && !(masses[i] < masses[i - 1])) {
      throw std::invalid_argument("massless_limit: masses must be strictly decreasing");
    }
  }
  SignatureOperator limit = signature_analytic(0.0, basis);
  std::vector<MasslessLimitRow> table;
  for (double m : masses) {
    const SignatureOperator s = signature_analytic(m, basis);
    MasslessLimitRow row{m, 0.0, 0.0, 0.0};
    for (int n = 0; n < basis.size(); ++n) {
      const double k = std::sqrt(basis.eigenvalue(n));
      const double w = omega(basis.eigenvalue(n), m);
      const Eigen::Matrix2d d = s.block(n) - limit.block(n);
      row.norm_difference = std::max(row.norm_difference, massless_block_norm(d, k));
      row.euclidean_difference =
          std::max(row.euclidean_difference, Eigen::JacobiSVD<Eigen::Matrix2d>(d).singularValues()(0));
      row.bound = std::max(row.bound, kPi * m * m * std::max(1.0 / (k * k * w), 1.0 / (k * (k + w))));
    }
    table.push_back(row);
  }
  return {std::move(limit), std::move(table)};
}

std::complex<double> scalar_product_0(const CauchyDatum& a, const CauchyDatum& b, const SignatureOperator& s0,
                                      const SpectralBasis& basis) {
  return scalar_product_m(a, b, s0, basis);
}

SignatureOperator riesz_inverse(const SignatureOperator& s0) {
  std::vector<Eigen::Matrix2d> out(s0.size());
  for (int n = 0; n < s0.size(); ++n) {
    const double det = s0.block(n).determinant();
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
      throw std::domain_error(fmt::format("riesz_inverse: block {} is singular", n));
    }
    out[n] = s0.block(n).inverse();
  }
  return SignatureOperator(s0.mass(), std::move(out));
}

RieszConsistency riesz_consistency(const CauchyDatum& a, const CauchyDatum& b, const SignatureOperator& s0,
                                   const SpectralBasis& basis) {
  const std::complex<double> sym = symplectic(to_modes(a, basis), to_modes(b, basis));
  const CauchyDatum inv_b = riesz_inverse(s0).apply(b, basis);
  const std::complex<double> pairing = scalar_product_0(a, inv_b, s0, basis);
  return {sym, pairing, sym / pairing};
}

SignatureSpectrum assembled_spectrum(const SignatureOperator& op, const SpectralBasis& basis, double tol) {
  const int n = basis.size();
  const Eigen::MatrixXd f = op.field_matrix(basis);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(f);
  if (solver.info() != Eigen::Success) throw std::runtime_error("assembled_spectrum: eigensolver failed");
  const Eigen::VectorXcd ev = solver.eigenvalues();
  const Eigen::MatrixXcd vecs = solver.eigenvectors();

  std::vector<int> order(ev.size());
  for (int i = 0; i < ev.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return ev(x).real() < ev(y).real(); });

  SignatureSpectrum out;
  out.eigenvalues.resize(ev.size());
  for (int i = 0; i < ev.size(); ++i) out.eigenvalues(i) = ev(order[i]);

  // Predicted eigenspaces: (1, w_n) v_n for -pi, (1, -w_n) v_n for +pi, stacked (phi, pi).
  Eigen::MatrixXd minus(2 * n, n), plus(2 * n, n);
  const Eigen::MatrixXd& v = basis.eigenvectors();
  for (int k = 0; k < n; ++k) {
    const double w = omega(basis.eigenvalue(k), op.mass());
    minus.col(k) << v.col(k), w * v.col(k);
    plus.col(k) << v.col(k), -w * v.col(k);
    const double rm = (f * minus.col(k) + kPi * minus.col(k)).norm() / minus.col(k).norm();
    const double rp = (f * plus.col(k) - kPi * plus.col(k)).norm() / plus.col(k).norm();
    out.max_eigenvector_residual = std::max({out.max_eigenvector_residual, rm, rp});
  }
  const Eigen::MatrixXcd q_minus = Eigen::HouseholderQR<Eigen::MatrixXd>(minus).householderQ() *
                                   Eigen::MatrixXd::Identity(2 * n, n);
  const Eigen::MatrixXcd q_plus = Eigen::HouseholderQR<Eigen::MatrixXd>(plus).householderQ() *
                                  Eigen::MatrixXd::Identity(2 * n, n);

  for (int i = 0; i < ev.size(); ++i) {
    const std::complex<double> lam = ev(i);
    const double dm = std::abs(lam + kPi);
    const double dp = std::abs(lam - kPi);
    out.max_eigenvalue_deviation = std::max(out.max_eigenvalue_deviation, std::min(dm, dp));
    if (dm <= tol * kPi) ++out.count_minus;
    if (dp <= tol * kPi) ++out.count_plus;
    const Eigen::VectorXcd u = vecs.col(i).normalized();
    const Eigen::MatrixXcd& q = dm < dp ? q_minus : q_plus;
    const double dist = (u - q * (q.adjoint() * u)).norm();
    out.max_eigenspace_distance = std::max(out.max_eigenspace_distance, dist);
  }
  return out;
}

}  // namespace kgsig
