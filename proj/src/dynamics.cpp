#include "kgsig/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "kgsig/quadrature.hpp"

namespace kgsig {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void check_sizes(int datum_size, const SpectralBasis& basis) {
  if (datum_size != basis.size()) {
    throw std::invalid_argument(
        fmt::format("Cauchy datum of length {} does not match basis of size {}", datum_size, basis.size()));
  }
}

std::vector<double> mode_frequencies(double mass, const SpectralBasis& basis) {
  std::vector<double> w(basis.size());
  for (int n = 0; n < basis.size(); ++n) w[n] = omega(basis.eigenvalue(n), mass);
  return w;
}

// Mode coefficients of f at every node; result[j] is an N-vector.
std::vector<Eigen::VectorXcd> source_modes(const SpacetimeTestFunction& f, const SpectralBasis& basis) {
  check_sizes(f.spatial_size(), basis);
  std::vector<Eigen::VectorXcd> out;
  out.reserve(f.values().size());
  for (const auto& v : f.values()) out.push_back(basis.to_modes(v));
  return out;
}

SpacetimeField modes_to_field(const TimeGrid& time, const std::vector<Eigen::VectorXcd>& modes,
                              const SpectralBasis& basis) {
  SpacetimeField out{time, {}};
  out.values.reserve(modes.size());
  for (const auto& c : modes) out.values.push_back(basis.to_field(c));
  return out;
}

enum class Direction { kRetarded, kAdvanced };

SpacetimeField green(const SpacetimeTestFunction& f, double mass, const SpectralBasis& basis, Direction dir) {
  const auto fm = source_modes(f, basis);
  const auto w = mode_frequencies(mass, basis);
  const TimeGrid& time = f.time();
  const int count = time.count;
  const int n_modes = basis.size();

  std::vector<Eigen::VectorXcd> u(count, Eigen::VectorXcd::Zero(n_modes));
  std::vector<std::complex<double>> gc(count), gs(count);
  for (int n = 0; n < n_modes; ++n) {
    const double wn = w[n];
    // Samples in integration order: forward for retarded, reversed for advanced.
    for (int k = 0; k < count; ++k) {
      const int j = (dir == Direction::kRetarded) ? k : count - 1 - k;
      const double t = time.node(j);
      gc[k] = std::cos(wn * t) * fm[j](n);
      gs[k] = std::sin(wn * t) * fm[j](n);
    }
    const auto c = cumulative_simpson(gc, time.dt);
    const auto s = cumulative_simpson(gs, time.dt);
    for (int k = 0; k < count; ++k) {
      const int j = (dir == Direction::kRetarded) ? k : count - 1 - k;
      const double t = time.node(j);
      if (dir == Direction::kRetarded) {
        // int_{t0}^{t} sin(w (t - t')) f(t') dt' / w
        u[j](n) = (std::sin(wn * t) * c[k] - std::cos(wn * t) * s[k]) / wn;
      } else {
        // int_{t}^{t_end} sin(w (t' - t)) f(t') dt' / w
        u[j](n) = (std::cos(wn * t) * s[k] - std::sin(wn * t) * c[k]) / wn;
      }
    }
  }
  return modes_to_field(time, u, basis);
}

}  // namespace

ModeDatum to_modes(const CauchyDatum& datum, const SpectralBasis& basis) {
  return {basis.to_modes(datum.phi), basis.to_modes(datum.pi)};
}

CauchyDatum to_field(const ModeDatum& modes, const SpectralBasis& basis) {
  return {basis.to_field(modes.phi), basis.to_field(modes.pi)};
}

Eigen::Matrix2cd propagator_block(double omega, double t) {
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  Eigen::Matrix2cd b;
  b << c, -kI * s / omega, -kI * omega * s, c;
  return b;
}

ModeDatum propagate(const ModeDatum& datum, double t, double mass, const SpectralBasis& basis) {
  check_sizes(datum.size(), basis);
  ModeDatum out = ModeDatum::zero(datum.size());
  for (int n = 0; n < datum.size(); ++n) {
    const double w = omega(basis.eigenvalue(n), mass);
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    out.phi(n) = c * datum.phi(n) - kI * (s / w) * datum.pi(n);
    out.pi(n) = -kI * (w * s) * datum.phi(n) + c * datum.pi(n);
  }
  return out;
}

CauchyDatum propagate(const CauchyDatum& datum, double t, double mass, const SpectralBasis& basis) {
  check_sizes(datum.size(), basis);
  return to_field(propagate(to_modes(datum, basis), t, mass, basis), basis);
}

TimeGrid TimeGrid::symmetric(double half_width, double dt) {
  if (!(half_width > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("TimeGrid::symmetric: half width and dt must be positive");
  }
  const int half_intervals = std::max(1, static_cast<int>(std::ceil(half_width / dt - 1e-9)));
  return {-half_width, half_width / half_intervals, 2 * half_intervals + 1};
}

SpacetimeTestFunction::SpacetimeTestFunction(TimeGrid time, std::vector<Eigen::VectorXcd> values)
    : time_(time), values_(std::move(values)) {
  if (time_.count < 3 || !(time_.dt > 0.0)) {
    throw std::invalid_argument("test function window needs at least 3 nodes and dt > 0");
  }
  if (static_cast<int>(values_.size()) != time_.count) {
    throw std::invalid_argument(
        fmt::format("test function has {} samples for {} time nodes", values_.size(), time_.count));
  }
  double sup = 0.0;
  for (const auto& v : values_) {
    if (v.size() != values_.front().size()) {
      throw std::invalid_argument("test function samples have inconsistent spatial length");
    }
    if (!v.allFinite()) throw std::invalid_argument("test function has non-finite samples");
    if (v.size() > 0) sup = std::max(sup, v.cwiseAbs().maxCoeff());
  }
  const double edge = std::max(values_.front().cwiseAbs().maxCoeff(), values_.back().cwiseAbs().maxCoeff());
  if (edge > 1e-12 * sup) {
    throw std::invalid_argument(
        "test function support reaches the window boundary; enlarge the window so the function vanishes at "
        "both end nodes");
  }
}

SpacetimeTestFunction SpacetimeTestFunction::separable(const TimeGrid& time,
                                                       const std::function<double(double)>& profile,
                                                       const Eigen::VectorXcd& spatial) {
  std::vector<Eigen::VectorXcd> values;
  values.reserve(time.count);
  for (int j = 0; j < time.count; ++j) values.push_back(profile(time.node(j)) * spatial);
  return SpacetimeTestFunction(time, std::move(values));
}

std::vector<bool> SpacetimeTestFunction::support() const {
  std::vector<bool> mask(values_.size());
  for (std::size_t j = 0; j < values_.size(); ++j) mask[j] = values_[j].cwiseAbs().maxCoeff() > 0.0;
  return mask;
}

SpacetimeTestFunction SpacetimeTestFunction::scaled(std::complex<double> factor) const {
  std::vector<Eigen::VectorXcd> v = values_;
  for (auto& x : v) x *= factor;
  return SpacetimeTestFunction(time_, std::move(v));
}

SpacetimeTestFunction SpacetimeTestFunction::reflected() const {
  std::vector<Eigen::VectorXcd> v(values_.rbegin(), values_.rend());
  return SpacetimeTestFunction(time_, std::move(v));
}

SpacetimeField retarded_green(const SpacetimeTestFunction& f, double mass, const SpectralBasis& basis) {
  return green(f, mass, basis, Direction::kRetarded);
}

SpacetimeField advanced_green(const SpacetimeTestFunction& f, double mass, const SpectralBasis& basis) {
  return green(f, mass, basis, Direction::kAdvanced);
}

SpacetimeField causal_field(const SpacetimeTestFunction& f, double mass, const SpectralBasis& basis) {
  SpacetimeField ret = retarded_green(f, mass, basis);
  const SpacetimeField adv = advanced_green(f, mass, basis);
  for (std::size_t j = 0; j < ret.values.size(); ++j) ret.values[j] -= adv.values[j];
  return ret;
}

CauchyDatum causal_fundamental(const SpacetimeTestFunction& f, double mass, const SpectralBasis& basis) {
  const auto fm = source_modes(f, basis);
  const auto w = mode_frequencies(mass, basis);
  const TimeGrid& time = f.time();
  const auto q = composite_simpson_weights(time.count, time.dt);

  ModeDatum out = ModeDatum::zero(basis.size());
  for (int n = 0; n < basis.size(); ++n) {
    std::complex<double> phi = 0.0, dphi = 0.0;
    for (int j = 0; j < time.count; ++j) {
      const double t = time.node(j);
      phi -= q[j] * std::sin(w[n] * t) / w[n] * fm[j](n);
      dphi += q[j] * std::cos(w[n] * t) * fm[j](n);
    }
    out.phi(n) = phi;
    out.pi(n) = kI * dphi;
  }
  return to_field(out, basis);
}

double kg_residual(const SpacetimeField& u, const SpacetimeTestFunction* source, double mass,
                   const SpatialGrid& grid) {
  const Eigen::MatrixXcd op = laplacian(grid).cast<std::complex<double>>();
  const TimeGrid& time = u.time;
  if (source != nullptr && (source->time().count != time.count || source->time().dt != time.dt)) {
    throw std::invalid_argument("kg_residual: source window does not match the field window");
  }
  const double inv_dt2 = 1.0 / (time.dt * time.dt);
  double worst = 0.0;
  for (int k = 1; k + 1 < time.count; ++k) {
    Eigen::VectorXcd r = (u.values[k + 1] - 2.0 * u.values[k] + u.values[k - 1]) * inv_dt2 + op * u.values[k] +
                         mass * mass * u.values[k];
    if (source != nullptr) r -= source->values()[k];
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

double bump(double t, double center, double half_width) {
  const double s = (t - center) / half_width;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

SpacetimeTestFunction RandomProfile::sample(const TimeGrid& time) const {
  return SpacetimeTestFunction::separable(
      time, [this](double t) { return bump(t, center, half_width); }, spatial);
}

RandomProfile random_profile(std::mt19937_64& rng, const SpectralBasis& basis, double window_lower,
                             double window_upper, int max_mode) {
  if (!(window_upper > window_lower)) throw std::invalid_argument("random_profile: empty window");
  const double len = window_upper - window_lower;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  RandomProfile p;
  p.half_width = len * (0.15 + 0.15 * unit(rng));
  const double margin = 0.02 * len;
  const double lo = window_lower + p.half_width + margin;
  const double hi = window_upper - p.half_width - margin;
  p.center = lo + (hi - lo) * unit(rng);

  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(basis.size());
  const int modes = std::min(max_mode, basis.size());
  for (int n = 0; n < modes; ++n) coeffs(n) = normal(rng) / (1.0 + n);
  p.spatial = basis.to_field(coeffs).real().cast<std::complex<double>>();
  return p;
}

SpacetimeTestFunction random_real_test_function(std::mt19937_64& rng, const SpectralBasis& basis,
                                                const TimeGrid& time, int max_mode) {
  return random_profile(rng, basis, time.node(0), time.t_max(), max_mode).sample(time);
}

}  // namespace kgsig
