#include "kgsig/symplectic.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "kgsig/quadrature.hpp"

namespace kgsig {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

std::complex<double> symplectic(const CauchyDatum& a, const CauchyDatum& b, const SpatialGrid& grid) {
  if (a.size() != grid.num_points || b.size() != grid.num_points || a.pi.size() != a.phi.size() ||
      b.pi.size() != b.phi.size()) {
    throw std::invalid_argument(fmt::format("symplectic: data of length {} and {} on a grid of {} points", a.size(),
                                            b.size(), grid.num_points));
  }
  return kI * grid.spacing * (a.pi.dot(b.phi) + a.phi.dot(b.pi));
}

std::complex<double> symplectic(const ModeDatum& a, const ModeDatum& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("symplectic: mode data of different sizes");
  }
  return kI * (a.pi.dot(b.phi) + a.phi.dot(b.pi));
}

std::complex<double> gm_form(const SpacetimeTestFunction& f, const SpacetimeTestFunction& g, double mass,
                             const SpectralBasis& basis) {
  const TimeGrid& tf = f.time();
  const TimeGrid& tg = g.time();
  if (tf.count != tg.count || tf.dt != tg.dt || tf.t_min != tg.t_min) {
    throw std::invalid_argument("gm_form: test functions live on different time windows");
  }
  const SpacetimeField gg = causal_field(g, mass, basis);
  const auto q = composite_simpson_weights(tf.count, tf.dt);
  std::vector<std::complex<double>> terms(tf.count);
  for (int j = 0; j < tf.count; ++j) {
    terms[j] = q[j] * basis.spacing() * f.values()[j].dot(gg.values[j]);
  }
  return pairwise_sum(terms);
}

}  // namespace kgsig
