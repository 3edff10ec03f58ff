#pragma once

#include <complex>

#include "kgsig/dynamics.hpp"
#include "kgsig/lattice.hpp"

namespace kgsig {

/// sigma(a, b) = i h sum_x [conj(a.pi) b.phi + conj(a.phi) b.pi].
/// Conjugate-linear in the first slot; sigma(a, b) = -conj(sigma(b, a)).
std::complex<double> symplectic(const CauchyDatum& a, const CauchyDatum& b, const SpatialGrid& grid);

/// Same form on mode coefficients (the basis is h-orthonormal).
std::complex<double> symplectic(const ModeDatum& a, const ModeDatum& b);

/// G_m(f, g) = int conj(f) (G_m g) over the window, with G_m g from running quadrature.
std::complex<double> gm_form(const SpacetimeTestFunction& f, const SpacetimeTestFunction& g, double mass,
                             const SpectralBasis& basis);

}  // namespace kgsig
