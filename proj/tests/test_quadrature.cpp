#include <cmath>
#include <vector>

#include <doctest.h>

#include "kgsig/quadrature.hpp"

using namespace kgsig;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  const QuadratureRule r = gauss_legendre(5, 1.0, 3.0);
  double sum_w = 0.0, sum_p = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    sum_w += r.weights[i];
    sum_p += r.weights[i] * std::pow(r.nodes[i], 9);
  }
  CHECK(sum_w == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sum_p == doctest::Approx((std::pow(3.0, 10) - 1.0) / 10.0).epsilon(1e-13));
}

TEST_CASE("composite Simpson is exact on cubics for even and odd interval counts") {
  for (int count : {5, 6, 9, 12}) {
    const double h = 2.0 / (count - 1);
    const auto w = composite_simpson_weights(count, h);
    double s = 0.0;
    for (int i = 0; i < count; ++i) {
      const double x = i * h;
      s += w[i] * (x * x * x - 2.0 * x + 1.0);
    }
    CHECK(s == doctest::Approx(4.0 - 4.0 + 2.0).epsilon(1e-13));
  }
  const auto trap = composite_simpson_weights(2, 0.5);
  CHECK(trap[0] == doctest::Approx(0.25));
}

TEST_CASE("running Simpson integrals match the antiderivative of a cubic") {
  const int count = 11;
  const double h = 0.1;
  std::vector<std::complex<double>> f(count);
  for (int i = 0; i < count; ++i) {
    const double x = i * h;
    f[i] = {x * x * x, 2.0 * x};
  }
  const auto c = cumulative_simpson(f, h);
  for (int k = 2; k < count; ++k) {
    const double x = k * h;
    CHECK(std::abs(c[k] - std::complex<double>(std::pow(x, 4) / 4.0, x * x)) < 1e-14);
  }
}

TEST_CASE("pairwise summation is accurate on many equal terms") {
  std::vector<double> v(1 << 20, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(0.1 * (1 << 20)).epsilon(1e-15));
}
