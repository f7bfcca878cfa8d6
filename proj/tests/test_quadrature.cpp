#include <doctest.h>

#include <cmath>
#include <numeric>

#include "lrnn/problems.hpp"
#include "lrnn/quadrature.hpp"
#include "lrnn/rng.hpp"

using namespace lrnn;
using quadrature::gauss_legendre_1d;
using quadrature::QuadratureRule;
using quadrature::relative_l2_error;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("small rules match closed forms") {
  {
    const auto [x, w] = gauss_legendre_1d(1);
    CHECK(x[0] == 0.0);
    CHECK(w[0] == doctest::Approx(2.0).epsilon(1e-15));
  }
  {
    const auto [x, w] = gauss_legendre_1d(2);
    CHECK(x[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(x[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-15));
  }
  {
    // n = 3 integrates x^4 to 2/5 exactly
    const auto [x, w] = gauss_legendre_1d(3);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += w[i] * std::pow(x[i], 4);
    CHECK(std::abs(acc - 0.4) <= 1e-14);
  }
}

TEST_CASE("exactness up to degree 2n-1 and unit-weight sum") {
  for (int n = 1; n <= 30; ++n) {
    const auto [x, w] = gauss_legendre_1d(n);
    CHECK(std::abs(w.sum() - 2.0) <= 1e-14);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += w[i] * std::pow(x[i], deg);
      const double exact = (deg % 2 == 1) ? 0.0 : 2.0 / (deg + 1);
      CHECK(std::abs(acc - exact) <= 1e-13);
    }
  }
}

TEST_CASE("relative error has the right fixed points") {
  const auto geom = problems::make_example(1).problem.geom;
  QuadratureRule rule;

  const quadrature::FieldFn u = [](const Vec& x, double, int) {
    return x[0] + 0.3 * x[1];
  };
  CHECK(relative_l2_error(u, u, geom, rule) == 0.0);

  const quadrature::FieldFn zero = [](const Vec&, double, int) { return 0.0; };
  CHECK(relative_l2_error(zero, u, geom, rule) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(relative_l2_error(zero, zero, geom, rule), ZeroDenominator);
}

TEST_CASE("constant shift against u = x has a closed-form error") {
  const auto geom = problems::make_example(1).problem.geom;
  QuadratureRule rule;
  const quadrature::FieldFn exact = [](const Vec& x, double, int) { return x[0]; };
  const quadrature::FieldFn shifted = [](const Vec& x, double, int) {
    return x[0] + 0.1;
  };
  // sqrt(0.01 * 4) / sqrt(4/3) = 0.1 * sqrt(3)
  CHECK(relative_l2_error(shifted, exact, geom, rule) ==
        doctest::Approx(0.1 * std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("flux error fixed points and closed form") {
  const auto geom = problems::make_example(1).problem.geom;
  QuadratureRule rule;
  const quadrature::VectorFieldFn p = [](const Vec& x, double, int) {
    Vec v(2);
    v << x[0], -x[1];
    return v;
  };
  CHECK(quadrature::relative_l2_error_flux(p, p, geom, rule) == 0.0);
  const quadrature::VectorFieldFn zero = [](const Vec&, double, int) {
    return Vec(Vec::Zero(2));
  };
  CHECK(quadrature::relative_l2_error_flux(zero, p, geom, rule) ==
        doctest::Approx(1.0).epsilon(1e-15));

  const quadrature::VectorFieldFn shifted = [](const Vec& x, double, int) {
    Vec v(2);
    v << x[0] + 0.1, -x[1];
    return v;
  };
  // same ratio as the scalar case up to the doubled denominator
  CHECK(quadrature::relative_l2_error_flux(shifted, p, geom, rule) ==
        doctest::Approx(0.1 * std::sqrt(3.0) / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("monte carlo agrees with gauss-legendre within sampling error") {
  const auto geom = problems::make_example(2).problem.geom;  // 3-D box
  const quadrature::FieldFn exact = [](const Vec& x, double, int) {
    return std::exp(0.3 * x[0]) + x[1] * x[2];
  };
  const quadrature::FieldFn approx = [](const Vec& x, double, int) {
    return std::exp(0.3 * x[0]) + x[1] * x[2] + 0.05 * std::sin(x[0] + x[1]);
  };
  QuadratureRule gl;
  const double reference = relative_l2_error(approx, exact, geom, gl);

  QuadratureRule mc;
  mc.kind = QuadratureRule::Kind::MonteCarlo;
  mc.n_samples = 4000;
  std::vector<double> estimates;
  for (std::uint64_t s = 0; s < 32; ++s) {
    mc.seed = 1000 + s;
    estimates.push_back(relative_l2_error(approx, exact, geom, mc));
  }
  const double mean =
      std::accumulate(estimates.begin(), estimates.end(), 0.0) / estimates.size();
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  const double sd = std::sqrt(var / (estimates.size() - 1));
  CHECK(std::abs(mean - reference) <= 3.0 * sd / std::sqrt(32.0) + 1e-12);
}

TEST_CASE("oversized tensor rules are rejected") {
  const auto geom = problems::make_example(4).problem.geom;  // d = 5
  QuadratureRule rule;  // 20^5 = 3.2e6 is fine; 40^5 = 1e8 is not
  rule.nodes_per_axis = 40;
  const quadrature::FieldFn one = [](const Vec&, double, int) { return 1.0; };
  CHECK_THROWS_AS(relative_l2_error(one, one, geom, rule), InvalidConfig);
}

TEST_SUITE_END();
