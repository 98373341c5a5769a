#include <doctest.h>

#include <cmath>
#include <limits>

#include "kernlat/criteria.hpp"
#include "kernlat/errors.hpp"
#include "kernlat/interpolant.hpp"
#include "kernlat/oracles.hpp"
#include "support/generators.hpp"

using namespace kernlat;
using testsupport::Gen;
using testsupport::rel_err;

namespace {

FrequencyVector fv(std::vector<long> h) { return FrequencyVector{std::move(h)}; }

TestFunction cosine(int d, long h1) {
  std::vector<long> h(static_cast<std::size_t>(d), 0);
  h[0] = h1;
  std::vector<long> m = h;
  m[0] = -h1;
  return TestFunction(d, {{fv(h), {0.5, 0.0}}, {fv(m), {0.5, 0.0}}});
}

double max_node_residual(const Interpolant& ip, const TestFunction& f) {
  const auto pts = lattice_points(ip.generating_vector());
  double worst = 0.0;
  for (long k = 0; k < pts.size(); ++k) {
    const auto t = pts.point(k);
    worst = std::max(worst, std::abs(ip(t) - f(t)));
  }
  return worst;
}

}  // namespace

TEST_CASE("test functions validate their terms") {
  CHECK_THROWS_AS(TestFunction(0, {}), InvalidArgumentError);
  CHECK_THROWS_AS(TestFunction(2, {{fv({1}), {1.0, 0.0}}}), DimensionMismatchError);
  CHECK_THROWS_AS(TestFunction(1, {{fv({0}), {1.0, 0.0}}, {fv({0}), {1.0, 0.0}}}),
                  InvalidArgumentError);
  CHECK_THROWS_AS(TestFunction(1, {{fv({1}), {1.0, 0.0}}}), InvalidArgumentError);
  CHECK_THROWS_AS(TestFunction(1, {{fv({1}), {1.0, 1.0}}, {fv({-1}), {1.0, 1.0}}}),
                  InvalidArgumentError);
  CHECK_THROWS_AS(TestFunction(1, {{fv({0}), {std::numeric_limits<double>::quiet_NaN(), 0.0}}}),
                  InvalidArgumentError);
  const TestFunction f = cosine(1, 1);
  const std::vector<double> y{0.125};
  CHECK(f(y) == doctest::Approx(std::cos(2 * std::numbers::pi * 0.125)));
  CHECK(f.scaled(3.0)(y) == doctest::Approx(3.0 * f(y)));
  const std::vector<double> bad{0.1, 0.2};
  CHECK_THROWS_AS(f(bad), DimensionMismatchError);
}

TEST_CASE("function norms") {
  const SpaceParams half(1, ProductWeights::explicit_list({0.5}), 1);
  CHECK(function_norm(cosine(1, 1), half) == doctest::Approx(1.0));
  CHECK(function_norm(cosine(1, 2), half) == doctest::Approx(2.0));
  const SpaceParams a2(2, ProductWeights::explicit_list({0.5}), 1);
  CHECK(function_norm(cosine(1, 2), a2) == doctest::Approx(4.0));
  const TestFunction constant(1, {{fv({0}), {2.0, 0.0}}});
  CHECK(function_norm(constant, half) == doctest::Approx(2.0));
}

TEST_CASE("random unit functions") {
  Gen g(61);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = static_cast<int>(g.integer(1, 4));
    const SpaceParams params(static_cast<int>(g.integer(1, 2)), g.weights(), d);
    const auto seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30));
    const auto f = random_unit_function(params, 3, 2, seed);
    CHECK(function_norm(f, params) == doctest::Approx(1.0).epsilon(1e-12));
    const auto again = random_unit_function(params, 3, 2, seed);
    const auto y = g.point(d);
    CHECK(f(y) == again(y));
  }
  const SpaceParams params(1, ProductWeights::poly2(), 2);
  const auto c = random_unit_function(params, 1, 0, 5);
  CHECK(c.terms().size() == 1);
  CHECK(c.terms()[0].first.is_zero());
  CHECK(std::abs(c(std::vector<double>{0.3, 0.9})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(random_unit_function(params, 6, 1, 0), InvalidArgumentError);
  CHECK_THROWS_AS(random_unit_function(params, 0, 1, 0), InvalidArgumentError);
}

TEST_CASE("fitting zero data gives the zero interpolant") {
  const GeneratingVector gv(16, {1, 5});
  const SpaceParams params(1, ProductWeights::poly3alpha(), 2);
  const auto ip = fit(gv, params, std::vector<double>(16, 0.0));
  for (double a : ip.coefficients()) CHECK(a == 0.0);
  CHECK(evaluate(ip, std::vector<double>{0.2, 0.4}) == 0.0);
  CHECK_THROWS_AS(fit(gv, params, std::vector<double>(15, 0.0)), DimensionMismatchError);
}

TEST_CASE("coefficients agree with a dense solve") {
  Gen g(62);
  for (int trial = 0; trial < 15; ++trial) {
    const long n = g.integer(2, 64);
    const int d = static_cast<int>(g.integer(1, 4));
    const auto gv = g.vector(n, d);
    const SpaceParams params(1, ProductWeights::poly3alpha(), d);
    const auto values = g.values(static_cast<std::size_t>(n));
    const auto ip = fit(gv, params, values);
    const auto ref = oracles::dense_solve<double>(oracles::dense_kernel_matrix<double>(gv, params), values);
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      err = std::max(err, std::abs(ip.coefficients()[k] - ref[k]));
      scale = std::max(scale, std::abs(ref[k]));
    }
    CHECK(err <= 1e-10 * scale);
  }
}

TEST_CASE("interpolants reproduce the data at the nodes") {
  Gen g(63);
  for (int trial = 0; trial < 20; ++trial) {
    const long n = g.integer(2, 300);
    const int d = static_cast<int>(g.integer(1, 5));
    const auto gv = g.vector(n, d);
    const SpaceParams params(static_cast<int>(g.integer(1, 2)), g.weights(), d);
    const auto f = random_unit_function(params, 4, 3, static_cast<std::uint64_t>(trial));
    const auto ip = fit(gv, params, sample_at_nodes(gv, f));
    CHECK(max_node_residual(ip, f) <= 1e-9);
  }
}

TEST_CASE("interpolation is linear in the data") {
  Gen g(64);
  const GeneratingVector gv(37, {1, 10, 26});
  const SpaceParams params(1, ProductWeights::geometric09(), 3);
  const auto u = g.values(37), v = g.values(37);
  std::vector<double> w(37);
  for (std::size_t k = 0; k < 37; ++k) w[k] = 2.0 * u[k] - 3.0 * v[k];
  const auto iu = fit(gv, params, u), iv = fit(gv, params, v), iw = fit(gv, params, w);
  for (int trial = 0; trial < 10; ++trial) {
    const auto y = g.point(3);
    CHECK(iw(y) == doctest::Approx(2.0 * iu(y) - 3.0 * iv(y)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("batch evaluation matches pointwise evaluation") {
  const GeneratingVector gv(32, {1, 13});
  const SpaceParams params(2, ProductWeights::poly2(), 2);
  const auto f = random_unit_function(params, 5, 2, 9);
  const auto ip = fit(gv, params, sample_at_nodes(gv, f));
  const auto pts = evaluation_points(2, 101, 3);
  const auto batch = ip.evaluate_batch(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(batch[i] == ip(pts[i]));
}

TEST_CASE("pointwise error is bounded by the power function for unit-norm functions") {
  Gen g(65);
  for (int trial = 0; trial < 10; ++trial) {
    const long n = g.integer(4, 40);
    const int d = static_cast<int>(g.integer(1, 3));
    const auto gv = g.vector(n, d);
    const SpaceParams params(1, g.weights(), d);
    const auto f = random_unit_function(params, 4, 3, static_cast<std::uint64_t>(100 + trial));
    const auto ip = fit(gv, params, sample_at_nodes(gv, f));
    for (int k = 0; k < 10; ++k) {
      const auto y = g.point(d);
      const double bound = power_pointwise(gv, params, y, PrecisionContext::extended(256));
      CHECK(std::abs(f(y) - ip(y)) <= bound * (1 + 1e-6) + 1e-12);
    }
  }
}

TEST_CASE("evaluation points and the L2 estimate are deterministic") {
  const auto a = evaluation_points(3, 257, 7);
  const auto b = evaluation_points(3, 257, 7);
  CHECK(a == b);
  CHECK(a.size() == 257);
  for (const auto& y : a) {
    for (double v : y) {
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
  }
  CHECK(evaluation_points(3, 257, 8) != a);
  CHECK_THROWS_AS(evaluation_points(0, 10, 0), InvalidArgumentError);

  const GeneratingVector gv(64, {1, 19, 27});
  const SpaceParams params(1, ProductWeights::poly3alpha(), 3);
  const TestFunction zero(3, {{fv({0, 0, 0}), {0.0, 0.0}}});
  const auto iz = fit(gv, params, sample_at_nodes(gv, zero));
  CHECK(l2_error_estimate(iz, zero, 500, 1) == 0.0);

  const auto f = random_unit_function(params, 6, 3, 4);
  const auto ip = fit(gv, params, sample_at_nodes(gv, f));
  const double e1 = l2_error_estimate(ip, f, 1021, 2);
  CHECK(e1 == l2_error_estimate(ip, f, 1021, 2));
  CHECK(e1 > 0.0);
  CHECK(e1 <= p_star(gv, params).value * 1.05);
}
