#include <doctest.h>

#include <cmath>
#include <random>

#include "tori/torus.hpp"

using namespace tori;
using doctest::Approx;

namespace {
const double kPi = M_PI;
}

TEST_CASE("grid construction is validated") {
  CHECK_THROWS_AS(FlatTorus(2, 6), std::invalid_argument);
  CHECK_THROWS_AS(FlatTorus(2, 33), std::invalid_argument);
  CHECK_THROWS_AS(FlatTorus(1, 16), std::invalid_argument);
  const FlatTorus m(2, 16);
  CHECK(m.size() == 256);
  CHECK(m.injectivity_radius() == 0.5);
  CHECK(integrate(m, ScalarField(m, 1.0)) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quadrature") {
  const FlatTorus m(2, 64);
  CHECK(std::abs(integrate(m, sample(m, [](const Point& x) { return std::sin(2 * kPi * x[0]); }))) < 1e-12);
  const double s2 = integrate(m, sample(m, [](const Point& x) { return std::pow(std::sin(2 * kPi * x[0]), 2); }));
  CHECK(std::abs(s2 - 0.5) < 1e-10);
  // exp(cos 2 pi x) integrates to I_0(1); spectral convergence beats any power between N = 16 and 64.
  const double i0 = std::cyl_bessel_i(0.0, 1.0);
  auto err = [&](int n) {
    const FlatTorus g(2, n);
    return std::abs(integrate(g, sample(g, [](const Point& x) { return std::exp(std::cos(2 * kPi * x[0])); })) - i0);
  };
  CHECK(err(8) > 1e-9);
  CHECK(err(16) < 1e-13);
}

TEST_CASE("line integrals") {
  const FlatTorus m(2, 32);
  const OneForm dx = harmonic_form(m, {1.0, 0.0});
  CHECK(line_integral(dx, {Point{0, 0}, Point{0.5, 0}, Point{1.0, 0}}) == Approx(1.0));
  OneForm df = harmonic_form(m, {0.0, 0.0});
  df.potential = sample(m, [](const Point& x) { return std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[1]); });
  CHECK(std::abs(line_integral(df, {Point{0.1, 0.2}, Point{0.7, 0.4}, Point{1.1, 1.2}})) < 1e-12);
  // Shear orbit at y = 1/4: x + t g(1/4), g(1/4) = 1.
  std::vector<Point> orbit;
  for (int k = 0; k <= 50; ++k) orbit.push_back(Point{0.3 + k / 50.0, 0.25});
  CHECK(line_integral(dx, orbit) == Approx(1.0));
  CHECK_THROWS(line_integral(dx, {Point{0, 0}}));
}

TEST_CASE("hodge decomposition") {
  const FlatTorus m(2, 64);
  FieldSamples c = {ScalarField(m, 3.0), ScalarField(m, 2.0)};
  OneForm h = hodge_decompose(c);
  CHECK(h.coeffs[0] == Approx(3.0));
  CHECK(h.coeffs[1] == Approx(2.0));
  CHECK(h.potential.max() - h.potential.min() < 1e-12);

  const ScalarField f = sample(m, [](const Point& x) { return std::sin(2 * kPi * x[0]) * std::sin(2 * kPi * x[1]); });
  h = hodge_decompose(gradient(f));
  CHECK(std::abs(h.coeffs[0]) < 1e-12);
  double e = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) e = std::max(e, std::abs(h.potential.v[i] - f.v[i]));
  CHECK(e < 1e-10);

  const ScalarField g = sample(m, [](const Point& x) { return std::cos(2 * kPi * x[1]) + 0.3; });
  FieldSamples beta = gradient(g);
  for (double& v : beta[0].v) v += 1.0;
  h = hodge_decompose(beta);
  CHECK(h.coeffs[0] == Approx(1.0));
  CHECK(std::abs(h.coeffs[1]) < 1e-12);
  e = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) e = std::max(e, std::abs(h.potential.v[i] - (g.v[i] - 0.3)));
  CHECK(e < 1e-10);

  // Round trip on a closed form.
  const FieldSamples back = reconstruct(h);
  e = 0.0;
  for (int a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < m.size(); ++i) e = std::max(e, std::abs(back[a].v[i] - beta[a].v[i]));
  CHECK(e < 1e-8);
  CHECK(h.coexact_residual < 1e-8);

  // A rotational field is not closed; the residual is reported.
  FieldSamples rot = {sample(m, [](const Point& x) { return std::sin(2 * kPi * x[1]); }), ScalarField(m)};
  CHECK(hodge_decompose(rot).coexact_residual > 0.5);
}

TEST_CASE("pairing and norms") {
  CHECK(poincare_pair({{1.0, 0.0}}, {{0.5, 0.0}, {}}) == Approx(0.5));
  CHECK(poincare_pair({{0.0, 0.0}}, {{0.5, 0.7}, {}}) == 0.0);
  CHECK(poincare_pair({{1.0, 1.0}}, {{1.0, 0.0}, {}}) == Approx(1.0));
  CHECK_THROWS(poincare_pair({{1.0, 1.0, 0.0}}, {{1.0, 0.0}, {}}));

  const FlatTorus m(2, 16);
  CHECK(harmonic_norm({1.0, 0.0}) == 1.0);
  CHECK(harmonic_norm({2.0, -1.0}) == 3.0);
  CHECK(sup_norm(harmonic_form(m, {1.0, 0.0})) == Approx(1.0));
  // Brute force over the l1 unit sphere of tangent vectors.
  double brute = 0.0;
  for (int k = 0; k < 3600; ++k) {
    const double th = 2 * kPi * k / 3600.0;
    const double vx = std::cos(th), vy = std::sin(th), n = std::abs(vx) + std::abs(vy);
    brute = std::max(brute, (vx + vy) / n);
  }
  CHECK(sup_norm(harmonic_form(m, {1.0, 1.0})) == Approx(brute).epsilon(1e-6));
  CHECK(sup_norm(harmonic_form(m, {1.0, 1.0})) <= harmonic_norm({1.0, 1.0}));

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int k = 0; k < 1000; ++k) {
    const std::vector<double> c = {g(rng), g(rng)};
    REQUIRE(sup_norm(harmonic_form(m, c)) <= harmonic_norm(c) + 1e-15);
  }
}

TEST_CASE("metric utilities") {
  CHECK(flat_distance(Point{0, 0}, Point{0.75, 0}, 2) == Approx(0.25));
  const auto geo = minimal_geodesic(Point{0, 0}, Point{0.75, 0}, 2);
  CHECK(geo.back()[0] == Approx(-0.25));
  // Cut locus: ties resolve to the negative lift.
  CHECK(minimal_lift(Point{0, 0}, Point{0.5, 0}, 2)[0] == Approx(-0.5));
  const Point w = wrap_point(Point{1.25, -0.25}, 2);
  CHECK(w[0] == Approx(0.25));
  CHECK(w[1] == Approx(0.75));
}

TEST_CASE("contraction convention") {
  const Point b = contract_symplectic(Point{2.0, 3.0}, 2);
  CHECK(b[0] == -3.0);
  CHECK(b[1] == 2.0);
  const Point x = symplectic_dual(b, 2);
  CHECK(x[0] == 2.0);
  CHECK(x[1] == 3.0);
  const Point b4 = contract_symplectic(Point{1, 2, 3, 4}, 4);
  CHECK(b4[2] == -4.0);
  CHECK(b4[3] == 3.0);
}

TEST_CASE("interpolation") {
  const FlatTorus m(2, 32);
  const ScalarField f = sample(m, [](const Point& x) { return std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[1]); });
  std::vector<Point> pts = {Point{0.013, 0.77}, Point{-0.4, 1.3}, Point{0.5, 0.5}};
  const InterpolationPlan plan(m, pts);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const double exact = std::sin(2 * kPi * pts[q][0]) * std::cos(2 * kPi * pts[q][1]);
    CHECK(plan(f, q) == Approx(interpolate(f, pts[q])).epsilon(1e-14));
    CHECK(std::abs(interpolate(f, pts[q]) - exact) < 1e-4);
    CHECK(std::abs(evaluate_spectral(f, pts[q]) - exact) < 1e-12);
    Point g{};
    CHECK(interpolate_grad(f, pts[q], g) == Approx(interpolate(f, pts[q])));
  }
}
