#include <doctest.h>

#include <cmath>

#include "tori/examples.hpp"
#include "tori/flows.hpp"

using namespace tori;
using doctest::Approx;

namespace {
const double kPi = M_PI;

double max_err(const Isotopy& phi, const std::function<Point(double, const Point&)>& exact) {
  const FlatTorus& m = phi.torus;
  double e = 0.0;
  for (std::size_t k = 0; k < phi.size(); k += 10)
    for (std::size_t i = 0; i < m.size(); i += 7) {
      const Point x = m.point(i);
      const Point y = phi.apply(k, x), z = exact(phi.slices[k].t, x);
      for (int c = 0; c < m.dim(); ++c) e = std::max(e, std::abs(y[c] - z[c]));
    }
  return e;
}
}  // namespace

TEST_CASE("flows of analytic fields") {
  const FlatTorus m(2, 32);
  const Isotopy tr = flow(examples::translation(Point{1.0, 0.0}), 50, m);
  CHECK(max_err(tr, [](double t, const Point& x) { return Point{x[0] + t, x[1]}; }) < 1e-13);
  CHECK(c0_distance(tr.time_one(), identity_map(m)) < 1e-13);

  const Isotopy sh = flow(examples::standard_shear(), 200, m);
  CHECK(max_err(sh, [](double t, const Point& x) { return Point{x[0] + t * examples::shear_profile(x[1]), x[1]}; }) <
        1e-10);

  const Isotopy hs = flow(examples::hamiltonian_shear(), 200, m);
  CHECK(max_err(hs, [](double t, const Point& x) { return Point{x[0] - t * std::sin(2 * kPi * x[1]), x[1]}; }) < 1e-10);

  CHECK_THROWS_AS(flow(examples::translation(Point{1, 0}), 20, m), std::invalid_argument);
  TimeField bad{2, FieldKind::general, "nan", [](double, const Point&) { return Point{std::nan(""), 0, 0, 0}; }};
  CHECK_THROWS_AS(flow(bad, 50, m), IntegrationError);
}

TEST_CASE("hamiltonian fields") {
  const FlatTorus m(2, 32);
  const TimeField zero = hamiltonian_field([](double, const Point&) { return 2.0; }, m);
  const Point z = zero(0.3, Point{0.2, 0.7});
  CHECK(std::abs(z[0]) + std::abs(z[1]) < 1e-14);
  const TimeField x = hamiltonian_field([](double, const Point& p) { return std::cos(2 * kPi * p[1]) / (2 * kPi); }, m);
  for (const Point& p : {Point{0.1, 0.2}, Point{0.55, 0.9}}) {
    const Point v = x(0.0, p);
    CHECK(v[0] == Approx(-std::sin(2 * kPi * p[1])).epsilon(1e-4));
    CHECK(std::abs(v[1]) < 1e-12);
  }
  CHECK_THROWS_AS(hamiltonian_field([](double, const Point&) { return 0.0; }, FlatTorus(2, 16, false)),
                  StructureError);
  const Isotopy bump = flow(examples::hamiltonian_bump(0.2, 0.1, 0.3), 100, m);
  CHECK(verify_conservative(bump).divergence < 1e-10);
}

TEST_CASE("generators") {
  const FlatTorus m(2, 32);
  const GeneratorPair t = generator_of(flow(examples::translation(Point{0.3, -0.2}), 50, m));
  for (std::size_t k = 0; k < t.t.size(); ++k) {
    REQUIRE(t.harmonic[k][0] == Approx(0.2));
    REQUIRE(t.harmonic[k][1] == Approx(0.3));
    REQUIRE(t.u[k].max() - t.u[k].min() < 1e-12);
  }
  const GeneratorPair h = generator_of(flow(examples::hamiltonian_shear(), 50, m));
  double e = 0.0;
  for (std::size_t k = 0; k < h.t.size(); ++k) {
    e = std::max({e, std::abs(h.harmonic[k][0]), std::abs(h.harmonic[k][1])});
    for (std::size_t i = 0; i < m.size(); ++i)
      e = std::max(e, std::abs(h.u[k].v[i] - std::cos(2 * kPi * m.point(i)[1]) / (2 * kPi)));
  }
  CHECK(e < 1e-10);
  const GeneratorPair id = generator_of(identity_path(m, 50));
  CHECK(id.u.back().max() == 0.0);
  CHECK(id.harmonic.back()[0] == 0.0);
}

TEST_CASE("velocity reconstruction") {
  // Off the identity the error is set by spatial interpolation of the inverse map.
  const FlatTorus m(2, 64);
  const TimeField x = examples::sum(examples::x_shear(0.3, 0.1), examples::hamiltonian_bump(0.1, 0.2, 0.3));
  Isotopy bare = flow(x, 100, m);
  bare.field.reset();
  for (Slice& s : bare.slices) s.vel.reset();
  CHECK_FALSE(bare.has_velocity());
  double e = 0.0;
  for (double t : {0.0, 0.37, 1.0}) {
    const FieldSamples v = velocity(bare, t);
    for (std::size_t i = 0; i < m.size(); i += 5) {
      const Point ex = x(t, m.point(i));
      e = std::max({e, std::abs(v[0].v[i] - ex[0]), std::abs(v[1].v[i] - ex[1])});
    }
  }
  CHECK(e < 5e-5);
  CHECK_THROWS_AS(velocity(bare, 1.5), std::out_of_range);
}

TEST_CASE("inverse and conservation") {
  const FlatTorus m(2, 32);
  const Isotopy tr = flow(examples::translation(Point{0.3, 0.1}), 50, m);
  const Isotopy inv = inverse(tr);
  CHECK(c0_distance(inv.time_one(), translation_map(m, Point{-0.3, -0.1})) < 1e-12);
  const Isotopy sh = flow(examples::hamiltonian_shear(0.5), 200, m);
  CHECK(c0_distance(inverse(inverse(sh)), sh) < 1e-8);
  CHECK(c0_distance(compose(sh.time_one(), inverse(sh.time_one())), identity_map(m)) < 1e-8);

  const ConservationReport r = verify_conservative(flow(examples::hamiltonian_shear(), 200, FlatTorus(2, 64)));
  CHECK(r.det_defect <= 1e-8);
  CHECK(r.divergence <= 1e-8);
  CHECK_FALSE(r.flagged());
  CHECK(verify_conservative(flow(examples::compressible(0.2), 50, m)).flagged());
}

TEST_CASE("quadrature weights") {
  for (int k : {2, 3, 7, 10}) {
    const auto w = cumulative_weights(k, 0.1);
    double s = 0.0, s3 = 0.0;
    for (int j = 0; j <= k; ++j) {
      s += w[j];
      s3 += w[j] * std::pow(0.1 * j, 3);
    }
    CHECK(s == Approx(0.1 * k));
    CHECK(s3 == Approx(std::pow(0.1 * k, 4) / 4));
  }
  const auto q = quadrature_weights(10);
  double s = 0.0;
  for (double w : q) s += w;
  CHECK(s == Approx(1.0));
}
