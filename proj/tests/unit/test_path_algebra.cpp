#include <doctest.h>

#include <cmath>

#include "tori/examples.hpp"
#include "tori/flux.hpp"
#include "tori/path_algebra.hpp"

using namespace tori;
using doctest::Approx;

namespace {
double flux_gap(const FluxClass& a, const std::vector<double>& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) g = std::max(g, std::abs(a.pairings[i] - b[i]));
  return g;
}
}  // namespace

TEST_CASE("cutoff") {
  const CutoffFunction f = make_cutoff();
  CHECK(f(0.0) == 0.0);
  CHECK(f(1.0) == 1.0);
  CHECK(f(f.delta / 2) == 0.0);
  CHECK(f(1.0 - f.delta / 2) == 1.0);
  CHECK(f.sup_slope <= 1.201);
  CHECK(f.slope_bound_ok);
  for (std::size_t i = 1; i < f.samples.size(); ++i) REQUIRE(f.samples[i] >= f.samples[i - 1]);
  for (double s : {0.1, 0.5, 0.83}) CHECK(f(f.inverse(s)) == Approx(s).epsilon(1e-10));
  // Mean slope on [delta, 1 - delta] is 4/3 at delta = 1/8, so the 6/5 bound cannot hold there.
  CHECK_FALSE(make_cutoff(0.125).slope_bound_ok);
  CHECK_THROWS_AS(make_cutoff(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_cutoff(0.2), std::invalid_argument);
}

TEST_CASE("concatenation endpoints and orbits") {
  const FlatTorus m(2, 32);
  const Isotopy phi = flow(examples::standard_shear(), 100, m);
  const Isotopy psi = flow(examples::translation(Point{0.2, 0.3}), 100, m);
  const Isotopy r = concat_right(phi, psi), l = concat_left(psi, phi);
  CHECK(c0_distance(r.time_one(), compose(phi.time_one(), psi.time_one())) < 1e-9);
  CHECK(c0_distance(l.time_one(), compose(psi.time_one(), phi.time_one())) < 1e-9);

  const Point p{0.3, 0.6};
  // Right: O^Phi_p glued with phi_1(O^Psi_p); left: O^Phi_p glued with O^Psi_{phi_1 p}.
  const Point mid = phi.apply(phi.size() - 1, p);
  double er = 0.0, el = 0.0;
  for (double s : {0.25, 0.5, 0.8}) {
    const CutoffFunction f = make_cutoff();
    const double tau = f.inverse(s);
    const Point a = r.eval(0.5 + 0.5 * tau, p);
    const Point b = phi.time_one().apply(psi.eval(s, p));
    const Point c = l.eval(0.5 + 0.5 * tau, p);
    const Point d = psi.eval(s, mid);
    for (int k = 0; k < 2; ++k) {
      er = std::max(er, std::abs(a[k] - b[k]));
      el = std::max(el, std::abs(c[k] - d[k]));
    }
  }
  CHECK(er < 1e-4);
  CHECK(el < 1e-4);

  const Isotopy with_id = concat_right(phi, identity_path(m, 100));
  CHECK(c0_distance(with_id.time_one(), phi.time_one()) < 1e-12);
  CHECK(flux_gap(flux_class(with_id), flux_class(phi).pairings) < 1e-9);
  CHECK_THROWS(concat_right(phi, flow(examples::standard_shear(), 100, FlatTorus(2, 16))));
}

TEST_CASE("flux additivity under concatenation") {
  const FlatTorus m(2, 32);
  const Isotopy phi = flow(examples::standard_shear(), 100, m);
  const Isotopy psi = flow(examples::y_shear(0.3, 0.1, 0.2), 100, m);
  const auto fa = flux_class(phi).pairings, fb = flux_class(psi).pairings;
  const std::vector<double> sum = {fa[0] + fb[0], fa[1] + fb[1]};
  CHECK(flux_gap(flux_class(concat_right(phi, psi)), sum) < 1e-9);
  CHECK(flux_gap(flux_class(concat_left(psi, phi)), sum) < 1e-9);
}

TEST_CASE("iteration") {
  const FlatTorus m(2, 32);
  const Isotopy loop = flow(examples::translation(Point{1.0, 0.0}), 50, m);
  const Isotopy three = iterate(loop, 3);
  CHECK(orbit_of(three, Point{0.2, 0.4}).winding == std::vector<long>{3, 0});
  CHECK(flux_gap(flux_class(three), {3.0, 0.0}) < 1e-12);

  const Isotopy phi = flow(examples::x_shear(0.3, 0.2, 0.1), 100, m);
  CHECK(c0_distance(iterate(phi, 1).time_one(), phi.time_one()) < 1e-12);
  CHECK(flux_gap(flux_class(iterate(phi, 1)), flux_class(phi).pairings) < 1e-12);
  CHECK(c0_distance(iterate(phi, -1).time_one(), inverse(phi.time_one())) < 1e-8);
  const GridMap p1 = phi.time_one();
  CHECK(c0_distance(iterate(phi, 2).time_one(), compose(p1, p1)) < 1e-8);
  CHECK_THROWS_AS(iterate(phi, 0), std::invalid_argument);
}

TEST_CASE("reparametrization keeps endpoints") {
  const FlatTorus m(2, 16);
  const Isotopy phi = flow(examples::standard_shear(), 100, m);
  const Isotopy r = reparametrize(phi, make_cutoff().reparam());
  CHECK(c0_distance(r.time_one(), phi.time_one()) < 1e-12);
  CHECK(r.slices.front().t == 0.0);
  CHECK(r.back().t == Approx(1.0));
}
