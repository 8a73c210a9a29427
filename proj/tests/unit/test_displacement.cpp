#include <doctest.h>

#include <cmath>

#include "tori/displacement.hpp"
#include "tori/examples.hpp"
#include "tori/flux.hpp"
#include "tori/path_algebra.hpp"

using namespace tori;
using doctest::Approx;

namespace {
const double kPi = M_PI;
}

TEST_CASE("displacement field examples") {
  const FlatTorus m(2, 32);
  const GridMap shear = flow(examples::standard_shear(), 200, m).time_one();
  const DisplacementField nu = displacement(shear, harmonic_form(m, {1.0, 0.0}), Point{0.0, 0.0});
  double e = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    e = std::max(e, std::abs(nu.nu.v[i] - (examples::shear_profile(m.point(i)[1]) - 0.5)));
  CHECK(e < 1e-9);
  CHECK(nu.exactness_residual < 1e-8);

  const GridMap tr = translation_map(m, Point{0.3, 0.7});
  const DisplacementField z = displacement(tr, harmonic_form(m, {0.4, -1.0}), Point{0.2, 0.2});
  CHECK(std::max(z.nu.max(), -z.nu.min()) < 1e-12);

  // psi^* a - a is exact only when a is closed; dy pulled back by the identity stays exact.
  const DisplacementField id = displacement(identity_map(m), harmonic_form(m, {0.0, 1.0}), Point{0.5, 0.5});
  CHECK(id.nu.osc() == 0.0);
}

TEST_CASE("displacement along geodesics and base-point transfer") {
  const FlatTorus m(2, 32);
  const GridMap g = flow(examples::x_shear(0.4, 0.1, 0.2), 100, m).time_one();
  const OneForm a = harmonic_form(m, {1.0, 0.5});
  const Point p{0.1, 0.2};
  const DisplacementField nu = displacement(g, a, p);
  CHECK(std::abs(evaluate_spectral(nu.nu, p)) < 1e-9);
  for (const Point& z : {Point{0.4, 0.3}, Point{0.9, 0.6}})
    CHECK(evaluate_spectral(nu.nu, z) == Approx(displacement_geodesic(g, a, p, z)).epsilon(1e-6));

  const std::vector<Point> xi = {p, Point{0.6, 0.9}};
  const std::vector<Point> gamma = {p, Point{0.1, 0.75}};
  const std::vector<Point> c = {Point{0.1, 0.75}, Point{0.6, 0.9}};
  const TransferResult closed = base_point_transfer_residual(g, a, xi, gamma, c);
  CHECK(closed.hypothesis_met);
  CHECK(closed.residual < 1e-6);
  // A cycle winding once around y: the residual is the period, so the hypothesis is reported as unmet.
  const std::vector<Point> wide = {p, Point{0.6, 1.9}};
  const TransferResult open = base_point_transfer_residual(g, a, wide, gamma, c);
  CHECK_FALSE(open.hypothesis_met);
  CHECK(open.winding == std::vector<long>{0, 1});
  CHECK_THROWS(base_point_transfer_residual(g, a, {p}, gamma, c));
}

TEST_CASE("energy") {
  const FlatTorus m(2, 32);
  const Isotopy shear = flow(examples::standard_shear(), 200, m);
  const EnergyValue e = energy(shear, {1.0, 0.0}, Point{0.0, 0.25});
  CHECK(e.value == Approx(-0.5).epsilon(1e-8));
  CHECK(e.has_decomposition);
  CHECK(e.pairing_term == Approx(0.5));
  CHECK(e.gf10_residual < 1e-6);
  CHECK(std::abs(energy(shear, {1.0, 0.0}, Point{0.0, 0.0}).value) < 1e-9);
  // |H| scaling: E depends on H only through its direction.
  CHECK(energy(shear, {2.0, 0.0}, Point{0.0, 0.25}).value == Approx(e.value));
  CHECK(energy(identity_map(m), {0.3, 0.7}, Point{0.4, 0.1}).value == 0.0);
  CHECK(std::abs(energy(translation_map(m, Point{0.3, 0.2}), {1.0, 0.0}, Point{0.4, 0.1}).value) < 1e-12);
}

TEST_CASE("composition defect") {
  const FlatTorus m(2, 32);
  const Isotopy psi = flow(examples::x_shear(3.0), 400, m);
  const Isotopy phi = flow(examples::translation(Point{0.0, 0.5}), 50, m);
  const DefectResult r = composition_defect(psi, phi, {1.0, 0.0}, Point{0.0, 0.25});
  // D_psi(p) - D_psi(phi p) = 3 - (-3); the defect exceeds 2 A^2 = 2 for this large shear.
  CHECK(r.defect == Approx(6.0).epsilon(1e-6));
  CHECK(r.bound == 2.0);
  CHECK(r.exact_law_residual < 1e-6);
  const Isotopy id = identity_path(m, 50);
  CHECK(composition_defect(id, id, {0.5, 0.5}, Point{0.3, 0.3}).defect == 0.0);
  const Isotopy small = flow(examples::x_shear(0.3), 100, m);
  CHECK(composition_defect(small, phi, {1.0, 0.0}, Point{0.0, 0.25}).defect == Approx(0.6).epsilon(1e-6));
}

TEST_CASE("iteration law") {
  const FlatTorus m(2, 32);
  const Isotopy phi =
      flow(examples::sum(examples::x_shear(0.3, 0.1, 0.25), examples::translation(Point{0.0, 0.15})), 100, m);
  const IterationLawResult one = iteration_law_residual(phi, 1, {1.0, 0.0}, Point{0.2, 0.3});
  CHECK(one.residual < 1e-12);
  CHECK(one.energy_power == Approx(one.energy_base));
  CHECK(iteration_law_residual(phi, 2, {1.0, 0.0}, Point{0.2, 0.3}).residual < 1e-5);
  const IterationLawResult neg = iteration_law_residual(phi, -1, {1.0, 0.0}, Point{0.2, 0.3});
  CHECK(neg.residual < 1e-5);
  CHECK(neg.literal_residual > 1e-3);
  CHECK_THROWS(iteration_law_residual(phi, 0, {1.0, 0.0}, Point{0.2, 0.3}));
}

TEST_CASE("continuity in C0") {
  const FlatTorus m(2, 32);
  const GridMap psi = flow(examples::standard_shear(), 200, m).time_one();
  std::vector<GridMap> seq;
  for (double s : {0.3, 0.05, 0.02}) seq.push_back(compose(psi, translation_map(m, Point{0.0, s})));
  const auto rows = continuity_check(seq, psi, {1.0, 0.0}, Point{0.0, 0.25});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].skipped);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK_FALSE(rows[i].skipped);
    CHECK(rows[i].pass);
    CHECK(rows[i].gap <= rows[i].bound);
  }
  CHECK(rows[2].distance < rows[1].distance);
}

TEST_CASE("separation") {
  const FlatTorus m(2, 32);
  const SeparationReport w = separation_check(flow(examples::wiggle_loop(0.02), 200, m), 4);
  CHECK(w.hypothesis_met);
  CHECK(w.flux[0] == Approx(1.0));
  CHECK(w.delta0 == Approx(0.0625));
  CHECK(w.min_margin > 0.5);
  CHECK(w.orbits == 64);
  // A short translation has d = |v| >= delta_0 = |v| / 8.
  const SeparationReport t = separation_check(flow(examples::translation(Point{0.05, 0.0}), 50, m), 4);
  CHECK_FALSE(t.hypothesis_met);
  CHECK(t.distance_time_one == Approx(0.05));
  CHECK_THROWS_AS(separation_check(flow(examples::hamiltonian_loop(0.1), 50, m)), PreconditionError);
}
