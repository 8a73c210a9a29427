#include <doctest.h>

#include <cmath>

#include "tori/examples.hpp"
#include "tori/flux.hpp"
#include "tori/hofer.hpp"
#include "tori/path_algebra.hpp"

using namespace tori;
using doctest::Approx;

namespace {
const double kPi = M_PI;
}

TEST_CASE("lengths of explicit paths") {
  const FlatTorus m(2, 32);
  const LengthReport tr = lengths(flow(examples::translation(Point{0.3, -0.2}), 50, m));
  CHECK(tr.l1_length == Approx(0.5).epsilon(1e-10));
  CHECK(tr.linf_length == Approx(0.5).epsilon(1e-10));
  CHECK(tr.hofer_l1 < 1e-12);
  const LengthReport sh = lengths(flow(examples::hamiltonian_shear(2.0), 100, m));
  CHECK(sh.l1_length == Approx(2.0 / kPi).epsilon(1e-7));
  CHECK(sh.hofer_l1 == Approx(sh.l1_length));
  CHECK(sh.generator_residual < 1e-5);
  const LengthReport id = lengths(identity_path(m, 50));
  CHECK(id.l1_length == 0.0);
  CHECK(id.linf_length == 0.0);
  // Time-dependent speed: X_t = cos(2 pi t) (1, 0) has l1 length int |cos| = 2/pi and sup 1.
  const LengthReport w = lengths(flow(examples::harmonic_wiggle(Point{1.0, 0.0}), 200, m));
  CHECK(w.l1_length == Approx(2.0 / kPi).epsilon(1e-4));
  CHECK(w.linf_length == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("B-norm of vector fields") {
  const FlatTorus m(2, 32);
  const FieldSamples c = sample_components(m, [](const Point&) { return Point{0.4, -0.3}; });
  CHECK(vector_field_B_norm(c) == Approx(0.7));
  const FieldSamples h = sample_components(m, [](const Point& x) { return Point{-std::sin(2 * kPi * x[1]), 0.0}; });
  CHECK(vector_field_B_norm(h) == Approx(1.0 / kPi).epsilon(1e-9));
  const FieldSamples comp = sample_components(m, [](const Point& x) { return Point{std::sin(2 * kPi * x[0]), 0.0}; });
  CHECK_THROWS_AS(vector_field_B_norm(comp), StructureError);
}

TEST_CASE("Hodge split of isotopies") {
  const FlatTorus m(2, 32);
  const Isotopy ham = flow(examples::hamiltonian_bump(0.1, 0.2, 0.4), 100, m);
  const HodgeSplit a = hodge_split_isotopy(ham);
  CHECK(c0_distance(a.rho, identity_path(m, 100)) < 1e-9);
  CHECK(c0_distance(a.remainder, ham) < 1e-9);
  const Isotopy tr = flow(examples::translation(Point{0.2, 0.1}), 100, m);
  const HodgeSplit b = hodge_split_isotopy(tr);
  CHECK(c0_distance(b.rho, tr) < 1e-9);
  CHECK(b.shift.back()[0] == Approx(0.2));
  CHECK(c0_distance(b.remainder, identity_path(m, 100)) < 1e-9);
  for (double f : b.remainder_flux) CHECK(std::abs(f) < 1e-9);
}

TEST_CASE("deformation of a harmonic family") {
  const DeformationFamily zero = mcduff_deformation([](double) { return Point{0.0, 0.0}; }, 2, 16);
  CHECK(zero.sup_v_b == 0.0);
  CHECK(lem1_bound_residual(zero) == 0.0);

  // Constant-in-space X_t = c cos(2 pi t) e_1, A(t) = int_0^t X. Closed forms:
  // Z = t X(st) - 2 s A(t), G = int_0^s Z = c (sin(2 pi s t) - s^2 sin(2 pi t)) / (2 pi), V = dG/dt.
  const double c = 0.5;
  const DeformationFamily f = mcduff_deformation([c](double t) { return Point{c * std::cos(2 * kPi * t), 0.0}; }, 2, 64);
  double zerr = 0.0, gerr = 0.0;
  for (int i = 0; i <= f.n; i += 8)
    for (int j = 0; j <= f.n; j += 8) {
      const double s = f.grid[i], t = f.grid[j];
      zerr = std::max(zerr, std::abs(f.at(f.z, i, j)[0] - (t * c * std::cos(2 * kPi * s * t) - 2 * s * c * std::sin(2 * kPi * t) / (2 * kPi))));
      gerr = std::max(gerr, std::abs(f.at(f.g, i, j)[0] - c * (std::sin(2 * kPi * s * t) - s * s * std::sin(2 * kPi * t)) / (2 * kPi)));
    }
  CHECK(zerr < 1e-10);
  CHECK(gerr < 1e-6);
  CHECK(f.sup_x_b == Approx(c));
  CHECK(f.endpoint_residual < 1e-4);
  CHECK(f.g00_residual == 0.0);
  // Dense oracle for sup |V| = sup |c (s cos(2 pi s t) - s^2 cos(2 pi t))|.
  double vmax = 0.0;
  for (int i = 0; i <= 1000; ++i)
    for (int j = 0; j <= 1000; ++j) {
      const double s = i / 1000.0, t = j / 1000.0;
      vmax = std::max(vmax, std::abs(c * (s * std::cos(2 * kPi * s * t) - s * s * std::cos(2 * kPi * t))));
    }
  CHECK(f.sup_v_b == Approx(vmax).epsilon(2e-2));
  CHECK(lem1_bound_residual(f) > 0.0);
  CHECK(f.co1_osc <= f.co1_bound);
}

TEST_CASE("deformation to a path with zero harmonic part") {
  const FlatTorus m(2, 32);
  const Isotopy phi = flow(examples::sum(examples::harmonic_wiggle(Point{0.3, -0.2}),
                                         examples::hamiltonian_bump(0.1, 0.0, 0.3)),
                           100, m);
  const FgeoResult f = fgeo_deformation(phi);
  CHECK(f.harmonic_residual < 1e-6);
  CHECK(f.endpoint_c0 < 1e-6);
  CHECK(f.input_flux < 1e-9);
  CHECK_THROWS(fgeo_deformation(flow(examples::translation(Point{0.2, 0.0}), 50, m)));
}

TEST_CASE("iteration growth") {
  const FlatTorus m(2, 32);
  const GrowthReport g = iteration_growth_check(flow(examples::translation(Point{1.0, 0.0}), 50, m), 3);
  CHECK(g.k0 == Approx(1.0));
  CHECK(g.endpoint_distance < 1e-12);
  REQUIRE(g.rows.size() == 3);
  for (const GrowthRow& r : g.rows) {
    CHECK(r.ratio == Approx(1.0).epsilon(1e-6));
    CHECK(r.flux_error < 1e-6);
    CHECK(r.nontrivial);
  }
  CHECK_THROWS(iteration_growth_check(flow(examples::hamiltonian_loop(0.1), 50, m), 2));
}

TEST_CASE("energy surrogate and Hofer-like norm") {
  const FlatTorus m(2, 64);
  const EnergySurrogate id = energy_surrogate(candidate_family(identity_path(m, 50), {0.05}, false, 50));
  CHECK(id.e0 == 0.0);
  const Isotopy direct = flow(examples::hamiltonian_shear(0.5), 100, m);
  const auto fam = candidate_family(direct, {0.05}, true, 100);
  const EnergySurrogate e = energy_surrogate(fam);
  CHECK(e.e0 <= e.l1.front());
  CHECK(e.e0 == Approx(0.5 / kPi).epsilon(1e-6));
  for (const Candidate& cand : fam) CHECK(c0_distance(GridMap(cand.path.time_one()), direct.time_one()) < 1e-5);
  const HLNorm n = hl_norm(fam);
  CHECK(n.norm_hl == Approx(0.5 * (n.forward.e0 + n.backward.e0)));
  CHECK(n.norm_hl > 0.0);
  CHECK(energy_invariance_residual(fam, {identity_path(m, 100)}) < 1e-9);
  CHECK_THROWS(energy_surrogate({}));
}

TEST_CASE("shrinking sequence") {
  const FlatTorus m(2, 32);
  const TimeField x = examples::sum(examples::hamiltonian_bump(0.1, 0.1, 0.2), examples::harmonic_wiggle(Point{0.2, 0.1}));
  const auto seq = shrinking_sequence(x, m, {2, 4, 8}, 100);
  REQUIRE(seq.size() == 3);
  for (const SequenceRow& r : seq) {
    CHECK(r.linf == Approx(1.0 / r.n).epsilon(1e-9));
    CHECK(r.psi_h <= r.psi_bound + 1e-9);
    CHECK(r.rho_ratio <= r.rho_bound + 1e-9);
  }
  CHECK(seq[2].norm_hl < seq[0].norm_hl);
}
