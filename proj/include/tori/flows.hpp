#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tori/torus.hpp"

namespace tori {

enum class FieldKind { conservative, symplectic, hamiltonian, harmonic, general };
std::string to_string(FieldKind k);

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InversionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimeField {
  int dim = 2;
  FieldKind kind = FieldKind::general;
  std::string name;
  std::function<Point(double, const Point&)> eval;

  Point operator()(double t, const Point& x) const { return eval(t, x); }
};

// One time node of an isotopy. `sigma` is an internal parameter (the base time
// of the path the slice was built from); `rate` = dsigma/dt. `vel` is the
// Eulerian sigma-velocity, so the t-velocity is rate * vel.
struct Slice {
  double t = 0.0;
  double sigma = 0.0;
  double rate = 1.0;
  double weight = 0.0;  // sigma-quadrature weight
  int segment = 0;
  std::shared_ptr<const FieldSamples> disp;
  std::shared_ptr<const FieldSamples> vel;
};

// A single diffeomorphism isotopic to the identity, stored as a periodic
// lifted displacement x -> x + D(x).
struct GridMap {
  FlatTorus torus;
  FieldSamples disp;

  Point apply(const Point& x) const;
  Point displacement(const Point& x) const;
};

class Isotopy {
 public:
  FlatTorus torus;
  std::vector<Slice> slices;
  std::string provenance;
  std::shared_ptr<const TimeField> field;  // generating field in t, if known

  std::size_t size() const { return slices.size(); }
  const Slice& back() const { return slices.back(); }
  bool has_velocity() const;

  Point apply(std::size_t k, const Point& x) const;  // lifted phi_{t_k}(x)
  Point eval(double t, const Point& x) const;         // lifted phi_t(x), cubic in t
  GridMap at(std::size_t k) const;
  GridMap time_one() const { return at(size() - 1); }
  std::vector<double> times() const;
};

// Simpson weights for even intervals, trapezoid otherwise; sums to `length`.
std::vector<double> quadrature_weights(int intervals, double length = 1.0);

// 4th-order weights for the integral over uniform nodes 0..k with spacing h:
// Simpson, closing with a 3/8 panel when k is odd.
std::vector<double> cumulative_weights(int k, double h);

Isotopy identity_path(const FlatTorus& m, int steps);
// Classical RK4 per grid point on a uniform time grid with K steps.
Isotopy flow(const TimeField& x, int steps, const FlatTorus& m);
// Flow on [t0, t1] of the field X rescaled in time; used for s -> phi_{s t}.
Isotopy flow_window(const TimeField& x, int steps, const FlatTorus& m, double t0, double t1);
// RK4 from an arbitrary start point over [t0, t1]; returns the lifted end point.
Point integrate_point(const TimeField& x, const Point& start, double t0, double t1, int steps);

// Solves iota(X) omega = dH with a spectral gradient of the sampled H(t, .).
TimeField hamiltonian_field(const std::function<double(double, const Point&)>& h, const FlatTorus& m);

FieldSamples velocity(const Isotopy& phi, double t);  // Eulerian d/dt at time t

struct GeneratorPair {
  // Generator of the sigma-velocity of each slice; multiply by rate for d/dt.
  std::vector<double> t;
  std::vector<double> rate;
  std::vector<double> weight;
  std::vector<ScalarField> u;               // mean-zero
  std::vector<std::vector<double>> harmonic;  // coefficients in {dx_i}
  double residual = 0.0;                     // max coexact residual
};
GeneratorPair generator_of(const Isotopy& phi);

GridMap compose(const GridMap& a, const GridMap& b);  // a o b
GridMap inverse(const GridMap& a, double tol = 1e-9);
double c0_distance(const GridMap& a, const GridMap& b);
GridMap translation_map(const FlatTorus& m, const Point& v);
GridMap identity_map(const FlatTorus& m);

Isotopy inverse(const Isotopy& phi, double tol = 1e-9);
// Pointwise composition t -> phi_t o psi_t on a shared time grid.
Isotopy compose(const Isotopy& phi, const Isotopy& psi);
// Fills missing slice velocities from finite differences in sigma.
Isotopy with_velocity(const Isotopy& phi);
Isotopy resample(const Isotopy& phi, int steps);
double c0_distance(const Isotopy& phi, const Isotopy& psi);

struct ConservationReport {
  double det_defect = 0.0;   // max |det D phi_t - 1|
  double divergence = 0.0;   // max |div phidot_t|
  double tolerance = 1e-8;
  bool flagged() const { return det_defect > tolerance || divergence > tolerance; }
};
ConservationReport verify_conservative(const Isotopy& phi, double tol = 1e-8);

// Solves x + D(x) = y by damped Newton; throws InversionError on failure.
Point invert_point(const FieldSamples& disp, const Point& y, double tol = 1e-9);

}  // namespace tori
