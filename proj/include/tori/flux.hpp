#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tori/flows.hpp"

namespace tori {

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Orbit {
  Point base{};
  std::vector<double> t;
  std::vector<Point> path;      // lifted samples phi_{t_k}(x)
  Point net{};                  // lifted displacement at t = 1
  std::vector<long> winding;    // rounded net displacement
  double winding_defect = 0.0;  // max |net_i - winding_i|
  double length = 0.0;          // speed quadrature when velocities exist, else polyline
};

Orbit orbit_of(const Isotopy& phi, const Point& x);
bool contractible(const Orbit& o);

// F_alpha(Phi)(t) via the orbit line integral; t is matched to a slice when possible.
ScalarField flux_function(const OneForm& alpha, const Isotopy& phi, double t);
// Time quadrature of phi_s^*(alpha(phidot_s)) over [0, t]; t must be a slice time.
ScalarField flux_function_quadrature(const OneForm& alpha, const Isotopy& phi, double t);
// max |dF - (phi_t^* alpha - alpha)| on the grid.
double flux_pde_residual(const OneForm& alpha, const Isotopy& phi, double t);

FluxClass flux_class(const Isotopy& phi, double tol = 1e-6);
// Fluxes of the coordinate translation loops; they generate the lattice Gamma.
std::vector<FluxClass> flux_lattice_generators(const FlatTorus& m, int steps = 50);

struct CocycleResult {
  double residual = 0.0;
  std::vector<double> per_time;
};
// Both isotopies must come from flow() so phi_t o psi_t can be integrated directly.
CocycleResult cocycle_residual(const Isotopy& phi, const Isotopy& psi, const OneForm& alpha, int samples = 5,
                               int stride = 4);

struct FactorizationRow {
  double t = 0.0, lhs = 0.0, rhs = 0.0;
  double residual() const { return std::abs(lhs - rhs); }
};
std::vector<FactorizationRow> factorization1_check(const std::function<OneForm(double)>& alpha_t, const Isotopy& phi,
                                                   const std::vector<double>& ts);

struct Factorization2Result {
  std::vector<double> lhs;  // S_{Omega_0}(Phi) pairings with [dx_i]
  std::vector<double> rhs;  // from Flux_omega(Phi) ^ [omega]
  std::vector<double> flux_omega;
  double residual = 0.0;
};
Factorization2Result factorization2_check(const Isotopy& phi);

struct ConstancyResult {
  double value = 0.0;
  double deviation = 0.0;
  std::size_t samples = 0;
};
ConstancyResult loop_orbit_constancy(const Isotopy& phi, const OneForm& alpha, int samples_per_axis = 10,
                                     double loop_tol = 1e-6);

struct OrbitVerdict {
  std::vector<long> winding_difference;
  bool contractible = false;
  FluxClass flux_phi, flux_psi;
  double flux_gap = 0.0;     // max |S(Phi) - S(Psi)|
  double signed_plus = 0.0;  // residuals of the signed identity, both orientations
  double signed_minus = 0.0;
  bool consistent = false;   // contractible => equal fluxes; else gap matches the winding
};
OrbitVerdict flux_equality_via_orbits(const Isotopy& phi, const Isotopy& psi, const Point& z0, double tol = 1e-6);

struct OrderVerdict {
  std::vector<long> cycle_winding;
  FluxClass flux;
  double or1_residual = 0.0;
  double order_defect = 0.0;
  bool zero_flux = false;
  bool contractible = false;
  bool consistent = false;
};
OrderVerdict order_cycle_test(const Isotopy& phi, int r, const Point& x, double tol = 1e-6);

struct RigidityReport {
  bool hypothesis_met = false;
  std::string hypothesis_note;
  std::vector<double> flux_norms;
  std::vector<double> distances;
  std::vector<std::vector<long>> windings;
  bool all_contractible = false;
};
RigidityReport rigidity_experiment(const std::vector<Isotopy>& sequence, const Isotopy& gamma,
                                   const std::vector<Point>& points, double tol = 1e-6);

}  // namespace tori
