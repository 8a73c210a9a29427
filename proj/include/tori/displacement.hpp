#pragma once

#include <vector>

#include "tori/flows.hpp"

namespace tori {

struct DisplacementField {
  Point base{};
  ScalarField nu;               // nu(z) = Ft(z) - Ft(p)
  ScalarField potential;        // mean-zero primitive Ft of psi^* alpha - alpha
  double potential_at_base = 0.0;
  double exactness_residual = 0.0;
};

// Potential route: Hodge-decompose psi^* alpha - alpha and shift by its value at p.
DisplacementField displacement(const GridMap& psi, const OneForm& alpha, const Point& p, double tol = 1e-6);
// Line integral of psi^* alpha - alpha along the minimal geodesic from p to z (spectral samples).
double displacement_geodesic(const GridMap& psi, const OneForm& alpha, const Point& p, const Point& z,
                             int samples = 65);

// psi^* alpha - alpha sampled componentwise on the grid.
FieldSamples pullback_difference(const GridMap& psi, const OneForm& alpha);

struct TransferResult {
  double residual = 0.0;
  bool hypothesis_met = true;
  std::vector<long> winding;  // of xi - gamma - C as a closed lifted cycle
};
// |int_xi beta - int_gamma beta - int_C beta| for beta = psi^* alpha - alpha; paths are lifted samples.
TransferResult base_point_transfer_residual(const GridMap& psi, const OneForm& alpha, const std::vector<Point>& xi,
                                            const std::vector<Point>& gamma, const std::vector<Point>& c);

struct EnergyValue {
  double value = 0.0;
  std::vector<double> h;
  Point base{};
  bool has_decomposition = false;
  double pairing_term = 0.0;  // <P(H), S(Psi)> / |H|
  double orbit_term = 0.0;    // Vol / |H| * int_{O_p} H
  double gf10_residual = 0.0;
};

EnergyValue energy(const GridMap& psi, const std::vector<double>& h, const Point& p);
EnergyValue energy(const Isotopy& psi, const std::vector<double>& h, const Point& p);

struct DefectResult {
  double defect = 0.0;
  double bound = 0.0;          // 2 A(M)^2
  double exact_law_residual = 0.0;
};
DefectResult composition_defect(const Isotopy& psi, const Isotopy& phi, const std::vector<double>& h, const Point& p);

struct IterationLawResult {
  double residual = 0.0;          // implemented identity
  double literal_residual = 0.0;  // displayed formula taken verbatim (differs for l < 0)
  double energy_power = 0.0;
  double energy_base = 0.0;
};
IterationLawResult iteration_law_residual(const Isotopy& phi, int l, const std::vector<double>& h, const Point& x);

struct ContinuityRow {
  double distance = 0.0;
  double gap = 0.0;
  double bound = 0.0;
  bool skipped = false;  // d >= r
  bool pass = true;
};
std::vector<ContinuityRow> continuity_check(const std::vector<GridMap>& seq, const GridMap& psi,
                                            const std::vector<double>& h, const Point& x, double tol = 1e-6);

struct SeparationReport {
  std::vector<double> flux;
  int best_axis = 0;
  double delta0 = 0.0;
  double distance_time_one = 0.0;
  double distance_path = 0.0;
  bool hypothesis_met = false;
  double min_margin = 0.0;  // min over grid of length - endpoint distance
  std::size_t orbits = 0;
};
SeparationReport separation_check(const Isotopy& phi, int stride = 2, double tol = 1e-6);

}  // namespace tori
