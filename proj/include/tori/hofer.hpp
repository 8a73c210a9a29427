#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tori/flows.hpp"

namespace tori {

struct LengthReport {
  double l1_length = 0.0;    // int osc(U_t) + |H_t| dt
  double linf_length = 0.0;  // max_t
  double hofer_l1 = 0.0;     // harmonic part dropped
  double hofer_linf = 0.0;
  std::vector<double> t, osc, harmonic;  // per-slice traces in t-units
  double generator_residual = 0.0;
};
LengthReport lengths(const Isotopy& phi, double tol = 1e-5);

// osc(U_X) + |H_X| for iota(X) omega = dU_X + H_X; throws StructureError if X is not symplectic.
double vector_field_B_norm(const FieldSamples& x, double tol = 1e-6);

struct HodgeSplit {
  Isotopy rho;        // translations by the cumulative harmonic part
  Isotopy remainder;  // rho_t^{-1} o phi_t
  std::vector<Point> shift;
  std::vector<double> remainder_flux;
};
HodgeSplit hodge_split_isotopy(const Isotopy& phi, double tol = 1e-6);

// Constant-in-space harmonic family X_t on T^d; Z, G, V sampled on an (n+1)^2 grid in (s, t).
struct DeformationFamily {
  int dim = 2;
  int n = 64;
  std::vector<double> grid;         // s_i = t_i = i / n
  std::vector<Point> z, g, v;       // index i * (n + 1) + j for (s_i, t_j); g is the translation vector
  double mean_flux = 0.0;           // |int_0^1 X_t dt|, l1
  double sup_x_b = 0.0;             // sup_t |X_t|_B
  double sup_v_b = 0.0;             // sup_{s,t} |V_{s,t}|_B
  double g00_residual = 0.0;
  double endpoint_residual = 0.0;   // max_s |G_{s,1} - int_0^s X|
  double co1_osc = 0.0;
  double co1_bound = 0.0;
  const Point& at(const std::vector<Point>& f, int i, int j) const { return f[i * (n + 1) + j]; }
};
DeformationFamily mcduff_deformation(const std::function<Point(double)>& x, int dim = 2, int n = 64,
                                     double tol = 1e-6);
// 6 sup|X|_B - sup|V| / (1 + sup|V|).
double lem1_bound_residual(const DeformationFamily& f);

struct FgeoResult {
  Isotopy path;
  double input_flux = 0.0;
  double harmonic_residual = 0.0;  // max_t |H_t| of the output generator
  double endpoint_c0 = 0.0;
  double theta_end = 0.0;          // |int_0^1 X| of the correcting translation at t = 1
};
FgeoResult fgeo_deformation(const Isotopy& phi, double tol = 1e-6);

struct GrowthRow {
  int l = 0;
  double l1 = 0.0, linf = 0.0, ratio = 0.0;
  double flux_error = 0.0;  // max_i |S(Psi^l)_i - l S(Psi)_i|
  bool nontrivial = false;  // S(Psi^l) != 0
};
struct GrowthReport {
  std::vector<double> flux;
  int axis = 0;
  double k0 = 0.0;
  double endpoint_distance = 0.0;  // d_C0(psi_1, id)
  double linf_base = 0.0;
  std::vector<GrowthRow> rows;
};
GrowthReport iteration_growth_check(const Isotopy& psi, int max_l, double tol = 1e-6);

struct Candidate {
  std::string label;
  Isotopy path;
};
struct EnergySurrogate {
  std::vector<std::string> family;
  std::vector<double> l1, linf;
  double e0 = 0.0, e0_inf = 0.0;
  std::size_t argmin = 0, argmin_inf = 0;
};
EnergySurrogate energy_surrogate(const std::vector<Candidate>& family);

// Direct path, left-concatenations with Hamiltonian loops of the given amplitudes,
// a zero-length loop and, when `lattice` is set, the coordinate translation loops.
std::vector<Candidate> candidate_family(const Isotopy& direct, const std::vector<double>& loop_amps, bool lattice,
                                        int steps);
std::vector<Candidate> inverse_family(const std::vector<Candidate>& family);

struct HLNorm {
  EnergySurrogate forward, backward;
  double norm_hl = 0.0, norm_hl_inf = 0.0;
};
HLNorm hl_norm(const std::vector<Candidate>& family);

// |min l_B over the family - min l_B over loop *_l candidate|; the identity loop must be among `loops`.
double energy_invariance_residual(const std::vector<Candidate>& family, const std::vector<Isotopy>& loops);

struct NormComparison {
  double lhs = 0.0;
  double norm_h = 0.0, rho_h = 0.0, psi_h = 0.0;
  double e0_inf = 0.0, norm_hl = 0.0;
  double margin6 = 0.0, margin72_5 = 0.0, margin28_8 = 0.0;  // C * rhs + eps - lhs
  bool loop_corrected = false;  // the best candidate needed a lattice-loop correction
  std::string chosen;
  std::string note;
};
// The family must end at a Hamiltonian phi; nonzero-flux members are corrected by the translation loop of
// their (integral) flux.
NormComparison norm_comparison_check(const std::vector<Candidate>& family, double eps, double tol = 1e-6);

struct SequenceRow {
  int n = 0;
  double linf = 0.0;
  double rho_ratio = 0.0, rho_bound = 0.0;  // ||rho_1||/(1+||rho_1||) vs 6/N
  double psi_h = 0.0, psi_bound = 0.0;      // ||psi_1|| vs 1/N
  double norm_hl = 0.0, norm_h = 0.0;
};
// Phi_N = flow of X rescaled so l_B^inf(Phi_N) = 1/N.
std::vector<SequenceRow> shrinking_sequence(const TimeField& x, const FlatTorus& m, const std::vector<int>& ns,
                                            int steps);

}  // namespace tori
