#include "tori/displacement.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "spectral.hpp"
#include "tori/flux.hpp"
#include "tori/path_algebra.hpp"

namespace tori {

namespace {

double h_norm(const std::vector<double>& h) {
  const double n = harmonic_norm(h);
  if (n == 0.0) throw std::invalid_argument("energy needs a nonzero harmonic form");
  return n;
}

double dot(const std::vector<double>& h, const Point& v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) acc += h[i] * v[i];
  return acc;
}

// Spectral evaluation of a displacement field.
struct SpectralMap {
  std::vector<detail::TrigInterpolant> comp;
  int d;
  explicit SpectralMap(const GridMap& g) : d(g.torus.dim()) {
    for (const auto& c : g.disp) comp.emplace_back(c);
  }
  Point disp(const Point& x) const {
    Point out{};
    for (int c = 0; c < d; ++c) out[c] = comp[c](x);
    return out;
  }
  Point apply(const Point& x) const {
    Point out = disp(x);
    for (int c = 0; c < d; ++c) out[c] += x[c];
    return out;
  }
};

// Composite 5-point Gauss-Legendre along the straight segment a -> b.
double segment_integral(const std::vector<detail::TrigInterpolant>& beta, const Point& a, const Point& b, int d,
                        int pieces) {
  static const double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                               0.9061798459386640};
  static const double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  double acc = 0.0;
  for (int p = 0; p < pieces; ++p) {
    for (int q = 0; q < 5; ++q) {
      const double s = (p + 0.5 * (xg[q] + 1.0)) / pieces;
      Point y{};
      for (int c = 0; c < d; ++c) y[c] = a[c] + s * (b[c] - a[c]);
      double v = 0.0;
      for (int c = 0; c < d; ++c) v += beta[c](y) * (b[c] - a[c]);
      acc += 0.5 * wg[q] * v / pieces;
    }
  }
  return acc;
}

double path_integral(const std::vector<detail::TrigInterpolant>& beta, const std::vector<Point>& path, int d) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    double len = 0.0;
    for (int c = 0; c < d; ++c) len += std::pow(path[k + 1][c] - path[k][c], 2);
    const int pieces = std::max(2, static_cast<int>(std::ceil(std::sqrt(len) * 24)));
    acc += segment_integral(beta, path[k], path[k + 1], d, pieces);
  }
  return acc;
}

}  // namespace

FieldSamples pullback_difference(const GridMap& psi, const OneForm& alpha) {
  const FlatTorus& m = psi.torus;
  const int d = m.dim();
  FieldSamples beta(d, ScalarField(m));
  for (int i = 0; i < d; ++i) {
    if (alpha.coeffs[i] == 0.0) continue;
    const FieldSamples g = gradient(psi.disp[i]);
    for (int j = 0; j < d; ++j)
      for (std::size_t p = 0; p < m.size(); ++p) beta[j].v[p] += alpha.coeffs[i] * g[j].v[p];
  }
  if (!alpha.potential.v.empty()) {
    ScalarField fp(m);
    for (std::size_t p = 0; p < m.size(); ++p) {
      Point y = m.point(p);
      for (int c = 0; c < d; ++c) y[c] += psi.disp[c].v[p];
      fp.v[p] = interpolate(alpha.potential, y) - alpha.potential.v[p];
    }
    const FieldSamples g = gradient(fp);
    for (int j = 0; j < d; ++j)
      for (std::size_t p = 0; p < m.size(); ++p) beta[j].v[p] += g[j].v[p];
  }
  return beta;
}

DisplacementField displacement(const GridMap& psi, const OneForm& alpha, const Point& p, double tol) {
  const OneForm split = hodge_decompose(pullback_difference(psi, alpha));
  DisplacementField out;
  out.base = p;
  out.exactness_residual = std::max(harmonic_norm(split.coeffs), split.coexact_residual);
  if (out.exactness_residual > tol)
    throw StructureError("psi^* alpha - alpha is not exact; psi does not come from a conservative isotopy");
  out.potential = split.potential;
  out.potential_at_base = evaluate_spectral(split.potential, p);
  out.nu = split.potential;
  for (double& v : out.nu.v) v -= out.potential_at_base;
  return out;
}

double displacement_geodesic(const GridMap& psi, const OneForm& alpha, const Point& p, const Point& z, int samples) {
  const int d = psi.torus.dim();
  const FieldSamples beta = pullback_difference(psi, alpha);
  std::vector<detail::TrigInterpolant> b;
  for (const auto& c : beta) b.emplace_back(c);
  const auto path = minimal_geodesic(p, z, d, 2);
  return segment_integral(b, path.front(), path.back(), d, std::max(2, samples / 5));
}

TransferResult base_point_transfer_residual(const GridMap& psi, const OneForm& alpha, const std::vector<Point>& xi,
                                            const std::vector<Point>& gamma, const std::vector<Point>& c) {
  if (xi.size() < 2 || gamma.size() < 2 || c.size() < 2) throw std::invalid_argument("paths need 2 samples");
  const int d = psi.torus.dim();
  TransferResult r;
  for (int i = 0; i < d; ++i) {
    const double w = (xi.back()[i] - xi.front()[i]) - (gamma.back()[i] - gamma.front()[i]) -
                     (c.back()[i] - c.front()[i]);
    r.winding.push_back(std::lround(w));
    if (r.winding.back() != 0) r.hypothesis_met = false;
  }
  const FieldSamples beta = pullback_difference(psi, alpha);
  std::vector<detail::TrigInterpolant> b;
  for (const auto& comp : beta) b.emplace_back(comp);
  r.residual = std::abs(path_integral(b, xi, d) - path_integral(b, gamma, d) - path_integral(b, c, d));
  return r;
}

EnergyValue energy(const GridMap& psi, const std::vector<double>& h, const Point& p) {
  const double hn = h_norm(h);
  const DisplacementField nu = displacement(psi, harmonic_form(psi.torus, h), p);
  EnergyValue e;
  e.h = h;
  e.base = p;
  e.value = integrate(psi.torus, nu.nu) / hn;
  return e;
}

EnergyValue energy(const Isotopy& psi, const std::vector<double>& h, const Point& p) {
  EnergyValue e = energy(psi.time_one(), h, p);
  const double hn = h_norm(h);
  const FluxClass f = flux_class(psi);
  e.has_decomposition = true;
  e.pairing_term = poincare_pair(CohomologyClass{h}, f) / hn;
  const Orbit o = orbit_of(psi, p);
  e.orbit_term = psi.torus.volume() * line_integral(harmonic_form(psi.torus, h), o.path) / hn;
  e.gf10_residual = std::abs(e.value - (e.pairing_term - e.orbit_term));
  return e;
}

DefectResult composition_defect(const Isotopy& psi, const Isotopy& phi, const std::vector<double>& h, const Point& p) {
  const double hn = h_norm(h);
  const FlatTorus& m = psi.torus;
  const GridMap a = psi.time_one(), b = phi.time_one();
  const double e_ab = energy(compose(a, b), h, p).value;
  const double e_a = energy(a, h, p).value;
  const double e_b = energy(b, h, p).value;
  DefectResult r;
  r.defect = std::abs(e_ab - e_a - e_b);
  r.bound = 2.0 * m.symplectic_area() * m.symplectic_area();
  const SpectralMap sa(a), sb(b);
  const Point q = sb.apply(p);
  const double orbit_p = dot(h, sa.disp(p));
  const double orbit_q = dot(h, sa.disp(q));
  r.exact_law_residual = std::abs(e_ab - e_a - e_b - m.volume() / hn * (orbit_p - orbit_q));
  return r;
}

IterationLawResult iteration_law_residual(const Isotopy& phi, int l, const std::vector<double>& h, const Point& x) {
  if (l == 0) throw std::invalid_argument("iteration law needs l != 0");
  const double hn = h_norm(h);
  const FlatTorus& m = phi.torus;
  const double vol = m.volume();
  const Isotopy power = iterate(phi, l);
  const Isotopy base = l > 0 ? phi : inverse(phi);
  const int count = std::abs(l);
  const GridMap step = base.time_one();
  const SpectralMap s(step);
  IterationLawResult r;
  r.energy_power = energy(power.time_one(), h, x).value;
  r.energy_base = energy(phi.time_one(), h, x).value;
  const double e_step = l > 0 ? r.energy_base : energy(step, h, x).value;
  double sum = 0.0;
  Point y = x;
  for (int i = 0; i < count; ++i) {
    sum += dot(h, s.disp(y));
    y = s.apply(y);
  }
  const double first = dot(h, s.disp(x));
  const double implemented = count * e_step + vol / hn * (count * first - sum);
  const double literal = l * r.energy_base + vol / hn * (l * first - sum);
  r.residual = std::abs(r.energy_power - implemented);
  r.literal_residual = std::abs(r.energy_power - literal);
  return r;
}

std::vector<ContinuityRow> continuity_check(const std::vector<GridMap>& seq, const GridMap& psi,
                                            const std::vector<double>& h, const Point& x, double tol) {
  const double e = energy(psi, h, x).value;
  const double r = psi.torus.injectivity_radius();
  std::vector<ContinuityRow> rows;
  for (const GridMap& g : seq) {
    ContinuityRow row;
    row.distance = c0_distance(g, psi);
    row.bound = 2.0 * psi.torus.volume() * row.distance;
    if (row.distance >= r) {
      row.skipped = true;
    } else {
      row.gap = std::abs(energy(g, h, x).value - e);
      row.pass = row.gap <= row.bound + tol;
    }
    rows.push_back(row);
  }
  return rows;
}

SeparationReport separation_check(const Isotopy& phi, int stride, double tol) {
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  SeparationReport rep;
  rep.flux = flux_class(phi).pairings;
  double best = 0.0;
  for (int i = 0; i < d; ++i)
    if (std::abs(rep.flux[i]) > best) {
      best = std::abs(rep.flux[i]);
      rep.best_axis = i;
    }
  if (best <= tol) throw PreconditionError("separation check needs nonzero flux");
  rep.delta0 = 0.125 * std::min(m.injectivity_radius(), best / m.volume());
  rep.distance_time_one = c0_distance(phi.time_one(), identity_map(m));
  for (const Slice& s : phi.slices) rep.distance_path = std::max(rep.distance_path, c0_distance(GridMap{m, *s.disp}, identity_map(m)));
  rep.hypothesis_met = rep.distance_time_one < rep.delta0;
  if (!rep.hypothesis_met) return rep;
  rep.min_margin = 1e300;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Index mi = m.multi_index(i);
    bool keep = true;
    for (int c = 0; c < d; ++c) keep = keep && mi[c] % stride == 0;
    if (!keep) continue;
    const Point x = m.point(i);
    const Orbit o = orbit_of(phi, x);
    const double margin = o.length - flat_distance(x, o.path.back(), d);
    rep.min_margin = std::min(rep.min_margin, margin);
    ++rep.orbits;
  }
  return rep;
}

}  // namespace tori
