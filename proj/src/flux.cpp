#include "tori/flux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "spectral.hpp"
#include "tori/exterior.hpp"
#include "tori/path_algebra.hpp"

namespace tori {

namespace {

std::size_t slice_at(const Isotopy& phi, double t) {
  std::size_t best = phi.size();
  for (std::size_t k = 0; k < phi.size(); ++k)
    if (std::abs(phi.slices[k].t - t) <= 1e-12) best = k;
  return best;
}

double potential_at(const OneForm& a, const Point& y) {
  return a.potential.v.empty() ? 0.0 : interpolate(a.potential, y);
}

double harmonic_part(const OneForm& a, const Point& disp, int d) {
  double acc = 0.0;
  for (int c = 0; c < d; ++c) acc += a.coeffs[c] * disp[c];
  return acc;
}

bool is_loop(const Isotopy& phi, double tol) { return c0_distance(phi.time_one(), identity_map(phi.torus)) <= tol; }

std::vector<Point> sample_points(const FlatTorus& m, int per_axis) {
  std::vector<Point> pts;
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j) {
      Point p{};
      p[0] = (i + 0.37) / per_axis;
      p[1] = (j + 0.61) / per_axis;
      for (int c = 2; c < m.dim(); ++c) p[c] = 0.3;
      pts.push_back(p);
    }
  return pts;
}

}  // namespace

Orbit orbit_of(const Isotopy& phi, const Point& x) {
  const int d = phi.torus.dim();
  Orbit o;
  o.base = x;
  const bool vel = phi.has_velocity();
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const Point p = phi.apply(k, x);
    o.t.push_back(phi.slices[k].t);
    o.path.push_back(p);
    if (vel) {
      double sp = 0.0;
      for (int c = 0; c < d; ++c) {
        const double e = interpolate((*phi.slices[k].vel)[c], p);
        sp += e * e;
      }
      o.length += phi.slices[k].weight * std::sqrt(sp);
    } else if (k > 0) {
      double seg = 0.0;
      for (int c = 0; c < d; ++c) seg += std::pow(p[c] - o.path[k - 1][c], 2);
      o.length += std::sqrt(seg);
    }
  }
  for (int c = 0; c < d; ++c) {
    o.net[c] = o.path.back()[c] - x[c];
    o.winding.push_back(std::lround(o.net[c]));
    o.winding_defect = std::max(o.winding_defect, std::abs(o.net[c] - o.winding.back()));
  }
  return o;
}

bool contractible(const Orbit& o) {
  return std::all_of(o.winding.begin(), o.winding.end(), [](long w) { return w == 0; });
}

ScalarField flux_function(const OneForm& alpha, const Isotopy& phi, double t) {
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  if (alpha.coexact_residual > 1e-6) throw std::invalid_argument("flux function needs a closed form");
  if (t < -1e-12 || t > 1.0 + 1e-12) throw std::out_of_range("time outside [0, 1]");
  const std::size_t k = slice_at(phi, t);
  ScalarField out(m);
  detail::parallel_for(m.size(), [&](std::size_t i) {
    const Point x = m.point(i);
    Point y{}, disp{};
    if (k < phi.size()) {
      for (int c = 0; c < d; ++c) {
        disp[c] = (*phi.slices[k].disp)[c].v[i];
        y[c] = x[c] + disp[c];
      }
    } else {
      y = phi.eval(t, x);
      for (int c = 0; c < d; ++c) disp[c] = y[c] - x[c];
    }
    double v = harmonic_part(alpha, disp, d);
    if (!alpha.potential.v.empty()) v += potential_at(alpha, y) - alpha.potential.v[i];
    out.v[i] = v;
  });
  return out;
}

ScalarField flux_function_quadrature(const OneForm& alpha, const Isotopy& phi_in, double t) {
  const FlatTorus& m = phi_in.torus;
  const int d = m.dim();
  const std::size_t k = slice_at(phi_in, t);
  if (k == phi_in.size()) throw std::invalid_argument("quadrature flux function needs a slice time");
  for (std::size_t j = 1; j <= k; ++j)
    if (phi_in.slices[j].segment != phi_in.slices[0].segment)
      throw std::invalid_argument("quadrature flux function needs a single segment");
  const Isotopy phi = with_velocity(phi_in);
  const double h = k > 0 ? phi.slices[1].sigma - phi.slices[0].sigma : 0.0;
  const auto w = cumulative_weights(static_cast<int>(k), h);
  FieldSamples grad_f;
  if (!alpha.potential.v.empty()) grad_f = gradient(alpha.potential);
  ScalarField out(m);
  detail::parallel_for(m.size(), [&](std::size_t i) {
    const Point x = m.point(i);
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (w[j] == 0.0) continue;
      const Slice& s = phi.slices[j];
      Point p{};
      for (int c = 0; c < d; ++c) p[c] = x[c] + (*s.disp)[c].v[i];
      double val = 0.0;
      for (int c = 0; c < d; ++c) {
        double a = alpha.coeffs[c];
        if (!grad_f.empty()) a += interpolate(grad_f[c], p);
        val += a * interpolate((*s.vel)[c], p);
      }
      acc += w[j] * val;
    }
    out.v[i] = acc;
  });
  return out;
}

double flux_pde_residual(const OneForm& alpha, const Isotopy& phi, double t) {
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  const std::size_t k = slice_at(phi, t);
  if (k == phi.size()) throw std::invalid_argument("PDE residual needs a slice time");
  const ScalarField f = flux_function_quadrature(alpha, phi, t);
  const FieldSamples df = gradient(f);
  // phi_t^* alpha - alpha = sum_i c_i dD_i + d(F o phi_t - F).
  FieldSamples pull(d, ScalarField(m));
  const FieldSamples& disp = *phi.slices[k].disp;
  for (int i = 0; i < d; ++i) {
    const FieldSamples g = gradient(disp[i]);
    for (int j = 0; j < d; ++j)
      for (std::size_t p = 0; p < m.size(); ++p) pull[j].v[p] += alpha.coeffs[i] * g[j].v[p];
  }
  if (!alpha.potential.v.empty()) {
    // Differentiating a cubic interpolant loses an order; the trigonometric one does not.
    const detail::TrigInterpolant pot(alpha.potential);
    ScalarField fp(m);
    detail::parallel_for(m.size(), [&](std::size_t p) {
      Point y = m.point(p);
      for (int c = 0; c < d; ++c) y[c] += disp[c].v[p];
      fp.v[p] = pot(y) - alpha.potential.v[p];
    });
    const FieldSamples g = gradient(fp);
    for (int j = 0; j < d; ++j)
      for (std::size_t p = 0; p < m.size(); ++p) pull[j].v[p] += g[j].v[p];
  }
  double r = 0.0;
  for (int j = 0; j < d; ++j)
    for (std::size_t p = 0; p < m.size(); ++p) r = std::max(r, std::abs(df[j].v[p] - pull[j].v[p]));
  return r;
}

FluxClass flux_class(const Isotopy& phi, double tol) {
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  FluxClass f;
  const FieldSamples& disp = *phi.back().disp;
  for (int c = 0; c < d; ++c) f.pairings.push_back(m.volume() * disp[c].mean());
  std::vector<FieldSamples> grads;
  for (int c = 0; c < d; ++c) grads.push_back(gradient(disp[c]));
  double defect = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double j[4][4];
    for (int c = 0; c < d; ++c)
      for (int l = 0; l < d; ++l) j[c][l] = (c == l ? 1.0 : 0.0) + grads[c][l].v[i];
    defect = std::max(defect, std::abs(detail::small_det(j, d) - 1.0));
  }
  if (defect > tol) {
    std::ostringstream s;
    s << "time-one map not volume preserving: max |det - 1| = " << defect;
    f.warning = s.str();
  }
  return f;
}

std::vector<FluxClass> flux_lattice_generators(const FlatTorus& m, int steps) {
  std::vector<FluxClass> out;
  for (int i = 0; i < m.dim(); ++i) {
    Point e{};
    e[i] = 1.0;
    TimeField x{m.dim(), FieldKind::harmonic, "unit", [e](double, const Point&) { return e; }};
    out.push_back(flux_class(flow(x, steps, m)));
  }
  return out;
}

CocycleResult cocycle_residual(const Isotopy& phi, const Isotopy& psi, const OneForm& alpha, int samples,
                               int stride) {
  if (!phi.torus.same_grid(psi.torus)) throw DimensionError("torus mismatch");
  if (!phi.field) throw std::invalid_argument("cocycle residual needs phi generated by a field");
  if (phi.size() != psi.size()) throw std::invalid_argument("cocycle residual needs a shared time grid");
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  const int steps = static_cast<int>(phi.size()) - 1;
  CocycleResult res;
  for (int j = 1; j <= samples; ++j) {
    const std::size_t k = static_cast<std::size_t>(std::lround(static_cast<double>(j) * steps / samples));
    const double t = phi.slices[k].t;
    const detail::TrigInterpolant fphi(flux_function(alpha, phi, t));
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Index mi = m.multi_index(i);
      bool keep = true;
      for (int c = 0; c < d; ++c) keep = keep && (mi[c] % stride == 0);
      if (keep) idx.push_back(i);
    }
    std::vector<double> r(idx.size());
    detail::parallel_for(idx.size(), [&](std::size_t q) {
      const std::size_t i = idx[q];
      const Point x = m.point(i);
      Point y{};
      for (int c = 0; c < d; ++c) y[c] = x[c] + (*psi.slices[k].disp)[c].v[i];
      const Point z = integrate_point(*phi.field, y, 0.0, t, static_cast<int>(k));
      Point dz{}, dy{};
      for (int c = 0; c < d; ++c) {
        dz[c] = z[c] - x[c];
        dy[c] = y[c] - x[c];
      }
      const double f0 = alpha.potential.v.empty() ? 0.0 : alpha.potential.v[i];
      const double composite = harmonic_part(alpha, dz, d) + potential_at(alpha, z) - f0;
      const double inner = harmonic_part(alpha, dy, d) + potential_at(alpha, y) - f0;
      r[q] = std::abs(composite - inner - fphi(y));
    });
    const double mx = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
    res.per_time.push_back(mx);
    res.residual = std::max(res.residual, mx);
  }
  return res;
}

std::vector<FactorizationRow> factorization1_check(const std::function<OneForm(double)>& alpha_t, const Isotopy& phi,
                                                   const std::vector<double>& ts) {
  const FlatTorus& m = phi.torus;
  const int steps = std::max(50, static_cast<int>(phi.size()) - 1);
  std::vector<FactorizationRow> rows;
  for (double t : ts) {
    const OneForm a = alpha_t(t);
    FactorizationRow row;
    row.t = t;
    row.lhs = integrate(m, flux_function(a, phi, t));
    const Isotopy bar = phi.field ? flow_window(*phi.field, steps, m, 0.0, t) : [&] {
      // s -> phi_{s t} by resampling the stored path.
      Isotopy r = resample(phi, steps);
      for (auto& s : r.slices) {
        auto disp = std::make_shared<FieldSamples>(m.dim(), ScalarField(m));
        for (std::size_t i = 0; i < m.size(); ++i) {
          const Point x = m.point(i);
          const Point y = phi.eval(s.t * t, x);
          for (int c = 0; c < m.dim(); ++c) (*disp)[c].v[i] = y[c] - x[c];
        }
        s.disp = disp;
        s.vel = nullptr;
      }
      return r;
    }();
    row.rhs = poincare_pair(a.cohomology(), flux_class(bar));
    rows.push_back(row);
  }
  return rows;
}

Factorization2Result factorization2_check(const Isotopy& phi) {
  const FlatTorus& m = phi.torus;
  if (m.dim() != 4 || !m.symplectic()) throw StructureError("factorization check needs the symplectic T^4");
  const Isotopy full = with_velocity(phi);
  Factorization2Result r;
  r.lhs = flux_class(full).pairings;
  r.flux_omega.assign(4, 0.0);
  for (const Slice& s : full.slices) {
    // iota is linear, so the mean of iota(E) omega is iota(mean E) omega.
    const double mx[4] = {(*s.vel)[0].mean(), (*s.vel)[1].mean(), (*s.vel)[2].mean(), (*s.vel)[3].mean()};
    const Point b = contract_symplectic(Point{mx[0], mx[1], mx[2], mx[3]}, 4);
    for (int c = 0; c < 4; ++c) r.flux_omega[c] += s.weight * b[c];
  }
  const ConstForm flux3 = ConstForm::one_form(r.flux_omega).wedge(ConstForm::symplectic(4));
  for (int i = 0; i < 4; ++i) {
    std::vector<double> e(4, 0.0);
    e[i] = 1.0;
    const double top = ConstForm::one_form(e).wedge(flux3).coefficient(0xF);
    r.rhs.push_back(m.volume() * top);
  }
  for (int i = 0; i < 4; ++i) r.residual = std::max(r.residual, std::abs(r.lhs[i] - r.rhs[i]));
  return r;
}

ConstancyResult loop_orbit_constancy(const Isotopy& phi, const OneForm& alpha, int samples_per_axis, double loop_tol) {
  if (!is_loop(phi, loop_tol)) throw PreconditionError("orbit constancy needs a loop (phi_1 = id)");
  const FlatTorus& m = phi.torus;
  ConstancyResult r;
  r.value = poincare_pair(alpha.cohomology(), flux_class(phi)) / m.volume();
  for (const Point& x : sample_points(m, samples_per_axis)) {
    const Orbit o = orbit_of(phi, x);
    r.deviation = std::max(r.deviation, std::abs(line_integral(alpha, o.path) - r.value));
    ++r.samples;
  }
  return r;
}

OrbitVerdict flux_equality_via_orbits(const Isotopy& phi, const Isotopy& psi, const Point& z0, double tol) {
  if (c0_distance(phi.time_one(), psi.time_one()) > tol) throw PreconditionError("isotopies have different endpoints");
  const int d = phi.torus.dim();
  const double vol = phi.torus.volume();
  OrbitVerdict v;
  const Orbit a = orbit_of(phi, z0), b = orbit_of(psi, z0);
  v.flux_phi = flux_class(phi);
  v.flux_psi = flux_class(psi);
  v.contractible = true;
  for (int c = 0; c < d; ++c) {
    v.winding_difference.push_back(std::lround(b.net[c] - a.net[c]));
    v.contractible = v.contractible && v.winding_difference.back() == 0;
    const double ds = v.flux_phi.pairings[c] - v.flux_psi.pairings[c];
    const double dn = a.net[c] - b.net[c];
    v.flux_gap = std::max(v.flux_gap, std::abs(ds));
    v.signed_plus = std::max(v.signed_plus, std::abs(ds + vol * dn));
    v.signed_minus = std::max(v.signed_minus, std::abs(ds - vol * dn));
  }
  v.consistent = v.contractible ? v.flux_gap <= tol : std::min(v.signed_plus, v.signed_minus) <= tol;
  return v;
}

OrderVerdict order_cycle_test(const Isotopy& phi, int r, const Point& x, double tol) {
  if (r < 1) throw std::invalid_argument("order must be positive");
  const FlatTorus& m = phi.torus;
  const GridMap one = phi.time_one();
  GridMap power = one;
  for (int i = 1; i < r; ++i) power = compose(one, power);
  OrderVerdict v;
  v.order_defect = c0_distance(power, identity_map(m));
  if (v.order_defect > tol) throw PreconditionError("time-one map is not of the given order");
  const Isotopy cycle = r == 1 ? phi : iterate(phi, r);
  const Orbit o = orbit_of(cycle, x);
  v.cycle_winding = o.winding;
  v.contractible = contractible(o);
  v.flux = flux_class(phi);
  double norm = 0.0;
  for (int c = 0; c < m.dim(); ++c) {
    norm = std::max(norm, std::abs(v.flux.pairings[c]));
    v.or1_residual = std::max(v.or1_residual, std::abs(v.flux.pairings[c] - m.volume() * o.net[c] / r));
  }
  v.zero_flux = norm <= tol;
  v.consistent = v.zero_flux == v.contractible;
  return v;
}

RigidityReport rigidity_experiment(const std::vector<Isotopy>& sequence, const Isotopy& gamma,
                                   const std::vector<Point>& points, double tol) {
  RigidityReport rep;
  bool flux_ok = true, converging = true;
  for (const Isotopy& p : sequence) {
    const FluxClass f = flux_class(p);
    double n = 0.0;
    for (double v : f.pairings) n = std::max(n, std::abs(v));
    rep.flux_norms.push_back(n);
    flux_ok = flux_ok && n <= tol;
    rep.distances.push_back(c0_distance(p, gamma));
  }
  for (std::size_t i = 1; i < rep.distances.size(); ++i)
    converging = converging && rep.distances[i] <= rep.distances[i - 1] + 1e-12;
  if (!rep.distances.empty())
    converging = converging && (rep.distances.back() <= 1e-6 || rep.distances.back() <= 0.25 * rep.distances.front());
  const bool loop = is_loop(gamma, tol);
  rep.hypothesis_met = flux_ok && converging && loop;
  if (!flux_ok) rep.hypothesis_note = "sequence has nonzero flux";
  else if (!converging) rep.hypothesis_note = "sequence does not converge to the limit";
  else if (!loop) rep.hypothesis_note = "limit is not a loop";
  rep.all_contractible = true;
  for (const Point& x : points) {
    const Orbit o = orbit_of(gamma, x);
    rep.windings.push_back(o.winding);
    rep.all_contractible = rep.all_contractible && contractible(o);
  }
  return rep;
}

}  // namespace tori
