#include "tori/hofer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"
#include "spectral.hpp"
#include "tori/examples.hpp"
#include "tori/flux.hpp"
#include "tori/path_algebra.hpp"

namespace tori {

namespace {

double l1(const Point& p, int d) {
  double acc = 0.0;
  for (int c = 0; c < d; ++c) acc += std::abs(p[c]);
  return acc;
}

Point integral_of(const std::function<Point(double)>& x, double t, int d, int pieces = 512) {
  Point acc{};
  const double h = t / pieces;
  for (int k = 0; k <= pieces; ++k) {
    const double w = (k == 0 || k == pieces) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const Point v = x(k * h);
    for (int c = 0; c < d; ++c) acc[c] += w * h / 3.0 * v[c];
  }
  return acc;
}

// 4th-order first derivative at node j of uniform samples f[0..n].
template <class Get>
double ddt(Get f, int j, int n, double h) {
  if (j >= 2 && j <= n - 2) return (f(j - 2) - 8.0 * f(j - 1) + 8.0 * f(j + 1) - f(j + 2)) / (12.0 * h);
  if (j < 2) {
    return (-25.0 * f(j) + 48.0 * f(j + 1) - 36.0 * f(j + 2) + 16.0 * f(j + 3) - 3.0 * f(j + 4)) / (12.0 * h);
  }
  return (25.0 * f(j) - 48.0 * f(j - 1) + 36.0 * f(j - 2) - 16.0 * f(j - 3) + 3.0 * f(j - 4)) / (12.0 * h);
}

Point translation_part(const Point& s, int d) {
  Point out{};
  for (int c = 0; c < d; ++c) out[c] = s[c] - std::floor(s[c] + 0.5);
  return out;
}

TimeField unit_translation(const Point& v, int d) { return examples::translation(v, d); }

}  // namespace

LengthReport lengths(const Isotopy& phi, double tol) {
  const GeneratorPair g = generator_of(phi);
  if (g.residual > tol) {
    std::ostringstream s;
    s << "generator residual " << g.residual << " above tolerance " << tol;
    throw StructureError(s.str());
  }
  LengthReport r;
  r.generator_residual = g.residual;
  for (std::size_t k = 0; k < g.t.size(); ++k) {
    const double osc = g.u[k].osc();
    const double hn = harmonic_norm(g.harmonic[k]);
    r.t.push_back(g.t[k]);
    r.osc.push_back(g.rate[k] * osc);
    r.harmonic.push_back(g.rate[k] * hn);
    // The weights integrate in the internal parameter, where the generator is the sigma-velocity.
    r.l1_length += g.weight[k] * (osc + hn);
    r.hofer_l1 += g.weight[k] * osc;
    r.linf_length = std::max(r.linf_length, g.rate[k] * (osc + hn));
    r.hofer_linf = std::max(r.hofer_linf, g.rate[k] * osc);
  }
  return r;
}

double vector_field_B_norm(const FieldSamples& x, double tol) {
  const FlatTorus& m = x.front().torus;
  const int d = m.dim();
  FieldSamples beta(d, ScalarField(m));
  for (std::size_t i = 0; i < m.size(); ++i) {
    Point v{};
    for (int c = 0; c < d; ++c) v[c] = x[c].v[i];
    const Point b = contract_symplectic(v, d);
    for (int c = 0; c < d; ++c) beta[c].v[i] = b[c];
  }
  const OneForm f = hodge_decompose(beta);
  if (f.coexact_residual > tol) throw StructureError("vector field is not symplectic");
  return f.potential.osc() + harmonic_norm(f.coeffs);
}

HodgeSplit hodge_split_isotopy(const Isotopy& phi_in, double tol) {
  const Isotopy phi = with_velocity(phi_in);
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  const GeneratorPair g = generator_of(phi);
  const std::size_t n = phi.size();

  std::vector<Point> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    Point h{};
    for (int c = 0; c < d; ++c) h[c] = g.harmonic[k][c];
    y[k] = symplectic_dual(h, d);
  }
  // Cumulative shift per segment; the sigma grid is uniform inside each segment.
  std::vector<Point> shift(n);
  Point carried{};
  for (std::size_t b = 0; b < n;) {
    std::size_t e = b;
    while (e + 1 < n && phi.slices[e + 1].segment == phi.slices[b].segment) ++e;
    const int len = static_cast<int>(e - b);
    const double h = len > 0 ? (phi.slices[e].sigma - phi.slices[b].sigma) / len : 0.0;
    for (int j = 0; j <= len; ++j) {
      const auto w = cumulative_weights(j, h);
      Point s = carried;
      for (int q = 0; q <= j; ++q)
        for (int c = 0; c < d; ++c) s[c] += w[q] * y[b + q][c];
      shift[b + j] = s;
    }
    carried = shift[e];
    b = e + 1;
  }

  HodgeSplit out;
  out.shift = shift;
  out.rho.torus = out.remainder.torus = m;
  out.rho.provenance = "harmonic(" + phi.provenance + ")";
  out.remainder.provenance = "remainder(" + phi.provenance + ")";
  for (std::size_t k = 0; k < n; ++k) {
    const Slice& s = phi.slices[k];
    Slice r = s, q = s;
    auto rd = std::make_shared<FieldSamples>(d, ScalarField(m));
    auto rv = std::make_shared<FieldSamples>(d, ScalarField(m));
    auto qd = std::make_shared<FieldSamples>(d, ScalarField(m));
    auto qv = std::make_shared<FieldSamples>(d, ScalarField(m));
    for (int c = 0; c < d; ++c) {
      std::fill(rd->at(c).v.begin(), rd->at(c).v.end(), shift[k][c]);
      std::fill(rv->at(c).v.begin(), rv->at(c).v.end(), y[k][c]);
      qd->at(c).v = (*s.disp)[c].v;
      for (double& v : qd->at(c).v) v -= shift[k][c];
      qv->at(c) = detail::shift_field((*s.vel)[c], shift[k]);
      for (double& v : qv->at(c).v) v -= y[k][c];
    }
    r.disp = rd;
    r.vel = rv;
    q.disp = qd;
    q.vel = qv;
    out.rho.slices.push_back(r);
    out.remainder.slices.push_back(q);
  }
  out.remainder_flux = flux_class(out.remainder).pairings;
  double worst = 0.0;
  for (double f : out.remainder_flux) worst = std::max(worst, std::abs(f));
  if (worst > tol * std::max(1.0, l1(shift.back(), d)))
    throw StructureError("remainder of the Hodge split has nonzero flux");
  return out;
}

DeformationFamily mcduff_deformation(const std::function<Point(double)>& x, int dim, int n, double tol) {
  if (n < 8 || n % 2) throw std::invalid_argument("deformation grid must be even and >= 8");
  DeformationFamily f;
  f.dim = dim;
  f.n = n;
  const double h = 1.0 / n;
  for (int i = 0; i <= n; ++i) f.grid.push_back(i * h);
  const Point total = integral_of(x, 1.0, dim);
  f.mean_flux = l1(total, dim);
  if (f.mean_flux > tol) throw PreconditionError("harmonic family has nonzero mean flux");
  for (int k = 0; k <= 8 * n; ++k) f.sup_x_b = std::max(f.sup_x_b, l1(x(k / (8.0 * n)), dim));

  std::vector<Point> a(n + 1);
  for (int j = 0; j <= n; ++j) a[j] = integral_of(x, f.grid[j], dim);
  const std::size_t sz = static_cast<std::size_t>(n + 1) * (n + 1);
  f.z.assign(sz, Point{});
  f.g.assign(sz, Point{});
  f.v.assign(sz, Point{});
  auto id = [n](int i, int j) { return static_cast<std::size_t>(i) * (n + 1) + j; };

  detail::parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const double s = f.grid[i];
    for (int j = 0; j <= n; ++j) {
      const double t = f.grid[j];
      const Point xv = x(s * t);
      for (int c = 0; c < dim; ++c) f.z[id(i, j)][c] = t * xv[c] - 2.0 * s * a[j][c];
    }
  });
  detail::parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int i = 0; i <= n; ++i) {
      const auto w = cumulative_weights(i, h);
      Point acc{};
      for (int q = 0; q <= i; ++q)
        for (int c = 0; c < dim; ++c) acc[c] += w[q] * f.z[id(q, j)][c];
      f.g[id(i, j)] = acc;
    }
  });
  detail::parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j <= n; ++j)
      for (int c = 0; c < dim; ++c)
        f.v[id(i, j)][c] = ddt([&](int q) { return f.g[id(i, q)][c]; }, j, n, h);
  });
  for (const Point& v : f.v) f.sup_v_b = std::max(f.sup_v_b, l1(v, dim));
  f.g00_residual = l1(f.g[id(0, 0)], dim);
  for (int i = 0; i <= n; ++i) {
    const Point target = integral_of(x, f.grid[i], dim);
    Point diff{};
    for (int c = 0; c < dim; ++c) diff[c] = f.g[id(i, n)][c] - target[c];
    f.endpoint_residual = std::max(f.endpoint_residual, l1(diff, dim));
  }
  // omega(Z, V) is constant on M for constant fields, so every s-integral of it has zero oscillation.
  f.co1_osc = 0.0;
  f.co1_bound = 6.0 * f.sup_v_b * f.sup_x_b;
  return f;
}

double lem1_bound_residual(const DeformationFamily& f) {
  return 6.0 * f.sup_x_b - f.sup_v_b / (1.0 + f.sup_v_b);
}

FgeoResult fgeo_deformation(const Isotopy& phi, double tol) {
  FgeoResult r;
  for (double v : flux_class(phi).pairings) r.input_flux = std::max(r.input_flux, std::abs(v));
  if (r.input_flux > tol) throw PreconditionError("deformation to a Hamiltonian isotopy needs zero flux");
  const HodgeSplit split = hodge_split_isotopy(phi, tol);
  r.path = split.remainder;
  r.path.provenance = "fgeo(" + phi.provenance + ")";
  r.theta_end = l1(split.shift.back(), phi.torus.dim());
  const GeneratorPair g = generator_of(r.path);
  for (std::size_t k = 0; k < g.t.size(); ++k)
    r.harmonic_residual = std::max(r.harmonic_residual, g.rate[k] * harmonic_norm(g.harmonic[k]));
  r.endpoint_c0 = c0_distance(r.path.time_one(), phi.time_one());
  return r;
}

GrowthReport iteration_growth_check(const Isotopy& psi, int max_l, double tol) {
  const FlatTorus& m = psi.torus;
  GrowthReport rep;
  rep.flux = flux_class(psi).pairings;
  for (int i = 0; i < m.dim(); ++i)
    if (std::abs(rep.flux[i]) > std::abs(rep.flux[rep.axis])) rep.axis = i;
  rep.k0 = std::abs(rep.flux[rep.axis]) / m.volume();
  if (rep.k0 <= tol) throw PreconditionError("iteration growth needs nonzero flux");
  rep.endpoint_distance = c0_distance(psi.time_one(), identity_map(m));
  rep.linf_base = lengths(psi).linf_length;
  for (int l = 1; l <= max_l; ++l) {
    const Isotopy p = iterate(psi, l);
    const LengthReport len = lengths(p);
    const auto f = flux_class(p).pairings;
    GrowthRow row;
    row.l = l;
    row.l1 = len.l1_length;
    row.linf = len.linf_length;
    row.ratio = len.l1_length / l;
    for (int i = 0; i < m.dim(); ++i) {
      row.flux_error = std::max(row.flux_error, std::abs(f[i] - l * rep.flux[i]));
      row.nontrivial = row.nontrivial || std::abs(f[i]) > tol;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

EnergySurrogate energy_surrogate(const std::vector<Candidate>& family) {
  if (family.empty()) throw std::invalid_argument("empty candidate family");
  EnergySurrogate e;
  e.e0 = e.e0_inf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < family.size(); ++k) {
    const LengthReport r = lengths(family[k].path);
    e.family.push_back(family[k].label);
    e.l1.push_back(r.l1_length);
    e.linf.push_back(r.linf_length);
    if (r.l1_length < e.e0) {
      e.e0 = r.l1_length;
      e.argmin = k;
    }
    if (r.linf_length < e.e0_inf) {
      e.e0_inf = r.linf_length;
      e.argmin_inf = k;
    }
  }
  return e;
}

std::vector<Candidate> candidate_family(const Isotopy& direct, const std::vector<double>& loop_amps, bool lattice,
                                        int steps) {
  const FlatTorus& m = direct.torus;
  std::vector<Candidate> out;
  out.push_back({"direct", direct});
  out.push_back({"identity-loop", concat_left(identity_path(m, steps), direct)});
  for (double a : loop_amps) {
    std::ostringstream s;
    s << "hamiltonian-loop(" << a << ")";
    out.push_back({s.str(), concat_left(flow(examples::hamiltonian_loop(a), steps, m), direct)});
  }
  if (lattice) {
    for (int i = 0; i < m.dim(); ++i) {
      Point e{};
      e[i] = 1.0;
      out.push_back({"lattice-loop(e" + std::to_string(i) + ")",
                     concat_left(flow(unit_translation(e, m.dim()), steps, m), direct)});
    }
  }
  return out;
}

std::vector<Candidate> inverse_family(const std::vector<Candidate>& family) {
  std::vector<Candidate> out;
  for (const Candidate& c : family) out.push_back({"inverse(" + c.label + ")", inverse(c.path)});
  return out;
}

HLNorm hl_norm(const std::vector<Candidate>& family) {
  HLNorm n;
  n.forward = energy_surrogate(family);
  n.backward = energy_surrogate(inverse_family(family));
  n.norm_hl = 0.5 * (n.forward.e0 + n.backward.e0);
  n.norm_hl_inf = 0.5 * (n.forward.e0_inf + n.backward.e0_inf);
  return n;
}

double energy_invariance_residual(const std::vector<Candidate>& family, const std::vector<Isotopy>& loops) {
  if (loops.empty()) throw std::invalid_argument("empty loop family");
  const double plain = energy_surrogate(family).e0;
  double concat = std::numeric_limits<double>::infinity();
  for (const Candidate& c : family)
    for (const Isotopy& l : loops) concat = std::min(concat, lengths(concat_left(l, c.path)).l1_length);
  return std::abs(plain - concat);
}

NormComparison norm_comparison_check(const std::vector<Candidate>& family, double eps, double tol) {
  if (family.empty()) throw std::invalid_argument("empty candidate family");
  const FlatTorus& m = family.front().path.torus;
  const int d = m.dim();
  NormComparison r;
  const EnergySurrogate all = energy_surrogate(family);
  r.e0_inf = all.e0_inf;
  r.norm_hl = hl_norm(family).norm_hl;

  struct Zero {
    std::string label;
    Isotopy path;
    bool corrected;
  };
  std::vector<Zero> zero;
  for (const Candidate& c : family) {
    const auto f = flux_class(c.path).pairings;
    Point s{};
    bool nonzero = false;
    for (int i = 0; i < d; ++i) {
      s[i] = f[i] / m.volume();
      if (std::abs(s[i] - std::round(s[i])) > tol)
        throw PreconditionError("candidate '" + c.label + "' has non-lattice flux; endpoint is not Hamiltonian");
      s[i] = std::round(s[i]);
      nonzero = nonzero || s[i] != 0.0;
    }
    if (!nonzero) {
      zero.push_back({c.label, c.path, false});
    } else {
      const Isotopy loop = flow(unit_translation(s, d), static_cast<int>(c.path.size()) - 1, m);
      zero.push_back({"corrected(" + c.label + ")", concat_left(inverse(loop), c.path), true});
    }
  }

  double best_inf = std::numeric_limits<double>::infinity();
  const Zero* chosen = nullptr;
  r.norm_h = std::numeric_limits<double>::infinity();
  for (const Zero& z : zero) {
    const LengthReport len = lengths(z.path);
    const HodgeSplit split = hodge_split_isotopy(z.path, tol);
    r.norm_h = std::min(r.norm_h, lengths(split.remainder).hofer_linf);
    if (len.linf_length < best_inf) {
      best_inf = len.linf_length;
      chosen = &z;
    }
  }
  const HodgeSplit split = hodge_split_isotopy(chosen->path, tol);
  if (l1(translation_part(split.shift.back(), d), d) > tol)
    throw PreconditionError("harmonic factor of the chosen path does not end at the identity");
  r.rho_h = 0.0;
  r.psi_h = lengths(split.remainder).hofer_linf;
  r.chosen = chosen->label;
  r.loop_corrected = chosen->corrected;
  r.lhs = (r.norm_h + r.rho_h * r.psi_h) / (1.0 + r.rho_h);
  r.margin6 = 6.0 * r.e0_inf + eps - r.lhs;
  r.margin72_5 = 72.0 / 5.0 * r.e0_inf + eps - r.lhs;
  r.margin28_8 = 144.0 / 5.0 * r.norm_hl + eps - r.lhs;
  r.note =
      "right-hand sides use family minima, which overestimate the infima; the left side uses Hofer lengths of "
      "family paths, which overestimate the norms";
  return r;
}

std::vector<SequenceRow> shrinking_sequence(const TimeField& x, const FlatTorus& m, const std::vector<int>& ns,
                                            int steps) {
  const Isotopy base = flow(x, steps, m);
  for (double f : flux_class(base).pairings)
    if (std::abs(f) > 1e-6) throw PreconditionError("shrinking sequence needs a zero-flux field");
  const double l = lengths(base).linf_length;
  if (l <= 0.0) throw PreconditionError("shrinking sequence needs a nonzero field");
  std::vector<SequenceRow> rows;
  for (int n : ns) {
    const Isotopy p = flow(examples::scaled(x, 1.0 / (n * l)), steps, m);
    const HodgeSplit split = hodge_split_isotopy(p);
    SequenceRow row;
    row.n = n;
    row.linf = lengths(p).linf_length;
    const double rho = l1(translation_part(split.shift.back(), m.dim()), m.dim());
    if (rho > 1e-6) throw PreconditionError("harmonic factor does not close up");
    row.rho_ratio = 0.0;
    row.rho_bound = 6.0 / n;
    row.psi_h = lengths(split.remainder).hofer_linf;
    row.psi_bound = 1.0 / n;
    row.norm_hl = hl_norm({{"direct", p}}).norm_hl;
    row.norm_h = row.psi_h;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tori
