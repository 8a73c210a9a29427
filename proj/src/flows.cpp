#include "tori/flows.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "parallel.hpp"

namespace tori {

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::conservative: return "conservative";
    case FieldKind::symplectic: return "symplectic";
    case FieldKind::hamiltonian: return "hamiltonian";
    case FieldKind::harmonic: return "harmonic";
    case FieldKind::general: return "general";
  }
  return "general";
}

namespace {

using detail::parallel_for;

std::shared_ptr<FieldSamples> zero_samples(const FlatTorus& m) {
  return std::make_shared<FieldSamples>(m.dim(), ScalarField(m));
}

Point interp_vec(const FieldSamples& f, const Point& y, int d) {
  Point out{};
  for (int c = 0; c < d; ++c) out[c] = interpolate(f[c], y);
  return out;
}

void check_finite(const Point& v, int d, double t) {
  for (int c = 0; c < d; ++c)
    if (!std::isfinite(v[c])) {
      std::ostringstream msg;
      msg << "non-finite field value at t = " << t;
      throw IntegrationError(msg.str());
    }
}

std::string slice_tag(std::size_t k, double t) {
  std::ostringstream s;
  s << "slice " << k << " (t = " << t << ")";
  return s.str();
}

}  // namespace

Point GridMap::displacement(const Point& x) const { return interp_vec(disp, x, torus.dim()); }

Point GridMap::apply(const Point& x) const {
  Point d = displacement(x);
  for (int c = 0; c < torus.dim(); ++c) d[c] += x[c];
  return d;
}

bool Isotopy::has_velocity() const {
  return std::all_of(slices.begin(), slices.end(), [](const Slice& s) { return static_cast<bool>(s.vel); });
}

Point Isotopy::apply(std::size_t k, const Point& x) const {
  Point d = interp_vec(*slices.at(k).disp, x, torus.dim());
  for (int c = 0; c < torus.dim(); ++c) d[c] += x[c];
  return d;
}

GridMap Isotopy::at(std::size_t k) const { return GridMap{torus, *slices.at(k).disp}; }

std::vector<double> Isotopy::times() const {
  std::vector<double> t;
  for (const auto& s : slices) t.push_back(s.t);
  return t;
}

Point Isotopy::eval(double t, const Point& x) const {
  if (t < -1e-12 || t > 1.0 + 1e-12) throw std::out_of_range("time outside [0, 1]");
  const int d = torus.dim();
  std::size_t b = 1;
  while (b + 1 < slices.size() && slices[b].t < t) ++b;
  std::size_t a = b - 1;
  while (a > 0 && slices[a].t >= slices[b].t) --a;
  const Slice& sa = slices[a];
  const Slice& sb = slices[b];
  const double h = sb.t - sa.t;
  const Point da = interp_vec(*sa.disp, x, d);
  const Point db = interp_vec(*sb.disp, x, d);
  Point out{};
  if (h <= 0.0) {
    for (int c = 0; c < d; ++c) out[c] = x[c] + db[c];
    return out;
  }
  const double s = std::clamp((t - sa.t) / h, 0.0, 1.0);
  if (sa.vel && sb.vel) {
    Point pa{}, pb{};
    for (int c = 0; c < d; ++c) {
      pa[c] = x[c] + da[c];
      pb[c] = x[c] + db[c];
    }
    const Point va = interp_vec(*sa.vel, pa, d);
    const Point vb = interp_vec(*sb.vel, pb, d);
    const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
    for (int c = 0; c < d; ++c)
      out[c] = x[c] + h00 * da[c] + h10 * h * sa.rate * va[c] + h01 * db[c] + h11 * h * sb.rate * vb[c];
    return out;
  }
  for (int c = 0; c < d; ++c) out[c] = x[c] + (1 - s) * da[c] + s * db[c];
  return out;
}

std::vector<double> quadrature_weights(int intervals, double length) {
  if (intervals < 1) throw std::invalid_argument("need at least one interval");
  const double h = length / intervals;
  std::vector<double> w(intervals + 1, h);
  if (intervals % 2 == 0) {
    for (int k = 0; k <= intervals; ++k) w[k] = h / 3.0 * ((k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0));
  } else {
    w.front() = w.back() = h / 2.0;
  }
  return w;
}

Isotopy identity_path(const FlatTorus& m, int steps) {
  Isotopy iso;
  iso.torus = m;
  iso.provenance = "identity";
  const auto w = quadrature_weights(steps);
  auto zero = zero_samples(m);
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    iso.slices.push_back(Slice{t, t, 1.0, w[k], 0, zero, zero});
  }
  TimeField f{m.dim(), FieldKind::harmonic, "zero", [](double, const Point&) { return Point{}; }};
  iso.field = std::make_shared<TimeField>(f);
  return iso;
}

Point integrate_point(const TimeField& x, const Point& start, double t0, double t1, int steps) {
  const int d = x.dim;
  const double h = (t1 - t0) / steps;
  Point y = start;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    Point k1 = x(t, y), tmp{};
    check_finite(k1, d, t);
    for (int c = 0; c < d; ++c) tmp[c] = y[c] + 0.5 * h * k1[c];
    Point k2 = x(t + 0.5 * h, tmp);
    for (int c = 0; c < d; ++c) tmp[c] = y[c] + 0.5 * h * k2[c];
    Point k3 = x(t + 0.5 * h, tmp);
    for (int c = 0; c < d; ++c) tmp[c] = y[c] + h * k3[c];
    Point k4 = x(t + h, tmp);
    check_finite(k4, d, t + h);
    for (int c = 0; c < d; ++c) y[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
  }
  check_finite(y, d, t1);
  return y;
}

Isotopy flow_window(const TimeField& x, int steps, const FlatTorus& m, double t0, double t1) {
  if (steps < 50) throw std::invalid_argument("flow needs at least 50 time steps");
  if (x.dim != m.dim()) throw DimensionError("field dimension does not match torus");
  const int d = m.dim();
  const std::size_t np = m.size();
  const double span = t1 - t0;
  const double h = span / steps;
  const auto w = quadrature_weights(steps);

  std::vector<Point> y(np);
  for (std::size_t i = 0; i < np; ++i) y[i] = m.point(i);

  auto sample_vel = [&](double t) {
    auto v = zero_samples(m);
    parallel_for(np, [&](std::size_t i) {
      const Point e = x(t, m.point(i));
      check_finite(e, d, t);
      for (int c = 0; c < d; ++c) (*v)[c].v[i] = span * e[c];
    });
    return v;
  };

  Isotopy iso;
  iso.torus = m;
  iso.provenance = "flow:" + x.name;
  iso.field = std::make_shared<TimeField>(x);
  iso.slices.reserve(steps + 1);
  iso.slices.push_back(Slice{0.0, 0.0, 1.0, w[0], 0, zero_samples(m), sample_vel(t0)});

  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    parallel_for(np, [&](std::size_t i) {
      Point& p = y[i];
      Point k1 = x(t, p), tmp{};
      check_finite(k1, d, t);
      for (int c = 0; c < d; ++c) tmp[c] = p[c] + 0.5 * h * k1[c];
      Point k2 = x(t + 0.5 * h, tmp);
      for (int c = 0; c < d; ++c) tmp[c] = p[c] + 0.5 * h * k2[c];
      Point k3 = x(t + 0.5 * h, tmp);
      for (int c = 0; c < d; ++c) tmp[c] = p[c] + h * k3[c];
      Point k4 = x(t + h, tmp);
      check_finite(k4, d, t + h);
      for (int c = 0; c < d; ++c) p[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
    });
    auto disp = zero_samples(m);
    for (std::size_t i = 0; i < np; ++i) {
      const Point x0 = m.point(i);
      for (int c = 0; c < d; ++c) {
        if (!std::isfinite(y[i][c])) throw IntegrationError("non-finite orbit at " + slice_tag(k + 1, t + h));
        (*disp)[c].v[i] = y[i][c] - x0[c];
      }
    }
    const double s = static_cast<double>(k + 1) / steps;
    iso.slices.push_back(Slice{s, s, 1.0, w[k + 1], 0, disp, sample_vel(t0 + (k + 1) * h)});
  }
  if (t0 != 0.0 || t1 != 1.0) {
    // The stored field is the rescaled one so that flow(field) reproduces the path.
    TimeField scaled = x;
    auto base = std::make_shared<TimeField>(x);
    scaled.eval = [base, t0, span](double s, const Point& p) {
      Point e = (*base)(t0 + s * span, p);
      for (double& c : e) c *= span;
      return e;
    };
    iso.field = std::make_shared<TimeField>(scaled);
  }
  return iso;
}

Isotopy flow(const TimeField& x, int steps, const FlatTorus& m) { return flow_window(x, steps, m, 0.0, 1.0); }

TimeField hamiltonian_field(const std::function<double(double, const Point&)>& h, const FlatTorus& m) {
  if (!m.symplectic() || m.dim() % 2 != 0) throw StructureError("hamiltonian field needs a symplectic torus");
  struct Cache {
    std::mutex mu;
    std::map<double, std::shared_ptr<const FieldSamples>> fields;
  };
  auto cache = std::make_shared<Cache>();
  auto grid_field = [h, m, cache](double t) {
    {
      std::lock_guard<std::mutex> lock(cache->mu);
      auto it = cache->fields.find(t);
      if (it != cache->fields.end()) return it->second;
    }
    const ScalarField hs = sample(m, [&](const Point& p) { return h(t, p); });
    const FieldSamples g = gradient(hs);
    auto x = std::make_shared<FieldSamples>(m.dim(), ScalarField(m));
    for (int i = 0; i + 1 < m.dim(); i += 2)
      for (std::size_t k = 0; k < m.size(); ++k) {
        (*x)[i].v[k] = g[i + 1].v[k];
        (*x)[i + 1].v[k] = -g[i].v[k];
      }
    std::lock_guard<std::mutex> lock(cache->mu);
    if (cache->fields.size() > 16) cache->fields.erase(cache->fields.begin());
    cache->fields[t] = x;
    return std::shared_ptr<const FieldSamples>(x);
  };
  TimeField f;
  f.dim = m.dim();
  f.kind = FieldKind::hamiltonian;
  f.name = "hamiltonian";
  f.eval = [grid_field, m](double t, const Point& x) { return interp_vec(*grid_field(t), x, m.dim()); };
  return f;
}

Point invert_point(const FieldSamples& disp, const Point& y, double tol) {
  const int d = static_cast<int>(disp.size());
  Point x = y;
  {
    const Point d0 = interp_vec(disp, y, d);
    for (int c = 0; c < d; ++c) x[c] = y[c] - d0[c];
  }
  auto residual = [&](const Point& p, Point& r, bool want_jac, double j[4][4]) {
    double nr = 0.0;
    for (int c = 0; c < d; ++c) {
      Point g{};
      const double val = want_jac ? interpolate_grad(disp[c], p, g) : interpolate(disp[c], p);
      r[c] = p[c] + val - y[c];
      nr = std::max(nr, std::abs(r[c]));
      if (want_jac)
        for (int k = 0; k < d; ++k) j[c][k] = (c == k ? 1.0 : 0.0) + g[k];
    }
    return nr;
  };
  for (int it = 0; it < 60; ++it) {
    Point r{};
    double j[4][4];
    const double nr = residual(x, r, true, j);
    if (nr <= tol) return x;
    double step[4] = {r[0], r[1], r[2], r[3]};
    if (!detail::small_solve(j, step, d)) break;
    double lam = 1.0;
    Point xn = x;
    for (int b = 0; b < 30; ++b) {
      for (int c = 0; c < d; ++c) xn[c] = x[c] - lam * step[c];
      Point rn{};
      if (residual(xn, rn, false, j) < nr) break;
      lam *= 0.5;
    }
    x = xn;
  }
  Point r{};
  double j[4][4];
  if (residual(x, r, false, j) <= tol) return x;
  throw InversionError("inverse map did not converge (fold-over?)");
}

GridMap compose(const GridMap& a, const GridMap& b) {
  if (!a.torus.same_grid(b.torus)) throw DimensionError("torus mismatch");
  const FlatTorus& m = a.torus;
  const int d = m.dim();
  GridMap out{m, FieldSamples(d, ScalarField(m))};
  parallel_for(m.size(), [&](std::size_t i) {
    const Point x = m.point(i);
    Point bx{};
    for (int c = 0; c < d; ++c) bx[c] = x[c] + b.disp[c].v[i];
    const Point da = interp_vec(a.disp, bx, d);
    for (int c = 0; c < d; ++c) out.disp[c].v[i] = b.disp[c].v[i] + da[c];
  });
  return out;
}

GridMap inverse(const GridMap& a, double tol) {
  const FlatTorus& m = a.torus;
  const int d = m.dim();
  GridMap out{m, FieldSamples(d, ScalarField(m))};
  parallel_for(m.size(), [&](std::size_t i) {
    const Point y = m.point(i);
    const Point x = invert_point(a.disp, y, tol);
    for (int c = 0; c < d; ++c) out.disp[c].v[i] = x[c] - y[c];
  });
  return out;
}

double c0_distance(const GridMap& a, const GridMap& b) {
  if (!a.torus.same_grid(b.torus)) throw DimensionError("torus mismatch");
  const int d = a.torus.dim();
  double best = 0.0;
  for (std::size_t i = 0; i < a.torus.size(); ++i) {
    Point p{}, q{};
    for (int c = 0; c < d; ++c) {
      p[c] = a.disp[c].v[i];
      q[c] = b.disp[c].v[i];
    }
    best = std::max(best, flat_distance(p, q, d));
  }
  return best;
}

GridMap translation_map(const FlatTorus& m, const Point& v) {
  GridMap g{m, FieldSamples(m.dim(), ScalarField(m))};
  for (int c = 0; c < m.dim(); ++c) std::fill(g.disp[c].v.begin(), g.disp[c].v.end(), v[c]);
  return g;
}

GridMap identity_map(const FlatTorus& m) { return translation_map(m, Point{}); }

Isotopy inverse(const Isotopy& phi, double tol) {
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  Isotopy out;
  out.torus = m;
  out.provenance = "inverse(" + phi.provenance + ")";
  out.slices.resize(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const Slice& s = phi.slices[k];
    Slice r = s;
    auto disp = zero_samples(m);
    try {
      parallel_for(m.size(), [&](std::size_t i) {
        const Point y = m.point(i);
        const Point x = invert_point(*s.disp, y, tol);
        for (int c = 0; c < d; ++c) (*disp)[c].v[i] = x[c] - y[c];
      });
    } catch (const InversionError& e) {
      throw InversionError(std::string(e.what()) + " at " + slice_tag(k, s.t));
    }
    r.disp = disp;
    if (s.vel) {
      // E_inv(w) = -D phi(w)^{-1} E(phi(w)).
      std::vector<FieldSamples> grads;
      for (int c = 0; c < d; ++c) grads.push_back(gradient((*s.disp)[c]));
      auto vel = zero_samples(m);
      parallel_for(m.size(), [&](std::size_t i) {
        const Point w = m.point(i);
        Point pw{};
        double j[4][4];
        for (int c = 0; c < d; ++c) {
          pw[c] = w[c] + (*s.disp)[c].v[i];
          for (int l = 0; l < d; ++l) j[c][l] = (c == l ? 1.0 : 0.0) + grads[c][l].v[i];
        }
        const Point e = interp_vec(*s.vel, pw, d);
        double rhs[4] = {e[0], e[1], e[2], e[3]};
        if (!detail::small_solve(j, rhs, d)) throw InversionError("singular Jacobian at " + slice_tag(k, s.t));
        for (int c = 0; c < d; ++c) (*vel)[c].v[i] = -rhs[c];
      });
      r.vel = vel;
    }
    out.slices[k] = r;
  }
  return out;
}

namespace {

bool same_times(const Isotopy& a, const Isotopy& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a.slices[k].t - b.slices[k].t) > 1e-12) return false;
  return true;
}

bool uniform_times(const std::vector<double>& t) {
  const double h = (t.back() - t.front()) / (t.size() - 1);
  for (std::size_t k = 0; k < t.size(); ++k)
    if (std::abs(t[k] - (t.front() + k * h)) > 1e-12) return false;
  return true;
}

std::vector<double> weights_for_times(const std::vector<double>& t) {
  if (uniform_times(t)) return quadrature_weights(static_cast<int>(t.size()) - 1, t.back() - t.front());
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double h = t[k + 1] - t[k];
    w[k] += h / 2;
    w[k + 1] += h / 2;
  }
  return w;
}

// Derivative weights at z of the Lagrange interpolant through nodes x.
std::vector<double> lagrange_derivative(const std::vector<double>& x, double z) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double denom = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) denom *= x[i] - x[j];
    double num = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      double prod = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && j != k) prod *= z - x[j];
      num += prod;
    }
    w[i] = num / denom;
  }
  return w;
}

}  // namespace

Isotopy compose(const Isotopy& phi, const Isotopy& psi) {
  if (!phi.torus.same_grid(psi.torus)) throw DimensionError("torus mismatch");
  if (!same_times(phi, psi)) throw std::invalid_argument("pointwise composition needs a shared time grid");
  const FlatTorus& m = phi.torus;
  Isotopy out;
  out.torus = m;
  out.provenance = "compose(" + phi.provenance + "," + psi.provenance + ")";
  const auto t = phi.times();
  const auto w = weights_for_times(t);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const GridMap c = compose(phi.at(k), psi.at(k));
    Slice s{t[k], t[k], 1.0, w[k], 0, std::make_shared<FieldSamples>(c.disp), nullptr};
    out.slices.push_back(s);
  }
  return out;
}

Isotopy with_velocity(const Isotopy& phi) {
  if (phi.has_velocity()) return phi;
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  Isotopy out = phi;
  const std::size_t n = phi.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (phi.slices[k].vel) continue;
    const int seg = phi.slices[k].segment;
    std::size_t lo = k, hi = k;
    while (lo > 0 && phi.slices[lo - 1].segment == seg) --lo;
    while (hi + 1 < n && phi.slices[hi + 1].segment == seg) ++hi;
    if (hi - lo < 4) throw std::invalid_argument("segment too short for velocity reconstruction");
    std::size_t a = (k < lo + 2) ? lo : k - 2;
    if (a + 4 > hi) a = hi - 4;
    std::vector<double> nodes;
    for (std::size_t j = a; j < a + 5; ++j) nodes.push_back(phi.slices[j].sigma);
    const auto wd = lagrange_derivative(nodes, phi.slices[k].sigma);
    FieldSamples lag(d, ScalarField(m));
    for (std::size_t j = 0; j < 5; ++j)
      for (int c = 0; c < d; ++c)
        for (std::size_t i = 0; i < m.size(); ++i) lag[c].v[i] += wd[j] * (*phi.slices[a + j].disp)[c].v[i];
    auto vel = zero_samples(m);
    const FieldSamples& disp = *phi.slices[k].disp;
    try {
      parallel_for(m.size(), [&](std::size_t i) {
        const Point y = m.point(i);
        const Point x = invert_point(disp, y, 1e-10);
        const Point l = interp_vec(lag, x, d);
        for (int c = 0; c < d; ++c) (*vel)[c].v[i] = l[c];
      });
    } catch (const InversionError& e) {
      throw InversionError(std::string(e.what()) + " at " + slice_tag(k, phi.slices[k].t));
    }
    out.slices[k].vel = vel;
  }
  return out;
}

Isotopy resample(const Isotopy& phi, int steps) {
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  Isotopy out;
  out.torus = m;
  out.provenance = "resample(" + phi.provenance + ")";
  out.field = phi.field;
  const auto w = quadrature_weights(steps);
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    auto disp = zero_samples(m);
    parallel_for(m.size(), [&](std::size_t i) {
      const Point x = m.point(i);
      const Point y = phi.eval(t, x);
      for (int c = 0; c < d; ++c) (*disp)[c].v[i] = y[c] - x[c];
    });
    std::shared_ptr<FieldSamples> vel;
    if (phi.field) {
      vel = zero_samples(m);
      for (std::size_t i = 0; i < m.size(); ++i) {
        const Point e = (*phi.field)(t, m.point(i));
        for (int c = 0; c < d; ++c) (*vel)[c].v[i] = e[c];
      }
    }
    out.slices.push_back(Slice{t, t, 1.0, w[k], 0, disp, vel});
  }
  return out;
}

FieldSamples velocity(const Isotopy& phi, double t) {
  if (t < -1e-12 || t > 1.0 + 1e-12) throw std::out_of_range("time outside [0, 1]");
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  if (phi.field) {
    FieldSamples v(d, ScalarField(m));
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Point e = (*phi.field)(t, m.point(i));
      for (int c = 0; c < d; ++c) v[c].v[i] = e[c];
    }
    return v;
  }
  const Isotopy full = with_velocity(phi);
  std::size_t b = 1;
  while (b + 1 < full.size() && full.slices[b].t < t) ++b;
  std::size_t a = b - 1;
  const Slice& sa = full.slices[a];
  const Slice& sb = full.slices[b];
  const double h = sb.t - sa.t;
  const double s = h > 0 ? std::clamp((t - sa.t) / h, 0.0, 1.0) : 1.0;
  FieldSamples v(d, ScalarField(m));
  for (int c = 0; c < d; ++c)
    for (std::size_t i = 0; i < m.size(); ++i)
      v[c].v[i] = (1 - s) * sa.rate * (*sa.vel)[c].v[i] + s * sb.rate * (*sb.vel)[c].v[i];
  return v;
}

GeneratorPair generator_of(const Isotopy& phi) {
  const FlatTorus& m = phi.torus;
  if (!m.symplectic()) throw StructureError("generator needs a symplectic torus");
  const Isotopy full = with_velocity(phi);
  const int d = m.dim();
  GeneratorPair g;
  std::map<const FieldSamples*, std::pair<ScalarField, std::vector<double>>> memo;
  for (const Slice& s : full.slices) {
    auto it = memo.find(s.vel.get());
    if (it == memo.end()) {
      FieldSamples beta(d, ScalarField(m));
      for (std::size_t i = 0; i < m.size(); ++i) {
        Point x{};
        for (int c = 0; c < d; ++c) x[c] = (*s.vel)[c].v[i];
        const Point b = contract_symplectic(x, d);
        for (int c = 0; c < d; ++c) beta[c].v[i] = b[c];
      }
      const OneForm form = hodge_decompose(beta);
      g.residual = std::max(g.residual, form.coexact_residual);
      it = memo.emplace(s.vel.get(), std::make_pair(form.potential, form.coeffs)).first;
    }
    g.t.push_back(s.t);
    g.rate.push_back(s.rate);
    g.weight.push_back(s.weight);
    g.u.push_back(it->second.first);
    g.harmonic.push_back(it->second.second);
  }
  return g;
}

double c0_distance(const Isotopy& phi, const Isotopy& psi) {
  if (!phi.torus.same_grid(psi.torus)) throw DimensionError("torus mismatch");
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  const bool aligned = same_times(phi, psi);
  double best = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    std::vector<double> dist(m.size());
    parallel_for(m.size(), [&](std::size_t i) {
      const Point x = m.point(i);
      Point p{}, q{};
      for (int c = 0; c < d; ++c) p[c] = (*phi.slices[k].disp)[c].v[i];
      if (aligned) {
        for (int c = 0; c < d; ++c) q[c] = (*psi.slices[k].disp)[c].v[i];
      } else {
        const Point y = psi.eval(phi.slices[k].t, x);
        for (int c = 0; c < d; ++c) q[c] = y[c] - x[c];
      }
      dist[i] = flat_distance(p, q, d);
    });
    best = std::max(best, *std::max_element(dist.begin(), dist.end()));
  }
  return best;
}

ConservationReport verify_conservative(const Isotopy& phi, double tol) {
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  ConservationReport rep;
  rep.tolerance = tol;
  const Isotopy full = with_velocity(phi);
  std::map<const FieldSamples*, double> div_memo;
  for (const Slice& s : full.slices) {
    std::vector<FieldSamples> grads;
    for (int c = 0; c < d; ++c) grads.push_back(gradient((*s.disp)[c]));
    for (std::size_t i = 0; i < m.size(); ++i) {
      double j[4][4];
      for (int c = 0; c < d; ++c)
        for (int l = 0; l < d; ++l) j[c][l] = (c == l ? 1.0 : 0.0) + grads[c][l].v[i];
      rep.det_defect = std::max(rep.det_defect, std::abs(detail::small_det(j, d) - 1.0));
    }
    if (!div_memo.count(s.vel.get())) {
      const ScalarField dv = divergence(*s.vel);
      double mx = 0.0;
      for (double v : dv.v) mx = std::max(mx, std::abs(v));
      div_memo[s.vel.get()] = mx;
    }
    rep.divergence = std::max(rep.divergence, s.rate * div_memo[s.vel.get()]);
  }
  return rep;
}

std::vector<double> cumulative_weights(int k, double h) {
  std::vector<double> w(k + 1, 0.0);
  if (k == 0) return w;
  if (k == 1) {
    w[0] = w[1] = h / 2;
    return w;
  }
  const int simpson_end = (k % 2 == 0) ? k : k - 3;
  for (int j = 0; j <= simpson_end && simpson_end > 0; ++j)
    w[j] += h / 3.0 * ((j == 0 || j == simpson_end) ? 1.0 : (j % 2 ? 4.0 : 2.0));
  if (k % 2 == 1) {
    const double c[4] = {1.0, 3.0, 3.0, 1.0};
    for (int j = 0; j < 4; ++j) w[k - 3 + j] += 3.0 * h / 8.0 * c[j];
  }
  return w;
}

}  // namespace tori
