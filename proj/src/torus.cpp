#include "tori/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spectral.hpp"

namespace tori {

using detail::cplx;

FlatTorus::FlatTorus(int dim, int n, bool symplectic, double volume_scale)
    : dim_(dim), n_(n), symplectic_(symplectic), volume_scale_(volume_scale) {
  if (dim < 2 || dim > kMaxDim) throw DimensionError("torus dimension must be in [2, 4]");
  if (n < 8 || n % 2 != 0) throw DimensionError("grid resolution must be even and >= 8");
  if (symplectic && dim % 2 != 0) throw StructureError("symplectic torus needs even dimension");
  if (!(volume_scale > 0)) throw DimensionError("volume scale must be positive");
  size_ = 1;
  for (int i = 0; i < dim; ++i) size_ *= static_cast<std::size_t>(n);
}

std::size_t FlatTorus::flat_index(const Index& m) const {
  std::size_t idx = 0;
  for (int i = 0; i < dim_; ++i) {
    int k = m[i] % n_;
    if (k < 0) k += n_;
    idx = idx * n_ + static_cast<std::size_t>(k);
  }
  return idx;
}

double ScalarField::mean() const {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}
double ScalarField::min() const { return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end()); }
double ScalarField::max() const { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

ScalarField sample(const FlatTorus& m, const std::function<double(const Point&)>& f) {
  ScalarField s(m);
  for (std::size_t i = 0; i < m.size(); ++i) s.v[i] = f(m.point(i));
  return s;
}

FieldSamples sample_components(const FlatTorus& m, const std::function<Point(const Point&)>& f) {
  FieldSamples out(m.dim(), ScalarField(m));
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Point x = f(m.point(i));
    for (int c = 0; c < m.dim(); ++c) out[c].v[i] = x[c];
  }
  return out;
}

double integrate(const FlatTorus& m, const ScalarField& f) {
  if (!m.same_grid(f.torus) || f.v.size() != m.size()) throw DimensionError("field/grid mismatch");
  return f.mean() * m.volume();
}

namespace {

struct Stencil {
  int base[kMaxDim];
  double w[kMaxDim][4];
  double dw[kMaxDim][4];
};

inline void lagrange_weights(double s, double* w, double* dw) {
  w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
  w[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  w[2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
  w[3] = (s + 1.0) * s * (s - 1.0) / 6.0;
  if (dw) {
    dw[0] = -(3.0 * s * s - 6.0 * s + 2.0) / 6.0;
    dw[1] = (3.0 * s * s - 4.0 * s - 1.0) / 2.0;
    dw[2] = -(3.0 * s * s - 2.0 * s - 2.0) / 2.0;
    dw[3] = (3.0 * s * s - 1.0) / 6.0;
  }
}

Stencil make_stencil(const FlatTorus& m, const Point& y, bool with_derivative) {
  Stencil st{};
  for (int a = 0; a < m.dim(); ++a) {
    const double u = y[a] * m.n();
    const double fl = std::floor(u);
    st.base[a] = static_cast<int>(fl) - 1;
    lagrange_weights(u - fl, st.w[a], with_derivative ? st.dw[a] : nullptr);
  }
  return st;
}

}  // namespace

namespace {

// Wrapped flat offsets of the 4 taps along each axis.
void tap_offsets(const FlatTorus& m, const Stencil& st, std::size_t off[kMaxDim][4]) {
  const int n = m.n();
  std::size_t stride = 1;
  for (int a = m.dim() - 1; a >= 0; --a) {
    for (int j = 0; j < 4; ++j) {
      int k = (st.base[a] + j) % n;
      if (k < 0) k += n;
      off[a][j] = static_cast<std::size_t>(k) * stride;
    }
    stride *= static_cast<std::size_t>(n);
  }
}

}  // namespace

double interpolate(const ScalarField& f, const Point& y) {
  const FlatTorus& m = f.torus;
  const int d = m.dim();
  const Stencil st = make_stencil(m, y, false);
  std::size_t off[kMaxDim][4];
  tap_offsets(m, st, off);
  const double* v = f.v.data();
  if (d == 2) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double* row = v + off[0][i];
      const double r = st.w[1][0] * row[off[1][0]] + st.w[1][1] * row[off[1][1]] + st.w[1][2] * row[off[1][2]] +
                       st.w[1][3] * row[off[1][3]];
      acc += st.w[0][i] * r;
    }
    return acc;
  }
  const int taps = 1 << (2 * d);
  double acc = 0.0;
  for (int c = 0; c < taps; ++c) {
    double w = 1.0;
    std::size_t idx = 0;
    int code = c;
    for (int a = 0; a < d; ++a) {
      const int j = code & 3;
      code >>= 2;
      idx += off[a][j];
      w *= st.w[a][j];
    }
    acc += w * v[idx];
  }
  return acc;
}

double interpolate_grad(const ScalarField& f, const Point& y, Point& grad) {
  const FlatTorus& m = f.torus;
  const int d = m.dim();
  const Stencil st = make_stencil(m, y, true);
  std::size_t off[kMaxDim][4];
  tap_offsets(m, st, off);
  const int taps = 1 << (2 * d);
  double acc = 0.0;
  grad.fill(0.0);
  for (int c = 0; c < taps; ++c) {
    int js[kMaxDim];
    int code = c;
    double w = 1.0;
    std::size_t idx = 0;
    for (int a = 0; a < d; ++a) {
      js[a] = code & 3;
      code >>= 2;
      idx += off[a][js[a]];
      w *= st.w[a][js[a]];
    }
    const double val = f.v[idx];
    acc += w * val;
    for (int g = 0; g < d; ++g) {
      double wg = 1.0;
      for (int a = 0; a < d; ++a) wg *= (a == g) ? st.dw[a][js[a]] : st.w[a][js[a]];
      grad[g] += wg * val * m.n();
    }
  }
  return acc;
}

InterpolationPlan::InterpolationPlan(const FlatTorus& m, std::vector<Point> points)
    : m_(m), points_(std::move(points)) {
  if (m.dim() != 2) return;
  idx_.resize(points_.size());
  w_.resize(points_.size());
  for (std::size_t q = 0; q < points_.size(); ++q) {
    const Stencil st = make_stencil(m, points_[q], false);
    std::size_t off[kMaxDim][4];
    tap_offsets(m, st, off);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        idx_[q][i * 4 + j] = static_cast<std::uint32_t>(off[0][i] + off[1][j]);
        w_[q][i * 4 + j] = st.w[0][i] * st.w[1][j];
      }
  }
}

double InterpolationPlan::operator()(const ScalarField& f, std::size_t q) const {
  if (idx_.empty()) return interpolate(f, points_[q]);
  const double* v = f.v.data();
  const auto& ix = idx_[q];
  const auto& w = w_[q];
  double acc = 0.0;
  for (int k = 0; k < 16; ++k) acc += w[k] * v[ix[k]];
  return acc;
}

double evaluate_spectral(const ScalarField& f, const Point& y) { return detail::TrigInterpolant(f)(y); }

FieldSamples gradient(const ScalarField& f) {
  const FlatTorus& m = f.torus;
  const auto hat = detail::fft_forward(m, f.v);
  FieldSamples out;
  for (int a = 0; a < m.dim(); ++a) {
    std::vector<cplx> g(hat.size());
    for (std::size_t k = 0; k < hat.size(); ++k) {
      const double kappa = detail::derivative_symbol(m.multi_index(k)[a], m.n());
      g[k] = cplx(0.0, kappa) * hat[k];
    }
    ScalarField s(m);
    s.v = detail::fft_inverse(m, std::move(g));
    out.push_back(std::move(s));
  }
  return out;
}

ScalarField divergence(const FieldSamples& x) {
  if (x.empty()) throw DimensionError("empty vector field");
  const FlatTorus& m = x[0].torus;
  if (static_cast<int>(x.size()) != m.dim()) throw DimensionError("component count mismatch");
  std::vector<cplx> acc(m.size(), 0.0);
  for (int a = 0; a < m.dim(); ++a) {
    const auto hat = detail::fft_forward(m, x[a].v);
    for (std::size_t k = 0; k < hat.size(); ++k) {
      const double kappa = detail::derivative_symbol(m.multi_index(k)[a], m.n());
      acc[k] += cplx(0.0, kappa) * hat[k];
    }
  }
  ScalarField s(m);
  s.v = detail::fft_inverse(m, std::move(acc));
  return s;
}

OneForm harmonic_form(const FlatTorus& m, const std::vector<double>& coeffs) {
  if (static_cast<int>(coeffs.size()) != m.dim()) throw DimensionError("coefficient count mismatch");
  return OneForm{coeffs, ScalarField(m), 0.0};
}

OneForm exact_form(const ScalarField& f) {
  OneForm a{std::vector<double>(f.torus.dim(), 0.0), f, 0.0};
  const double mu = f.mean();
  for (double& x : a.potential.v) x -= mu;
  return a;
}

OneForm hodge_decompose(const FieldSamples& beta) {
  if (beta.empty()) throw DimensionError("empty form");
  const FlatTorus& m = beta[0].torus;
  const int d = m.dim();
  if (static_cast<int>(beta.size()) != d) throw DimensionError("component count mismatch");
  OneForm out;
  out.coeffs.resize(d);
  std::vector<std::vector<cplx>> hats;
  for (int a = 0; a < d; ++a) {
    if (!beta[a].torus.same_grid(m)) throw DimensionError("component grid mismatch");
    out.coeffs[a] = beta[a].mean();
    hats.push_back(detail::fft_forward(m, beta[a].v));
    hats[a][0] = 0.0;
  }
  std::vector<cplx> fhat(m.size(), 0.0);
  for (std::size_t k = 1; k < m.size(); ++k) {
    const Index mi = m.multi_index(k);
    double k2 = 0.0;
    cplx num = 0.0;
    for (int a = 0; a < d; ++a) {
      const double kappa = detail::derivative_symbol(mi[a], m.n());
      k2 += kappa * kappa;
      num += kappa * hats[a][k];
    }
    if (k2 > 0.0) fhat[k] = cplx(0.0, -1.0) * num / k2;
  }
  double resid = 0.0;
  for (int a = 0; a < d; ++a) {
    std::vector<cplx> r(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double kappa = detail::derivative_symbol(m.multi_index(k)[a], m.n());
      r[k] = hats[a][k] - cplx(0.0, kappa) * fhat[k];
    }
    for (double x : detail::fft_inverse(m, std::move(r))) resid = std::max(resid, std::abs(x));
  }
  out.potential = ScalarField(m);
  out.potential.v = detail::fft_inverse(m, std::move(fhat));
  out.coexact_residual = resid;
  return out;
}

FieldSamples reconstruct(const OneForm& a) {
  FieldSamples g = gradient(a.potential);
  for (std::size_t c = 0; c < g.size(); ++c)
    for (double& x : g[c].v) x += a.coeffs[c];
  return g;
}

double line_integral(const OneForm& a, const std::vector<Point>& path) {
  if (path.size() < 2) throw std::invalid_argument("path needs at least 2 samples");
  const Point& s = path.front();
  const Point& e = path.back();
  double acc = 0.0;
  for (std::size_t c = 0; c < a.coeffs.size(); ++c) acc += a.coeffs[c] * (e[c] - s[c]);
  if (!a.potential.v.empty()) acc += interpolate(a.potential, e) - interpolate(a.potential, s);
  return acc;
}

double poincare_pair(const CohomologyClass& c, const FluxClass& f) {
  if (c.coeffs.size() != f.pairings.size()) throw DimensionError("pairing dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) acc += c.coeffs[i] * f.pairings[i];
  return acc;
}

double harmonic_norm(const std::vector<double>& coeffs) {
  double acc = 0.0;
  for (double c : coeffs) acc += std::abs(c);
  return acc;
}

double sup_norm(const OneForm& a) {
  const FieldSamples comps = reconstruct(a);
  double best = 0.0;
  for (const auto& c : comps)
    for (double x : c.v) best = std::max(best, std::abs(x));
  return best;
}

Point wrap_point(const Point& p, int dim) {
  Point q = p;
  for (int i = 0; i < dim; ++i) q[i] = p[i] - std::floor(p[i]);
  return q;
}

Point minimal_lift(const Point& p, const Point& q, int dim) {
  Point d{};
  for (int i = 0; i < dim; ++i) {
    const double delta = q[i] - p[i];
    d[i] = delta - std::floor(delta + 0.5);
  }
  return d;
}

double flat_distance(const Point& p, const Point& q, int dim) {
  const Point d = minimal_lift(p, q, dim);
  double acc = 0.0;
  for (int i = 0; i < dim; ++i) acc += d[i] * d[i];
  return std::sqrt(acc);
}

std::vector<Point> minimal_geodesic(const Point& p, const Point& q, int dim, int samples) {
  if (samples < 2) throw std::invalid_argument("geodesic needs at least 2 samples");
  const Point d = minimal_lift(p, q, dim);
  std::vector<Point> path(samples);
  for (int k = 0; k < samples; ++k) {
    const double s = static_cast<double>(k) / (samples - 1);
    Point x{};
    for (int i = 0; i < dim; ++i) x[i] = p[i] + s * d[i];
    path[k] = x;
  }
  return path;
}

Point contract_symplectic(const Point& x, int dim) {
  Point b{};
  for (int i = 0; i + 1 < dim; i += 2) {
    b[i + 1] += x[i];
    b[i] -= x[i + 1];
  }
  return b;
}

Point symplectic_dual(const Point& beta, int dim) {
  Point x{};
  for (int i = 0; i + 1 < dim; i += 2) {
    x[i] = beta[i + 1];
    x[i + 1] = -beta[i];
  }
  return x;
}

}  // namespace tori
