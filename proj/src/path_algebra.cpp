#include "tori/path_algebra.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace tori {

namespace {

constexpr int kTable = 4096;

// CDF B and its antiderivative G of the normalized bump exp(-1/(1-x^2)) on [-1, 1].
struct BumpTable {
  std::vector<double> bump, cdf, anti;
  double h = 2.0 / kTable;
  double g_end = 0.0;

  BumpTable() {
    bump.resize(kTable + 1);
    for (int i = 0; i <= kTable; ++i) {
      const double x = -1.0 + i * h;
      bump[i] = (std::abs(x) < 1.0) ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
    }
    // Cumulative integrals by Simpson on half intervals with midpoint samples.
    auto b_at = [](double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; };
    cdf.assign(kTable + 1, 0.0);
    for (int i = 0; i < kTable; ++i) {
      const double x = -1.0 + i * h;
      cdf[i + 1] = cdf[i] + h / 6.0 * (bump[i] + 4.0 * b_at(x + 0.5 * h) + bump[i + 1]);
    }
    const double z = cdf.back();
    for (auto& v : bump) v /= z;
    for (auto& v : cdf) v /= z;
    anti.assign(kTable + 1, 0.0);
    for (int i = 0; i < kTable; ++i) {
      // Hermite-exact integral of the cubic with values cdf and slopes bump.
      anti[i + 1] = anti[i] + h * (cdf[i] + cdf[i + 1]) / 2.0 + h * h * (bump[i] - bump[i + 1]) / 12.0;
    }
    g_end = anti.back();
  }

  void locate(double x, int& i, double& s) const {
    const double u = (x + 1.0) / h;
    i = std::clamp(static_cast<int>(std::floor(u)), 0, kTable - 1);
    s = u - i;
  }
  // Cubic Hermite of cdf using the exact slopes.
  double cdf_at(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    int i;
    double s;
    locate(x, i, s);
    const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
    return h00 * cdf[i] + h10 * h * bump[i] + h01 * cdf[i + 1] + h11 * h * bump[i + 1];
  }
  double anti_at(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return g_end + (x - 1.0);
    int i;
    double s;
    locate(x, i, s);
    const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
    return h00 * anti[i] + h10 * h * cdf[i] + h01 * anti[i + 1] + h11 * h * cdf[i + 1];
  }
};

const BumpTable& table() {
  static const BumpTable t;
  return t;
}

}  // namespace

double CutoffFunction::operator()(double u) const {
  if (u <= delta) return 0.0;
  if (u >= 1.0 - delta) return 1.0;
  const auto& tb = table();
  const double v = eps * (tb.anti_at((u - a) / eps) - tb.anti_at((u - b) / eps)) / (b - a);
  return std::clamp(v, 0.0, 1.0);
}

double CutoffFunction::derivative(double u) const {
  if (u <= delta || u >= 1.0 - delta) return 0.0;
  const auto& tb = table();
  return (tb.cdf_at((u - a) / eps) - tb.cdf_at((u - b) / eps)) / (b - a);
}

double CutoffFunction::inverse(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double lo = delta, hi = 1.0 - delta;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < s) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

Reparam CutoffFunction::reparam() const {
  const CutoffFunction self = *this;
  return Reparam{[self](double u) { return self(u); }, [self](double u) { return self.derivative(u); },
                 [self](double s) { return self.inverse(s); }};
}

CutoffFunction make_cutoff(double delta) {
  if (!(delta > 0.0) || delta > 0.125) throw std::invalid_argument("cutoff delta must lie in (0, 1/8]");
  CutoffFunction c;
  c.delta = delta;
  c.eps = std::min(0.05, (1.0 - 2.0 * delta) / 4.0);
  c.a = delta + c.eps;
  c.b = 1.0 - delta - c.eps;
  c.samples.resize(kTable);
  double slope = 0.0;
  for (int i = 0; i < kTable; ++i) {
    const double u = static_cast<double>(i) / (kTable - 1);
    c.samples[i] = c(u);
    slope = std::max(slope, c.derivative(u));
  }
  c.sup_slope = slope;
  c.slope_bound_ok = slope <= 1.2 + 1e-3;
  return c;
}

namespace {

double sigma_end(const std::vector<Slice>& s) { return s.empty() ? 0.0 : s.back().sigma; }
int next_segment(const std::vector<Slice>& s) { return s.empty() ? 0 : s.back().segment + 1; }

// Appends `base` mapped into the time window [t0, t1] through `r`; `disp_of`
// produces the displacement of each mapped slice.
template <class DispFn>
void append_window(std::vector<Slice>& out, const Isotopy& base, const Reparam& r, double t0, double t1,
                   DispFn&& disp_of, const std::vector<std::shared_ptr<const FieldSamples>>* vels = nullptr) {
  const double len = t1 - t0;
  const double sig0 = sigma_end(out);
  const int seg0 = next_segment(out);
  const int base_seg0 = base.slices.front().segment;
  for (std::size_t k = 0; k < base.size(); ++k) {
    const Slice& s = base.slices[k];
    const double u = (k == 0) ? 0.0 : (k + 1 == base.size() ? 1.0 : r.finv(s.t));
    Slice n = s;
    n.t = t0 + u * len;
    n.rate = s.rate * r.fprime(u) / len;
    n.sigma = sig0 + s.sigma;
    n.segment = seg0 + (s.segment - base_seg0);
    n.disp = disp_of(k);
    if (vels) n.vel = (*vels)[k];
    out.push_back(n);
  }
}

Point add_disp(const FieldSamples& d, std::size_t i, const Point& x, int dim) {
  Point p = x;
  for (int c = 0; c < dim; ++c) p[c] += d[c].v[i];
  return p;
}

}  // namespace

Isotopy reparametrize(const Isotopy& phi, const Reparam& r) {
  Isotopy out;
  out.torus = phi.torus;
  out.provenance = "reparam(" + phi.provenance + ")";
  append_window(out.slices, phi, r, 0.0, 1.0, [&](std::size_t k) { return phi.slices[k].disp; });
  return out;
}

Isotopy concat_right(const Isotopy& phi, const Isotopy& psi_in, const CutoffFunction& f) {
  if (!phi.torus.same_grid(psi_in.torus)) throw DimensionError("torus mismatch");
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  const Reparam r = f.reparam();
  const Isotopy psi = with_velocity(psi_in);
  Isotopy out;
  out.torus = m;
  out.provenance = "concat_right(" + phi.provenance + "," + psi.provenance + ")";
  append_window(out.slices, phi, r, 0.0, 0.5, [&](std::size_t k) { return phi.slices[k].disp; });

  const FieldSamples& d1 = *phi.back().disp;
  // Pushforward (phi_1)_* E at z uses w = phi_1^{-1}(z) and D phi_1(w).
  std::vector<Point> w(m.size());
  std::vector<std::array<double, 16>> jac(m.size());
  detail::parallel_for(m.size(), [&](std::size_t i) {
    w[i] = invert_point(d1, m.point(i), 1e-11);
    for (int c = 0; c < d; ++c) {
      Point g{};
      interpolate_grad(d1[c], w[i], g);
      for (int l = 0; l < d; ++l) jac[i][c * 4 + l] = (c == l ? 1.0 : 0.0) + g[l];
    }
  });
  const InterpolationPlan at_w(m, w);
  std::vector<std::shared_ptr<const FieldSamples>> vels;
  for (const Slice& s : psi.slices) {
    auto v = std::make_shared<FieldSamples>(d, ScalarField(m));
    detail::parallel_for(m.size(), [&](std::size_t i) {
      Point e{};
      for (int c = 0; c < d; ++c) e[c] = at_w((*s.vel)[c], i);
      for (int c = 0; c < d; ++c) {
        double acc = 0.0;
        for (int l = 0; l < d; ++l) acc += jac[i][c * 4 + l] * e[l];
        (*v)[c].v[i] = acc;
      }
    });
    vels.push_back(v);
  }
  append_window(
      out.slices, psi, r, 0.5, 1.0,
      [&](std::size_t k) {
        const FieldSamples& dk = *psi.slices[k].disp;
        auto disp = std::make_shared<FieldSamples>(d, ScalarField(m));
        detail::parallel_for(m.size(), [&](std::size_t i) {
          const Point y = add_disp(dk, i, m.point(i), d);
          for (int c = 0; c < d; ++c) (*disp)[c].v[i] = dk[c].v[i] + interpolate(d1[c], y);
        });
        return std::shared_ptr<const FieldSamples>(disp);
      },
      &vels);
  return out;
}

Isotopy concat_left(const Isotopy& psi, const Isotopy& phi, const CutoffFunction& f) {
  if (!phi.torus.same_grid(psi.torus)) throw DimensionError("torus mismatch");
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  const Reparam r = f.reparam();
  Isotopy out;
  out.torus = m;
  out.provenance = "concat_left(" + psi.provenance + "," + phi.provenance + ")";
  append_window(out.slices, phi, r, 0.0, 0.5, [&](std::size_t k) { return phi.slices[k].disp; });
  const FieldSamples& d1 = *phi.back().disp;
  std::vector<Point> ys(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) ys[i] = add_disp(d1, i, m.point(i), d);
  const InterpolationPlan at_y(m, std::move(ys));
  append_window(out.slices, psi, r, 0.5, 1.0, [&](std::size_t k) {
    const FieldSamples& dk = *psi.slices[k].disp;
    auto disp = std::make_shared<FieldSamples>(d, ScalarField(m));
    detail::parallel_for(m.size(), [&](std::size_t i) {
      for (int c = 0; c < d; ++c) (*disp)[c].v[i] = d1[c].v[i] + at_y(dk[c], i);
    });
    return std::shared_ptr<const FieldSamples>(disp);
  });
  return out;
}

Isotopy iterate(const Isotopy& phi_in, int l, const CutoffFunction& f) {
  if (l == 0) throw std::invalid_argument("iterate needs l != 0");
  const Isotopy phi = l > 0 ? phi_in : inverse(phi_in);
  const int count = std::abs(l);
  const FlatTorus& m = phi.torus;
  const int d = m.dim();
  const Reparam r = f.reparam();
  Isotopy out;
  out.torus = m;
  out.provenance = "iterate(" + phi_in.provenance + "," + std::to_string(l) + ")";
  const GridMap step = phi.time_one();
  GridMap power = identity_map(m);  // psi^i
  for (int i = 0; i < count; ++i) {
    const double t0 = static_cast<double>(i) / count, t1 = static_cast<double>(i + 1) / count;
    std::vector<Point> ys(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) ys[j] = add_disp(power.disp, j, m.point(j), d);
    const InterpolationPlan plan(m, std::move(ys));
    append_window(out.slices, phi, r, t0, t1, [&](std::size_t k) {
      if (i == 0) return phi.slices[k].disp;
      const FieldSamples& dk = *phi.slices[k].disp;
      auto disp = std::make_shared<FieldSamples>(d, ScalarField(m));
      detail::parallel_for(m.size(), [&](std::size_t j) {
        for (int c = 0; c < d; ++c) (*disp)[c].v[j] = power.disp[c].v[j] + plan(dk[c], j);
      });
      return std::shared_ptr<const FieldSamples>(disp);
    });
    power = compose(step, power);
  }
  return out;
}

}  // namespace tori
