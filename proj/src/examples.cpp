#include "tori/examples.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace tori::examples {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

TimeField make(int dim, FieldKind kind, std::string name, std::function<Point(double, const Point&)> f) {
  TimeField x;
  x.dim = dim;
  x.kind = kind;
  x.name = std::move(name);
  x.eval = std::move(f);
  return x;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}
}  // namespace

double shear_profile(double y) { return 0.5 * (1.0 + std::sin(kTwoPi * y)); }

TimeField translation(const Point& v, int dim) {
  std::string name = "translation(";
  for (int i = 0; i < dim; ++i) name += (i ? "," : "") + fmt(v[i]);
  return make(dim, FieldKind::harmonic, name + ")", [v](double, const Point&) { return v; });
}

TimeField standard_shear() {
  return make(2, FieldKind::symplectic, "standard_shear",
              [](double, const Point& x) { return Point{shear_profile(x[1]), 0.0}; });
}

TimeField x_shear(double amp, double phase, double drift) {
  return make(2, FieldKind::symplectic, "x_shear(" + fmt(amp) + "," + fmt(phase) + "," + fmt(drift) + ")",
              [=](double, const Point& x) { return Point{amp * std::sin(kTwoPi * (x[1] + phase)) + drift, 0.0}; });
}

TimeField y_shear(double amp, double phase, double drift) {
  return make(2, FieldKind::symplectic, "y_shear(" + fmt(amp) + "," + fmt(phase) + "," + fmt(drift) + ")",
              [=](double, const Point& x) { return Point{0.0, amp * std::sin(kTwoPi * (x[0] + phase)) + drift}; });
}

TimeField hamiltonian_shear(double scale) {
  return make(2, FieldKind::hamiltonian, "hamiltonian_shear(" + fmt(scale) + ")",
              [scale](double, const Point& x) { return Point{-scale * std::sin(kTwoPi * x[1]), 0.0}; });
}

double hamiltonian_bump_value(double amp, double px, double py, const Point& x) {
  return amp * std::sin(kTwoPi * (x[0] + px)) * std::sin(kTwoPi * (x[1] + py)) / kTwoPi;
}

namespace {
// X = (dH/dy, -dH/dx) for the bump Hamiltonian.
Point bump_field(double amp, double px, double py, const Point& x) {
  const double sx = std::sin(kTwoPi * (x[0] + px)), cx = std::cos(kTwoPi * (x[0] + px));
  const double sy = std::sin(kTwoPi * (x[1] + py)), cy = std::cos(kTwoPi * (x[1] + py));
  return Point{amp * sx * cy, -amp * cx * sy};
}
}  // namespace

TimeField hamiltonian_bump(double amp, double px, double py) {
  return make(2, FieldKind::hamiltonian, "hamiltonian_bump(" + fmt(amp) + "," + fmt(px) + "," + fmt(py) + ")",
              [=](double, const Point& x) { return bump_field(amp, px, py, x); });
}

TimeField hamiltonian_loop(double amp, double px, double py) {
  return make(2, FieldKind::hamiltonian, "hamiltonian_loop(" + fmt(amp) + "," + fmt(px) + "," + fmt(py) + ")",
              [=](double t, const Point& x) {
                const double rho = kTwoPi * std::cos(kTwoPi * t);
                Point e = bump_field(amp, px, py, x);
                e[0] *= rho;
                e[1] *= rho;
                return e;
              });
}

TimeField harmonic_wiggle(const Point& c, int dim) {
  return make(dim, FieldKind::harmonic, "harmonic_wiggle", [c, dim](double t, const Point&) {
    Point e{};
    for (int i = 0; i < dim; ++i) e[i] = std::cos(kTwoPi * t) * c[i];
    return e;
  });
}

TimeField wiggle_loop(double amp) {
  return make(2, FieldKind::symplectic, "wiggle_loop(" + fmt(amp) + ")", [amp](double t, const Point& x) {
    const double w = std::sin(kTwoPi * t);
    Point e = bump_field(amp, 0.0, 0.25, x);
    return Point{1.0 + w * e[0], w * e[1]};
  });
}

TimeField compressible(double amp) {
  return make(2, FieldKind::general, "compressible(" + fmt(amp) + ")",
              [amp](double, const Point& x) { return Point{amp * std::sin(kTwoPi * x[0]), 0.0}; });
}

TimeField product_shear_t4() {
  return make(4, FieldKind::symplectic, "product_shear_t4", [](double, const Point& x) {
    return Point{shear_profile(x[1]), 0.0, 0.25 * (1.0 + std::cos(kTwoPi * x[3])), 0.0};
  });
}

TimeField hamiltonian_t4(double amp) {
  // H = amp (sin 2 pi x1 sin 2 pi y2 + cos 2 pi y1) / (2 pi), coupled across the two factors.
  return make(4, FieldKind::hamiltonian, "hamiltonian_t4(" + fmt(amp) + ")", [amp](double, const Point& x) {
    const double dx1 = amp * std::cos(kTwoPi * x[0]) * std::sin(kTwoPi * x[3]);
    const double dy1 = -amp * std::sin(kTwoPi * x[1]);
    const double dy2 = amp * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[3]);
    return Point{dy1, -dx1, dy2, 0.0};
  });
}

TimeField sum(const TimeField& a, const TimeField& b) {
  const FieldKind kind = (a.kind == b.kind) ? a.kind : FieldKind::symplectic;
  auto pa = std::make_shared<TimeField>(a);
  auto pb = std::make_shared<TimeField>(b);
  return make(a.dim, kind, a.name + "+" + b.name, [pa, pb](double t, const Point& x) {
    Point u = (*pa)(t, x);
    const Point v = (*pb)(t, x);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += v[i];
    return u;
  });
}

TimeField scaled(const TimeField& a, double s) {
  auto pa = std::make_shared<TimeField>(a);
  return make(a.dim, a.kind, fmt(s) + "*" + a.name, [pa, s](double t, const Point& x) {
    Point u = (*pa)(t, x);
    for (double& c : u) c *= s;
    return u;
  });
}

TimeField random_conservative(std::mt19937_64& rng, double amp, bool bumps) {
  std::uniform_int_distribution<int> pick(0, bumps ? 3 : 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int kind = pick(rng);
  const double a = amp * (0.2 + 0.8 * unit(rng));
  const double p = unit(rng), q = unit(rng);
  const double drift = amp * (2.0 * unit(rng) - 1.0) * 0.5;
  const double wobble = 0.5 * unit(rng);
  TimeField base;
  switch (kind) {
    case 0: base = x_shear(a, p, drift); break;
    case 1: base = y_shear(a, p, drift); break;
    case 2: base = translation(Point{a * (2 * p - 1), a * (2 * q - 1)}); break;
    // Saddle stretching grows like exp(2 pi a); 0.3 a keeps it resolved on 64^2.
    default: base = hamiltonian_bump(0.3 * a, p, q); break;
  }
  // Time modulation keeps each slice divergence free.
  auto pb = std::make_shared<TimeField>(base);
  return make(2, base.kind, base.name + "~" + fmt(wobble), [pb, wobble](double t, const Point& x) {
    Point u = (*pb)(t, x);
    const double s = 1.0 + wobble * std::cos(kTwoPi * t);
    for (double& c : u) c *= s;
    return u;
  });
}

}  // namespace tori::examples
