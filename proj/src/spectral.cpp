#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace tori::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans are cached per shape and direction; FFTW_UNALIGNED lets one plan serve any buffer.
fftw_plan plan_for(int d, int n, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto& plan = cache[{d, n, sign}];
  if (!plan) {
    int dims[kMaxDim];
    for (int i = 0; i < d; ++i) dims[i] = n;
    std::size_t size = 1;
    for (int i = 0; i < d; ++i) size *= static_cast<std::size_t>(n);
    std::vector<cplx> scratch(size);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    // FFTW_ESTIMATE keeps plans (and therefore rounding) identical across runs.
    plan = fftw_plan_dft(d, dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  return plan;
}

std::vector<cplx> transform(const FlatTorus& m, std::vector<cplx> data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(m.dim(), m.n(), sign), buf, buf);
  return data;
}

}  // namespace

std::vector<cplx> fft_forward(const FlatTorus& m, const std::vector<double>& v) {
  std::vector<cplx> data(v.begin(), v.end());
  return transform(m, std::move(data), FFTW_FORWARD);
}

std::vector<double> fft_inverse(const FlatTorus& m, std::vector<cplx> c) {
  auto out = transform(m, std::move(c), FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(m.size());
  std::vector<double> r(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) r[i] = out[i].real() * scale;
  return r;
}

}  // namespace tori::detail

namespace tori::detail {

TrigInterpolant::TrigInterpolant(const ScalarField& f) : m_(f.torus), hat_(fft_forward(f.torus, f.v)) {}

double TrigInterpolant::operator()(const Point& y) const {
  const int d = m_.dim();
  const int n = m_.n();
  std::vector<std::vector<cplx>> phase(d, std::vector<cplx>(n));
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < n; ++i) {
      const double arg = 2.0 * M_PI * wavenumber(i, n) * y[a];
      phase[a][i] = cplx(std::cos(arg), std::sin(arg));
    }
  // Real part of the one-sided sum; the Nyquist term becomes hat * cos(pi n y).
  cplx acc = 0.0;
  if (d == 2) {
    for (int i = 0; i < n; ++i) {
      cplx row = 0.0;
      const cplx* h = hat_.data() + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) row += h[j] * phase[1][j];
      acc += row * phase[0][i];
    }
    return acc.real() / static_cast<double>(m_.size());
  }
  for (std::size_t k = 0; k < m_.size(); ++k) {
    const Index mi = m_.multi_index(k);
    cplx p = hat_[k];
    for (int a = 0; a < d; ++a) p *= phase[a][mi[a]];
    acc += p;
  }
  return acc.real() / static_cast<double>(m_.size());
}

}  // namespace tori::detail

namespace tori::detail {

ScalarField shift_field(const ScalarField& f, const Point& s) {
  const FlatTorus& m = f.torus;
  auto hat = fft_forward(m, f.v);
  for (std::size_t k = 0; k < hat.size(); ++k) {
    const Index mi = m.multi_index(k);
    double arg = 0.0;
    for (int a = 0; a < m.dim(); ++a) {
      if (2 * mi[a] == m.n()) continue;  // Nyquist: keep real, matches the interpolant up to O(hat_N)
      arg += 2.0 * M_PI * wavenumber(mi[a], m.n()) * s[a];
    }
    hat[k] *= cplx(std::cos(arg), std::sin(arg));
  }
  ScalarField out(m);
  out.v = fft_inverse(m, std::move(hat));
  return out;
}

}  // namespace tori::detail
