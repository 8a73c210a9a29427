#pragma once

#include <complex>
#include <vector>

#include "tori/torus.hpp"

namespace tori::detail {

using cplx = std::complex<double>;

std::vector<cplx> fft_forward(const FlatTorus& m, const std::vector<double>& v);
// Unnormalized inverse transform; returns the real part divided by N^d.
std::vector<double> fft_inverse(const FlatTorus& m, std::vector<cplx> c);

// Signed integer wavenumber of FFT bin `i`; Nyquist maps to -n/2.
inline int wavenumber(int i, int n) { return i <= n / 2 - 1 ? i : i - n; }
// Angular wavenumber used for first derivatives (Nyquist bin zeroed).
inline double derivative_symbol(int i, int n) {
  if (2 * i == n) return 0.0;
  return 2.0 * 3.14159265358979323846 * wavenumber(i, n);
}

// Samples of the trigonometric interpolant of f at grid points shifted by s.
ScalarField shift_field(const ScalarField& f, const Point& s);

// Trigonometric interpolant of grid samples, evaluated in O(N^d) per point.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const ScalarField& f);
  double operator()(const Point& y) const;

 private:
  FlatTorus m_;
  std::vector<cplx> hat_;
};

}  // namespace tori::detail
