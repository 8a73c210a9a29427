#pragma once

#include <vector>

#include "tori/flows.hpp"

namespace tori {

// Monotone time change of [0, 1] with f(0) = 0, f(1) = 1.
struct Reparam {
  std::function<double(double)> f;
  std::function<double(double)> fprime;
  std::function<double(double)> finv;
};

class CutoffFunction {
 public:
  double delta = 1.0 / 32.0;
  double sup_slope = 0.0;
  std::vector<double> samples;  // f on 4096 uniform points of [0, 1]
  // False when the slope bound 6/5 (+1e-3) used by the concatenation estimates fails.
  bool slope_bound_ok = true;

  double operator()(double u) const;
  double derivative(double u) const;
  double inverse(double s) const;
  Reparam reparam() const;

  double a = 0.0, b = 1.0, eps = 0.05;  // ramp ends and mollifier half-width
};

CutoffFunction make_cutoff(double delta = 1.0 / 32.0);

Isotopy reparametrize(const Isotopy& phi, const Reparam& r);
// Phi *_r Psi: phi_{lambda(t)} then phi_1 o psi_{tau(t)}; ends at phi_1 o psi_1.
Isotopy concat_right(const Isotopy& phi, const Isotopy& psi, const CutoffFunction& f = make_cutoff());
// Psi *_l Phi: phi_{lambda(t)} then psi_{tau(t)} o phi_1; ends at psi_1 o phi_1.
Isotopy concat_left(const Isotopy& psi, const Isotopy& phi, const CutoffFunction& f = make_cutoff());
// Phi^l(t) = Phi(lambda_i(t)) o psi^i on [i/l, (i+1)/l]; negative l iterates inverse(Phi).
Isotopy iterate(const Isotopy& phi, int l, const CutoffFunction& f = make_cutoff());

}  // namespace tori
