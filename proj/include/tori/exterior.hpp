#pragma once

#include <bit>
#include <map>
#include <vector>

namespace tori {

// Constant-coefficient forms on R^d; basis monomials dx_{i1}^...^dx_{ik} are bitmasks.
class ConstForm {
 public:
  std::map<unsigned, double> terms;

  static ConstForm one_form(const std::vector<double>& c) {
    ConstForm f;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0.0) f.terms[1u << i] += c[i];
    return f;
  }
  static ConstForm monomial(unsigned mask, double c = 1.0) {
    ConstForm f;
    f.terms[mask] = c;
    return f;
  }
  // omega = sum_i dx_{2i} ^ dx_{2i+1} in 0-based coordinates.
  static ConstForm symplectic(int dim) {
    ConstForm f;
    for (int i = 0; i + 1 < dim; i += 2) f.terms[(1u << i) | (1u << (i + 1))] += 1.0;
    return f;
  }

  ConstForm wedge(const ConstForm& o) const {
    ConstForm out;
    for (const auto& [a, ca] : terms)
      for (const auto& [b, cb] : o.terms) {
        if (a & b) continue;
        out.terms[a | b] += sign(a, b) * ca * cb;
      }
    return out;
  }
  ConstForm scaled(double s) const {
    ConstForm out = *this;
    for (auto& [m, c] : out.terms) c *= s;
    return out;
  }
  double coefficient(unsigned mask) const {
    auto it = terms.find(mask);
    return it == terms.end() ? 0.0 : it->second;
  }

 private:
  // Sign of reordering dx_A ^ dx_B into increasing index order.
  static double sign(unsigned a, unsigned b) {
    int swaps = 0;
    for (unsigned bb = b; bb; bb &= bb - 1) {
      const int j = std::countr_zero(bb);
      swaps += std::popcount(a >> (j + 1));
    }
    return (swaps % 2) ? -1.0 : 1.0;
  }
};

}  // namespace tori
