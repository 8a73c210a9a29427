#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tori {

constexpr int kMaxDim = 4;
using Point = std::array<double, kMaxDim>;
using Index = std::array<int, kMaxDim>;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unit flat torus R^d / Z^d sampled on an N^d grid.
class FlatTorus {
 public:
  FlatTorus() = default;
  FlatTorus(int dim, int n, bool symplectic = true, double volume_scale = 1.0);

  int dim() const { return dim_; }
  int n() const { return n_; }
  bool symplectic() const { return symplectic_; }
  double volume() const { return volume_scale_; }
  double h() const { return 1.0 / n_; }
  std::size_t size() const { return size_; }
  double injectivity_radius() const { return 0.5; }
  // Symplectic area of a surface; equals the volume for d = 2.
  double symplectic_area() const { return volume_scale_; }

  Point point(std::size_t idx) const {
    Point p{};
    for (int i = dim_ - 1; i >= 0; --i) {
      p[i] = static_cast<double>(idx % n_) / n_;
      idx /= n_;
    }
    return p;
  }
  Index multi_index(std::size_t idx) const {
    Index m{};
    for (int i = dim_ - 1; i >= 0; --i) {
      m[i] = static_cast<int>(idx % n_);
      idx /= n_;
    }
    return m;
  }
  std::size_t flat_index(const Index& m) const;  // wraps periodically

  bool same_grid(const FlatTorus& o) const { return dim_ == o.dim_ && n_ == o.n_; }

 private:
  int dim_ = 2;
  int n_ = 8;
  bool symplectic_ = true;
  double volume_scale_ = 1.0;
  std::size_t size_ = 64;
};

struct ScalarField {
  FlatTorus torus;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const FlatTorus& m, double value = 0.0) : torus(m), v(m.size(), value) {}
  double mean() const;
  double min() const;
  double max() const;
  double osc() const { return max() - min(); }
};

// Componentwise samples of a 1-form (or vector field) on the grid.
using FieldSamples = std::vector<ScalarField>;

ScalarField sample(const FlatTorus& m, const std::function<double(const Point&)>& f);
FieldSamples sample_components(const FlatTorus& m, const std::function<Point(const Point&)>& f);

double integrate(const FlatTorus& m, const ScalarField& f);

// Periodic cubic (4-point Lagrange, tensor product) interpolation at an arbitrary lifted point.
double interpolate(const ScalarField& f, const Point& y);
// Interpolated value and gradient of the same interpolant.
double interpolate_grad(const ScalarField& f, const Point& y, Point& grad);

// Cubic interpolation at fixed points, reusable across fields on one grid.
// Weights are tabulated on T^2; higher dimensions evaluate directly.
class InterpolationPlan {
 public:
  InterpolationPlan(const FlatTorus& m, std::vector<Point> points);
  std::size_t size() const { return points_.size(); }
  double operator()(const ScalarField& f, std::size_t q) const;

 private:
  FlatTorus m_;
  std::vector<Point> points_;
  std::vector<std::array<std::uint32_t, 16>> idx_;
  std::vector<std::array<double, 16>> w_;
};
// Trigonometric interpolant evaluated at one point; O(N^d) per call.
double evaluate_spectral(const ScalarField& f, const Point& y);

// Spectral calculus; the Nyquist mode is dropped from first derivatives.
FieldSamples gradient(const ScalarField& f);
ScalarField divergence(const FieldSamples& x);

struct CohomologyClass {
  std::vector<double> coeffs;
};

struct FluxClass {
  std::vector<double> pairings;
  std::string warning;
};

struct OneForm {
  std::vector<double> coeffs;       // harmonic part sum c_i dx_i
  ScalarField potential;            // exact part dF, F mean-zero
  double coexact_residual = 0.0;

  CohomologyClass cohomology() const { return {coeffs}; }
};

OneForm harmonic_form(const FlatTorus& m, const std::vector<double>& coeffs);
OneForm exact_form(const ScalarField& f);
OneForm hodge_decompose(const FieldSamples& beta);
FieldSamples reconstruct(const OneForm& a);

// Sum c_i * (net lift displacement) + F(end) - F(start) along a lifted path.
double line_integral(const OneForm& a, const std::vector<Point>& path);

double poincare_pair(const CohomologyClass& c, const FluxClass& f);

// |H|: l1 norm of the harmonic coefficients in the {dx_i} basis.
double harmonic_norm(const std::vector<double>& coeffs);
// ||a||_0: grid sup of the pointwise dual (l-infinity) norm.
double sup_norm(const OneForm& a);

Point wrap_point(const Point& p, int dim);
Point minimal_lift(const Point& p, const Point& q, int dim);  // q - p reduced to [-1/2, 1/2) per axis; ties resolve to -1/2
double flat_distance(const Point& p, const Point& q, int dim);
std::vector<Point> minimal_geodesic(const Point& p, const Point& q, int dim, int samples = 33);

// Componentwise contraction iota(X) omega for omega = sum dx_{2i-1} ^ dx_{2i}.
Point contract_symplectic(const Point& x, int dim);
// Inverse of contract_symplectic: the vector field X with iota(X) omega = beta.
Point symplectic_dual(const Point& beta, int dim);

}  // namespace tori
