#pragma once

// Right slice regular functions: a closed catalog of forms plus stems on one
// complex slice extended by the representation formula.

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "qcalc/measure.hpp"
#include "qcalc/quadrature.hpp"
#include "qcalc/quaternion.hpp"

QCALC_NS_BEGIN

/// Axially symmetric region on which a function is regular.
struct Domain {
  enum class Kind { kWhole, kStrip, kBall, kSphereComplement, kIntersection };
  Kind kind = Kind::kWhole;
  /// kStrip: lower < Re s < upper.
  double lower = -kInf;
  double upper = kInf;
  /// kBall: |s| < radius.
  double radius = kInf;
  /// kSphereComplement: the excluded spheres.
  std::vector<Sphere> holes;
  /// kIntersection: all parts must hold.
  std::vector<Domain> parts;

  static Domain whole() { return {}; }
  static Domain strip(double lower, double upper);
  static Domain ball(double radius);
  static Domain sphere_complement(std::vector<Sphere> holes);
  static Domain intersection(std::vector<Domain> parts);

  bool contains(const Quaternion& x, double margin = 1e-12) const;
  /// The closed disk |s - center| <= r of a slice plane lies in the domain.
  bool contains_disk(double center, double r, double margin = 1e-12) const;
  /// The closed strip |Re s| <= c lies in the domain.
  bool contains_closed_strip(double c, double margin = 1e-12) const;
  /// Largest r such that the open ball |s| < r lies in the domain.
  double ball_radius() const;
};

/// s -> sum_k b_k s^k, coefficients on the left.
struct RightPolynomial {
  std::vector<Quaternion> coefficients;
};

/// s -> S_R^{-n}(p, s).
struct KernelPower {
  Quaternion p;
  unsigned n = 1;
};

/// s -> e^{-s a}.
struct ExpKernel {
  double a = 0.0;
};

/// s -> L(mu)(s).
struct TransformOf {
  QMeasure measure;
};

/// A holomorphic map on the slice C_I, z = x0 + i x1 standing for x0 + I x1.
struct Stem {
  ImaginaryUnit unit;
  std::function<Quaternion(std::complex<double>)> holo;
  Domain domain;
};

class SliceFunction;

/// Pointwise product f g; g is expected to be intrinsic.
struct Product {
  std::shared_ptr<const SliceFunction> left;
  std::shared_ptr<const SliceFunction> right;
};

class SliceFunction {
 public:
  using Form = std::variant<RightPolynomial, KernelPower, ExpKernel, TransformOf, Stem, Product>;

  SliceFunction(Form form);  // NOLINT: forms convert implicitly
  template <class T>
    requires std::is_constructible_v<Form, T&&> && (!std::is_same_v<std::decay_t<T>, Form>) &&
             (!std::is_same_v<std::decay_t<T>, SliceFunction>)
  SliceFunction(T&& form) : SliceFunction(Form(std::forward<T>(form))) {}  // NOLINT

  static SliceFunction constant(const Quaternion& c) { return RightPolynomial{{c}}; }
  static SliceFunction product(const SliceFunction& f, const SliceFunction& g);

  const Form& form() const { return form_; }
  const Domain& domain() const { return domain_; }
  /// Largest |a| among the exponentials e^{-sa} the function contains; sets
  /// the panel width on oscillatory contours.
  double frequency() const;

 private:
  Form form_;
  Domain domain_;
};

/// Throws DomainError outside the domain, SingularityError on a kernel pole.
Quaternion eval(const SliceFunction& f, const Quaternion& x);

/// -(x - conj(s)) (x^2 - 2 Re(s) x + |s|^2)^{-1}; SingularityError for x in [s].
Quaternion cauchy_kernel_right(const Quaternion& s, const Quaternion& x);
/// -(x^2 - 2 Re(s) x + |s|^2)^{-1} (x - conj(s)).
Quaternion cauchy_kernel_left(const Quaternion& s, const Quaternion& x);
/// sum_k C(n,k) conj(s)^{n-k} (-x)^k (x^2 - 2 Re(s) x + |s|^2)^{-n}.
Quaternion kernel_power(const Quaternion& s, const Quaternion& x, unsigned n);

/// m-th derivative in the real direction.
Quaternion slice_derivative(const SliceFunction& f, const Quaternion& x, unsigned m);

struct IntrinsicCertificate {
  bool intrinsic = false;
  double max_deviation = 0.0;
  int slices = 0;
  int samples = 0;
};

/// Samples f(conj x) - conj f(x) on random domain points over at least
/// three slices.
IntrinsicCertificate is_intrinsic(const SliceFunction& f, int samples, std::uint64_t seed = 1,
                                  double tol = 1e-10);

/// (1/2 pi) oint f(s) ds_I S_R^{-1}(s, x) over a circle in the slice of the
/// contour. The circle must enclose [x] cut with that slice and lie in the
/// domain of f.
QuadResult<Quaternion> cauchy_formula_reconstruct(const SliceFunction& f, const Quaternion& x,
                                                  const CircleContour& circle, double tol = 1e-12);

/// f restricted to C_I written as f1 + J f2 with f1, f2 valued in C_I.
struct SplitValue {
  std::complex<double> f1;
  std::complex<double> f2;
  /// |(d/dx0 h + i d/dx1 h) / 2| for h = f1, f2, by central differences.
  double cr_residual_f1 = 0.0;
  double cr_residual_f2 = 0.0;
};

SplitValue splitting(const SliceFunction& f, const ImaginaryUnit& unit, const ImaginaryUnit& j,
                     std::complex<double> z);

/// f(x) = alpha + beta I_x with alpha, beta read off the slice I.
struct StemPair {
  Quaternion alpha;
  Quaternion beta;
};

StemPair stem_pair(const SliceFunction& f, double x0, double x1, const ImaginaryUnit& unit);

namespace detail {

/// Central difference with one Richardson step: (4 D(h/2) - D(h)) / 3.
template <class F>
auto richardson_derivative(const F& g, double h) {
  auto central = [&](double step) { return (0.5 / step) * (g(step) - g(-step)); };
  const auto coarse = central(h);
  const auto fine = central(0.5 * h);
  return (4.0 / 3.0) * fine - (1.0 / 3.0) * coarse;
}

}  // namespace detail

/// (1/2)(d/dx0 f + d/dx1 f I) at x, differentiating along the slice of x
/// (or `unit` for real x).
template <class F>
auto right_regularity_residual(const F& f, const Quaternion& x, const ImaginaryUnit& unit,
                               double h = 1e-5) {
  const Quaternion i = x.imag_abs() > 0.0 ? decompose(x).unit.q() : unit.q();
  const double step = h * std::max(1.0, x.abs());
  auto d0 = detail::richardson_derivative([&](double e) { return f(x + Quaternion(e)); }, step);
  auto d1 = detail::richardson_derivative([&](double e) { return f(x + i * e); }, step);
  return 0.5 * (d0 + d1 * i);
}

/// (1/2)(d/dx0 g + I d/dx1 g) at x.
template <class F>
auto left_regularity_residual(const F& g, const Quaternion& x, const ImaginaryUnit& unit,
                              double h = 1e-5) {
  const Quaternion i = x.imag_abs() > 0.0 ? decompose(x).unit.q() : unit.q();
  const double step = h * std::max(1.0, x.abs());
  auto d0 = detail::richardson_derivative([&](double e) { return g(x + Quaternion(e)); }, step);
  auto d1 = detail::richardson_derivative([&](double e) { return g(x + i * e); }, step);
  return 0.5 * (d0 + i * d1);
}

QCALC_NS_END
