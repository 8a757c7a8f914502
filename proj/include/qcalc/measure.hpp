#pragma once

// Quaternion-valued measures on the real line: finitely many atoms plus
// exponential densities c P(t) e^{t lambda} d on intervals.

#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qcalc/detail/poly.hpp"
#include "qcalc/quaternion.hpp"

QCALC_NS_BEGIN

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Atom {
  double t = 0.0;
  Quaternion a;
};

/// Density c P(t) e^{t lambda} d on [lo, hi]. P has real coefficients; the
/// plain exponential density has P = 1 and d = 1.
struct ExpDensity {
  Quaternion c{1.0};
  Quaternion lambda;
  double lo = 0.0;
  double hi = kInf;
  Quaternion d{1.0};
  detail::Poly poly{1.0};

  Quaternion value(double t) const;
  bool contains(double t) const { return t >= lo && t <= hi; }
};

struct Interval {
  double lo = -kInf;
  double hi = kInf;

  static Interval all() { return {}; }
};

/// Open strip a < Re s < b on which a transform converges.
struct Strip {
  double lower = -kInf;
  double upper = kInf;

  bool contains(double re, double margin = 1e-12) const {
    return re > lower + margin && re < upper - margin;
  }
};

class QMeasure {
 public:
  QMeasure() = default;
  /// Throws DomainError if some density has infinite variation.
  QMeasure(std::vector<Atom> atoms, std::vector<ExpDensity> densities);

  static QMeasure dirac(double t, const Quaternion& a = Quaternion(1.0));
  static QMeasure density(const ExpDensity& d);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<ExpDensity>& densities() const { return densities_; }
  bool is_atomic() const { return densities_.empty(); }
  /// All atom weights, density coefficients and exponents are real.
  bool is_real() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<ExpDensity> densities_;
};

/// Atoms at the same position are summed; zero weights dropped.
std::vector<Atom> merged_atoms(const QMeasure& m);

/// |mu|(E) for a closed interval E.
double total_variation(const QMeasure& m, const Interval& e = Interval::all());

/// int e^{beta |t|} d|mu|(t).
double exponential_moment(const QMeasure& m, double beta);

QMeasure combine(const QMeasure& a, const QMeasure& b);
QMeasure scale_left(const Quaternion& a, const QMeasure& m);
QMeasure scale_right(const QMeasure& m, const Quaternion& a);

struct ProductAtom {
  double t = 0.0;
  double u = 0.0;
  Quaternion weight;
};

/// Atoms of mu x nu with weights a_i b_j (mu on the left).
struct DiscreteProductMeasure {
  std::vector<ProductAtom> atoms;

  /// (mu x nu)(A x B) for closed intervals.
  Quaternion measure_of(const Interval& a, const Interval& b) const;
  double total_variation() const;
};

DiscreteProductMeasure product_measure(const QMeasure& mu, const QMeasure& nu);

/// mu * nu. Supported: atom-atom, atom-density in either order, and
/// density-density with equal exponents whose inner coefficients commute
/// with the exponent. Everything else throws UnsupportedError.
QMeasure convolve(const QMeasure& mu, const QMeasure& nu);

/// Push-forward of an atomic measure.
QMeasure image_measure(const QMeasure& m, const std::function<double(double)>& map);

struct Admissibility {
  bool admissible = false;
  /// Distance to the failure threshold; +inf for purely atomic measures.
  double margin = 0.0;
  /// int e^{(omega + epsilon)|t|} d|mu|(t) when finite.
  std::optional<double> moment;
};

Admissibility admissible_for(const QMeasure& m, double omega, double epsilon);

/// Largest open strip on which every density part of the transform converges.
Strip convergence_strip(const QMeasure& m);

enum class TransformMethod { kClosedForm, kQuadrature };

/// L(mu)(s) = int dmu(t) e^{-st}, the measure on the left. Throws
/// DomainError outside the convergence strip.
Quaternion laplace_stieltjes(const QMeasure& m, const Quaternion& s,
                             TransformMethod method = TransformMethod::kClosedForm,
                             double tol = 1e-12);

/// mu^n(E) = int_E dmu(t) (-t)^n.
QMeasure derivative_measure(const QMeasure& m, unsigned n);

/// mu_p with L(mu_p)(s) = S_R^{-1}(p, s) on |Re s| < |Re p|. Requires
/// |Re p| > omega; throws DomainError otherwise.
QMeasure kernel_measure(const Quaternion& p, double omega = 0.0);

QCALC_NS_END
