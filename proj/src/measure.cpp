#include "qcalc/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qcalc/detail/exp_poly.hpp"
#include "qcalc/errors.hpp"
#include "qcalc/quadrature.hpp"

QCALC_NS_BEGIN

using detail::Poly;

namespace {

bool is_real_quaternion(const Quaternion& q) { return q.x == 0.0 && q.y == 0.0 && q.z == 0.0; }

void validate_density(const ExpDensity& d) {
  std::ostringstream os;
  if (std::isnan(d.lo) || std::isnan(d.hi) || !(d.lo < d.hi)) {
    os << "density interval [" << d.lo << ", " << d.hi << "] is empty or invalid";
    throw DomainError(os.str());
  }
  if (std::isinf(d.lo) && std::isinf(d.hi)) {
    throw DomainError("density on the whole line has infinite variation");
  }
  if (d.hi == kInf && !(d.lambda.real() < 0.0)) {
    os << "density on [" << d.lo << ", inf) needs Re(lambda) < 0, got " << d.lambda.real();
    throw DomainError(os.str());
  }
  if (d.lo == -kInf && !(d.lambda.real() > 0.0)) {
    os << "density on (-inf, " << d.hi << "] needs Re(lambda) > 0, got " << d.lambda.real();
    throw DomainError(os.str());
  }
}

/// Real roots of p strictly inside (a, b), sorted.
std::vector<double> real_roots_in(const Poly& p_in, double a, double b) {
  const Poly p = detail::poly_trim(p_in);
  std::vector<double> roots;
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return roots;
  if (deg == 1) {
    roots.push_back(-p[0] / p[1]);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (std::size_t i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < deg; ++i) companion(i, deg - 1) = -p[i] / p[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const auto z = es.eigenvalues()(k);
      if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z))) roots.push_back(z.real());
    }
  }
  std::vector<double> inside;
  for (double r : roots)
    if (r > a && r < b) inside.push_back(r);
  std::sort(inside.begin(), inside.end());
  return inside;
}

/// int_a^b t^j e^{g t} dt; +inf when it diverges.
double monomial_exp_integral(unsigned j, double g, double a, double b) {
  if (std::abs(g) < 1e-13) {
    if (std::isinf(a) || std::isinf(b)) return kInf;
    return (std::pow(b, j + 1.0) - std::pow(a, j + 1.0)) / (j + 1.0);
  }
  if ((b == kInf && g > 0.0) || (a == -kInf && g < 0.0)) return kInf;
  auto antiderivative = [&](double t) {
    if (std::isinf(t)) return 0.0;
    double sum = 0.0;
    double falling = 1.0;
    for (unsigned k = 0; k <= j; ++k) {
      const double term = falling * std::pow(t, static_cast<double>(j - k)) / std::pow(g, k + 1.0);
      sum += (k % 2 == 0 ? term : -term);
      falling *= static_cast<double>(j - k);
    }
    return std::exp(g * t) * sum;
  };
  return antiderivative(b) - antiderivative(a);
}

/// int_a^b |P(t)| e^{g t} dt in closed form.
double abs_poly_exp_integral(const Poly& p, double g, double a, double b) {
  std::vector<double> cuts{a};
  for (double r : real_roots_in(p, a, b)) cuts.push_back(r);
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    if (!(hi > lo)) continue;
    double probe;
    if (std::isinf(lo) && std::isinf(hi)) probe = 0.0;
    else if (std::isinf(lo)) probe = hi - 1.0;
    else if (std::isinf(hi)) probe = lo + 1.0;
    else probe = 0.5 * (lo + hi);
    const double sign = detail::poly_eval(p, probe) < 0.0 ? -1.0 : 1.0;
    double piece = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] == 0.0) continue;
      const double v = monomial_exp_integral(static_cast<unsigned>(j), g, lo, hi);
      if (std::isinf(v)) return kInf;
      piece += p[j] * v;
    }
    total += sign * piece;
  }
  return total;
}

/// Half-line or finite-interval integral of a scalar function.
template <class F>
double integrate_segment(const F& f, double a, double b, double tol) {
  QuadOptions opt;
  opt.abs_tol = tol;
  if (std::isfinite(a) && std::isfinite(b)) return integrate_interval(f, a, b, opt, 8).value;
  const bool right = std::isfinite(a);
  Contour ray{RayContour{right ? a : b, right ? +1 : -1}};
  auto g = [&](const ContourPoint& pt) { return f(pt.s.real()); };
  return integrate(g, ray, tol, opt).value;
}

/// int_E e^{beta |t|} d|mu|(t).
double weighted_variation(const QMeasure& m, const Interval& e, double beta) {
  double total = 0.0;
  for (const auto& atom : merged_atoms(m)) {
    if (atom.t >= e.lo && atom.t <= e.hi) total += atom.a.abs() * std::exp(beta * std::abs(atom.t));
  }
  if (m.densities().empty()) return total;

  std::vector<double> cuts{e.lo, e.hi};
  if (e.lo < 0.0 && e.hi > 0.0) cuts.push_back(0.0);
  for (const auto& d : m.densities()) {
    for (double v : {d.lo, d.hi})
      if (v > e.lo && v < e.hi) cuts.push_back(v);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    std::vector<const ExpDensity*> active;
    for (const auto& d : m.densities())
      if (d.lo <= a && d.hi >= b) active.push_back(&d);
    if (active.empty()) continue;
    // Segments never straddle 0, so e^{beta|t|} is a single exponential.
    const double side = (b <= 0.0) ? -1.0 : 1.0;
    if (active.size() == 1) {
      const ExpDensity& d = *active.front();
      const double v = abs_poly_exp_integral(d.poly, d.lambda.real() + side * beta, a, b);
      if (std::isinf(v)) return kInf;
      total += d.c.abs() * d.d.abs() * v;
      continue;
    }
    auto f = [&](double t) {
      Quaternion sum;
      for (const auto* d : active) sum += d->value(t);
      return sum.abs() * std::exp(beta * std::abs(t));
    };
    total += integrate_segment(f, a, b, 1e-13);
  }
  return total;
}

Quaternion sylvester_solve(const Quaternion& lambda, const Quaternion& s, const Quaternion& d) {
  const Quaternion q = s * s - (2.0 * lambda.real()) * s + Quaternion(lambda.norm2());
  return (lambda.conj() * d - d * s) * inverse(q);
}

Quaternion density_transform_closed(const ExpDensity& d, const Quaternion& s) {
  auto solve = [&](const Quaternion& rhs) { return sylvester_solve(d.lambda, s, rhs); };
  auto right_exp = [&](double t) { return qexp(-t * s); };
  return detail::exp_poly_integral(d.c, d.poly, d.d, d.lo, d.hi, d.lambda, solve, right_exp);
}

Quaternion density_transform_quadrature(const ExpDensity& d, const Quaternion& s, double tol) {
  auto value = [&](double t) { return d.value(t) * qexp(-t * s); };
  QuadOptions opt;
  opt.abs_tol = tol;
  if (std::isfinite(d.lo) && std::isfinite(d.hi)) {
    const int pieces =
        std::clamp(static_cast<int>(std::ceil((d.hi - d.lo) * std::max(1.0, s.abs()))), 1, 256);
    return integrate_interval(value, d.lo, d.hi, opt, pieces).value;
  }
  const bool right = std::isfinite(d.lo);
  const double t0 = right ? d.lo : d.hi;
  const double k = right ? s.real() - d.lambda.real() : d.lambda.real() - s.real();
  const double scale = d.c.abs() * d.d.abs() * std::exp(t0 * (d.lambda.real() - s.real()));
  RayContour ray{t0, right ? +1 : -1, k, scale};
  if (!detail::poly_is_constant_one(d.poly)) {
    ray.decay_rate = 0.5 * k;
    ray.bound = scale * detail::poly_decay_bound(d.poly, t0, 0.5 * k);
  }
  auto g = [&](const ContourPoint& pt) { return value(pt.s.real()); };
  return integrate(g, Contour{ray}, tol, opt).value;
}

QMeasure convolve_densities(const ExpDensity& f, const ExpDensity& g) {
  const double lscale = 1.0 + f.lambda.abs();
  if ((f.lambda - g.lambda).abs() > 1e-14 * lscale) {
    throw UnsupportedError("convolve: densities with different exponents are not supported");
  }
  const Quaternion inner = f.d * g.c;
  const Quaternion comm = inner * f.lambda - f.lambda * inner;
  if (comm.abs() > 1e-12 * (inner.abs() * f.lambda.abs() + 1e-300)) {
    throw UnsupportedError("convolve: inner density coefficients do not commute with the exponent");
  }

  // P1(s) P2(r - s) as polynomials in r indexed by the power of s.
  std::vector<Poly> by_s_power(f.poly.size() + g.poly.size(), Poly{0.0});
  for (std::size_t k = 0; k < g.poly.size(); ++k) {
    for (std::size_t m = 0; m <= k; ++m) {
      double binom = 1.0;
      for (std::size_t i = 1; i <= m; ++i) binom = binom * (k - m + i) / i;
      Poly r_part(k - m + 1, 0.0);
      r_part[k - m] = g.poly[k] * binom * (m % 2 == 0 ? 1.0 : -1.0);
      for (std::size_t i = 0; i < f.poly.size(); ++i) {
        by_s_power[i + m] = detail::poly_add(by_s_power[i + m], detail::poly_scale(r_part, f.poly[i]));
      }
    }
  }
  // int s^q ds evaluated at s = offset + slope * r.
  auto antiderivative_at = [&](double offset, double slope) {
    Poly total{0.0};
    for (std::size_t q = 0; q < by_s_power.size(); ++q) {
      Poly mono(q + 2, 0.0);
      mono[q + 1] = 1.0 / static_cast<double>(q + 1);
      total = detail::poly_add(total, detail::poly_mul(by_s_power[q], detail::poly_compose_linear(mono, offset, slope)));
    }
    return total;
  };

  const double support_lo = f.lo + g.lo;
  const double support_hi = f.hi + g.hi;
  std::vector<double> cuts{support_lo, support_hi};
  for (double v : {f.lo + g.hi, f.hi + g.lo})
    if (std::isfinite(v) && v > support_lo && v < support_hi) cuts.push_back(v);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<ExpDensity> pieces;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (!(b > a)) continue;
    double probe;
    if (std::isinf(a)) probe = b - 1.0;
    else if (std::isinf(b)) probe = a + 1.0;
    else probe = 0.5 * (a + b);
    // s ranges over [max(lo1, r - hi2), min(hi1, r - lo2)].
    const bool lower_fixed = f.lo >= probe - g.hi;
    const bool upper_fixed = f.hi <= probe - g.lo;
    const double lower_offset = lower_fixed ? f.lo : -g.hi;
    const double upper_offset = upper_fixed ? f.hi : -g.lo;
    if (std::isinf(lower_offset) || std::isinf(upper_offset)) {
      throw UnsupportedError("convolve: density convolution diverges");
    }
    Poly p = detail::poly_add(antiderivative_at(upper_offset, upper_fixed ? 0.0 : 1.0),
                              detail::poly_scale(antiderivative_at(lower_offset, lower_fixed ? 0.0 : 1.0), -1.0));
    ExpDensity piece;
    piece.c = f.c * inner;
    piece.lambda = f.lambda;
    piece.d = g.d;
    piece.poly = p;
    piece.lo = a;
    piece.hi = b;
    pieces.push_back(piece);
  }
  return QMeasure({}, pieces);
}

ExpDensity shifted(const ExpDensity& d, double by) {
  ExpDensity r = d;
  r.lo = d.lo + by;
  r.hi = d.hi + by;
  r.poly = detail::poly_compose_linear(d.poly, -by, 1.0);
  return r;
}

}  // namespace

Quaternion ExpDensity::value(double t) const {
  return c * detail::poly_eval(poly, t) * qexp(t * lambda) * d;
}

QMeasure::QMeasure(std::vector<Atom> atoms, std::vector<ExpDensity> densities)
    : atoms_(std::move(atoms)), densities_(std::move(densities)) {
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.t)) throw DomainError("atom position must be finite");
  }
  for (auto& d : densities_) {
    validate_density(d);
    d.poly = detail::poly_trim(d.poly);
  }
}

QMeasure QMeasure::dirac(double t, const Quaternion& a) { return QMeasure({{t, a}}, {}); }

QMeasure QMeasure::density(const ExpDensity& d) { return QMeasure({}, {d}); }

bool QMeasure::is_real() const {
  for (const auto& a : atoms_)
    if (!is_real_quaternion(a.a)) return false;
  for (const auto& d : densities_)
    if (!is_real_quaternion(d.c) || !is_real_quaternion(d.d) || !is_real_quaternion(d.lambda))
      return false;
  return true;
}

std::vector<Atom> merged_atoms(const QMeasure& m) {
  std::map<double, Quaternion> by_t;
  for (const auto& a : m.atoms()) by_t[a.t] += a.a;
  std::vector<Atom> out;
  for (const auto& [t, a] : by_t)
    if (!a.is_zero()) out.push_back({t, a});
  return out;
}

double total_variation(const QMeasure& m, const Interval& e) {
  return weighted_variation(m, e, 0.0);
}

double exponential_moment(const QMeasure& m, double beta) {
  return weighted_variation(m, Interval::all(), beta);
}

QMeasure combine(const QMeasure& a, const QMeasure& b) {
  std::vector<Atom> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  std::vector<ExpDensity> densities = a.densities();
  densities.insert(densities.end(), b.densities().begin(), b.densities().end());
  return QMeasure(merged_atoms(QMeasure(atoms, {})), densities);
}

QMeasure scale_left(const Quaternion& a, const QMeasure& m) {
  std::vector<Atom> atoms;
  for (const auto& at : m.atoms()) atoms.push_back({at.t, a * at.a});
  std::vector<ExpDensity> densities = m.densities();
  for (auto& d : densities) d.c = a * d.c;
  return QMeasure(atoms, densities);
}

QMeasure scale_right(const QMeasure& m, const Quaternion& a) {
  std::vector<Atom> atoms;
  for (const auto& at : m.atoms()) atoms.push_back({at.t, at.a * a});
  std::vector<ExpDensity> densities = m.densities();
  for (auto& d : densities) d.d = d.d * a;
  return QMeasure(atoms, densities);
}

Quaternion DiscreteProductMeasure::measure_of(const Interval& a, const Interval& b) const {
  Quaternion sum;
  for (const auto& p : atoms)
    if (p.t >= a.lo && p.t <= a.hi && p.u >= b.lo && p.u <= b.hi) sum += p.weight;
  return sum;
}

double DiscreteProductMeasure::total_variation() const {
  std::map<std::pair<double, double>, Quaternion> merged;
  for (const auto& p : atoms) merged[{p.t, p.u}] += p.weight;
  double v = 0.0;
  for (const auto& [key, w] : merged) v += w.abs();
  return v;
}

DiscreteProductMeasure product_measure(const QMeasure& mu, const QMeasure& nu) {
  if (!mu.is_atomic() || !nu.is_atomic()) {
    throw UnsupportedError("product_measure: only atomic measures are supported");
  }
  DiscreteProductMeasure out;
  for (const auto& a : merged_atoms(mu))
    for (const auto& b : merged_atoms(nu)) out.atoms.push_back({a.t, b.t, a.a * b.a});
  return out;
}

QMeasure convolve(const QMeasure& mu, const QMeasure& nu) {
  std::vector<Atom> atoms;
  std::vector<ExpDensity> densities;
  for (const auto& a : mu.atoms())
    for (const auto& b : nu.atoms()) atoms.push_back({a.t + b.t, a.a * b.a});
  for (const auto& a : mu.atoms()) {
    for (const auto& g : nu.densities()) {
      ExpDensity r = shifted(g, a.t);
      r.c = a.a * g.c * qexp(-a.t * g.lambda);
      densities.push_back(r);
    }
  }
  for (const auto& f : mu.densities()) {
    for (const auto& b : nu.atoms()) {
      ExpDensity r = shifted(f, b.t);
      r.c = f.c * qexp(-b.t * f.lambda);
      r.d = f.d * b.a;
      densities.push_back(r);
    }
  }
  for (const auto& f : mu.densities()) {
    for (const auto& g : nu.densities()) {
      const QMeasure part = convolve_densities(f, g);
      densities.insert(densities.end(), part.densities().begin(), part.densities().end());
    }
  }
  return QMeasure(merged_atoms(QMeasure(atoms, {})), densities);
}

QMeasure image_measure(const QMeasure& m, const std::function<double(double)>& map) {
  if (!m.is_atomic()) throw UnsupportedError("image_measure: only atomic measures are supported");
  std::vector<Atom> atoms;
  for (const auto& a : m.atoms()) atoms.push_back({map(a.t), a.a});
  return QMeasure(atoms, {});
}

Admissibility admissible_for(const QMeasure& m, double omega, double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("admissible_for: epsilon must be positive");
  const double beta = omega + epsilon;
  Admissibility out;
  out.margin = kInf;
  for (const auto& d : m.densities()) {
    if (d.hi == kInf) out.margin = std::min(out.margin, -(d.lambda.real() + beta));
    if (d.lo == -kInf) out.margin = std::min(out.margin, d.lambda.real() - beta);
  }
  out.admissible = out.margin > 0.0;
  if (out.admissible) out.moment = exponential_moment(m, beta);
  return out;
}

Strip convergence_strip(const QMeasure& m) {
  Strip s;
  for (const auto& d : m.densities()) {
    if (d.hi == kInf) s.lower = std::max(s.lower, d.lambda.real());
    if (d.lo == -kInf) s.upper = std::min(s.upper, d.lambda.real());
  }
  return s;
}

Quaternion laplace_stieltjes(const QMeasure& m, const Quaternion& s, TransformMethod method,
                             double tol) {
  const Strip strip = convergence_strip(m);
  if (!strip.contains(s.real())) {
    std::ostringstream os;
    os << "laplace_stieltjes: Re(s) = " << s.real() << " outside the convergence strip ("
       << strip.lower << ", " << strip.upper << ")";
    throw DomainError(os.str());
  }
  Quaternion sum;
  for (const auto& a : m.atoms()) sum += a.a * qexp(-a.t * s);
  for (const auto& d : m.densities()) {
    const bool near_pole = Sphere::of(d.lambda).distance(s) < 1e-8 * (1.0 + s.abs());
    if (method == TransformMethod::kQuadrature || near_pole) {
      sum += density_transform_quadrature(d, s, tol);
    } else {
      sum += density_transform_closed(d, s);
    }
  }
  return sum;
}

QMeasure derivative_measure(const QMeasure& m, unsigned n) {
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  std::vector<Atom> atoms;
  for (const auto& a : m.atoms()) atoms.push_back({a.t, a.a * (sign * std::pow(a.t, n))});
  Poly factor(n + 1, 0.0);
  factor[n] = sign;
  std::vector<ExpDensity> densities = m.densities();
  for (auto& d : densities) d.poly = detail::poly_mul(d.poly, factor);
  return QMeasure(atoms, densities);
}

QMeasure kernel_measure(const Quaternion& p, double omega) {
  ExpDensity d;
  d.lambda = p;
  if (p.real() < -omega) {
    d.c = Quaternion(-1.0);
    d.lo = 0.0;
    d.hi = kInf;
  } else if (p.real() > omega) {
    d.c = Quaternion(1.0);
    d.lo = -kInf;
    d.hi = 0.0;
  } else {
    std::ostringstream os;
    os << "kernel_measure: |Re p| = " << std::abs(p.real()) << " must exceed omega = " << omega;
    throw DomainError(os.str());
  }
  return QMeasure::density(d);
}

QCALC_NS_END
