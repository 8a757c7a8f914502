#include "qcalc/slice_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qcalc/errors.hpp"

QCALC_NS_BEGIN

namespace {

double falling_factorial(unsigned k, unsigned m) {
  double r = 1.0;
  for (unsigned i = 0; i < m; ++i) r *= static_cast<double>(k - i);
  return r;
}

double rising_factorial(unsigned n, unsigned m) {
  double r = 1.0;
  for (unsigned i = 0; i < m; ++i) r *= static_cast<double>(n + i);
  return r;
}

double binomial(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Quaternion kernel_denominator(const Quaternion& s, const Quaternion& x) {
  return x * x - (2.0 * s.real()) * x + Quaternion(s.norm2());
}

void require_off_sphere(const Quaternion& s, const Quaternion& x, const char* what) {
  const double d = Sphere::of(s).distance(x);
  if (!(d > 1e-12 * (1.0 + s.abs()))) {
    std::ostringstream os;
    os << what << ": x = " << x << " lies on the sphere [" << s << "]";
    throw SingularityError(os.str());
  }
}

Quaternion eval_polynomial(const std::vector<Quaternion>& b, const Quaternion& x) {
  Quaternion r;
  for (auto it = b.rbegin(); it != b.rend(); ++it) r = r * x + *it;
  return r;
}

Quaternion eval_stem(const Stem& stem, const Quaternion& x) {
  const SliceDecomposition dec = decompose(x);
  const Quaternion& i = stem.unit.q();
  const Quaternion ii = i * dec.unit.q();
  const Quaternion up = stem.holo({dec.x0, dec.x1});
  const Quaternion down = stem.holo({dec.x0, -dec.x1});
  return 0.5 * (up * (Quaternion(1.0) - ii) + down * (Quaternion(1.0) + ii));
}

/// m-th central difference of g at 0 with one Richardson step.
template <class G>
Quaternion finite_difference(const G& g, unsigned m, double h) {
  auto stencil = [&](double step) {
    Quaternion sum;
    for (unsigned k = 0; k <= m; ++k) {
      const double w = binomial(m, k) * (k % 2 == 0 ? 1.0 : -1.0);
      sum += w * g((0.5 * m - k) * step);
    }
    return sum / std::pow(step, static_cast<double>(m));
  };
  return (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0;
}

void require_in_domain(const SliceFunction& f, const Quaternion& x) {
  if (!f.domain().contains(x)) {
    std::ostringstream os;
    os << "x = " << x << " lies outside the domain of the function";
    throw DomainError(os.str());
  }
}

}  // namespace

Domain Domain::strip(double lower, double upper) {
  Domain d;
  d.kind = Kind::kStrip;
  d.lower = lower;
  d.upper = upper;
  return d;
}

Domain Domain::ball(double radius) {
  Domain d;
  d.kind = Kind::kBall;
  d.radius = radius;
  return d;
}

Domain Domain::sphere_complement(std::vector<Sphere> holes) {
  Domain d;
  d.kind = Kind::kSphereComplement;
  d.holes = std::move(holes);
  return d;
}

Domain Domain::intersection(std::vector<Domain> parts) {
  Domain d;
  d.kind = Kind::kIntersection;
  d.parts = std::move(parts);
  return d;
}

bool Domain::contains(const Quaternion& x, double margin) const {
  switch (kind) {
    case Kind::kWhole:
      return true;
    case Kind::kStrip:
      return x.real() > lower + margin && x.real() < upper - margin;
    case Kind::kBall:
      return x.abs() < radius - margin;
    case Kind::kSphereComplement:
      return std::all_of(holes.begin(), holes.end(),
                         [&](const Sphere& h) { return h.distance(x) > margin; });
    case Kind::kIntersection:
      return std::all_of(parts.begin(), parts.end(),
                         [&](const Domain& p) { return p.contains(x, margin); });
  }
  return false;
}

bool Domain::contains_disk(double center, double r, double margin) const {
  switch (kind) {
    case Kind::kWhole:
      return true;
    case Kind::kStrip:
      return center - r > lower + margin && center + r < upper - margin;
    case Kind::kBall:
      return std::abs(center) + r < radius - margin;
    case Kind::kSphereComplement:
      return std::all_of(holes.begin(), holes.end(), [&](const Sphere& h) {
        return std::hypot(h.x0 - center, h.x1) > r + margin;
      });
    case Kind::kIntersection:
      return std::all_of(parts.begin(), parts.end(),
                         [&](const Domain& p) { return p.contains_disk(center, r, margin); });
  }
  return false;
}

bool Domain::contains_closed_strip(double c, double margin) const {
  switch (kind) {
    case Kind::kWhole:
      return true;
    case Kind::kStrip:
      return -c > lower + margin && c < upper - margin;
    case Kind::kBall:
      return false;
    case Kind::kSphereComplement:
      return std::all_of(holes.begin(), holes.end(),
                         [&](const Sphere& h) { return std::abs(h.x0) > c + margin; });
    case Kind::kIntersection:
      return std::all_of(parts.begin(), parts.end(),
                         [&](const Domain& p) { return p.contains_closed_strip(c, margin); });
  }
  return false;
}

double Domain::ball_radius() const {
  switch (kind) {
    case Kind::kWhole:
      return kInf;
    case Kind::kStrip:
      return (lower < 0.0 && upper > 0.0) ? std::min(-lower, upper) : 0.0;
    case Kind::kBall:
      return radius;
    case Kind::kSphereComplement: {
      double r = kInf;
      for (const auto& h : holes) r = std::min(r, std::hypot(h.x0, h.x1));
      return r;
    }
    case Kind::kIntersection: {
      double r = kInf;
      for (const auto& p : parts) r = std::min(r, p.ball_radius());
      return r;
    }
  }
  return 0.0;
}

SliceFunction::SliceFunction(Form form) : form_(std::move(form)) {
  if (const auto* k = std::get_if<KernelPower>(&form_)) {
    if (k->n == 0) throw PreconditionError("kernel power n must be positive");
    domain_ = Domain::sphere_complement({Sphere::of(k->p)});
  } else if (const auto* t = std::get_if<TransformOf>(&form_)) {
    const Strip s = convergence_strip(t->measure);
    domain_ = Domain::strip(s.lower, s.upper);
  } else if (const auto* st = std::get_if<Stem>(&form_)) {
    if (!st->holo) throw PreconditionError("stem function is empty");
    domain_ = st->domain;
  } else if (const auto* p = std::get_if<Product>(&form_)) {
    if (!p->left || !p->right) throw PreconditionError("product factor is empty");
    domain_ = Domain::intersection({p->left->domain(), p->right->domain()});
  }
}

SliceFunction SliceFunction::product(const SliceFunction& f, const SliceFunction& g) {
  return Product{std::make_shared<const SliceFunction>(f), std::make_shared<const SliceFunction>(g)};
}

double SliceFunction::frequency() const {
  if (const auto* e = std::get_if<ExpKernel>(&form_)) return std::abs(e->a);
  if (const auto* t = std::get_if<TransformOf>(&form_)) {
    double m = 0.0;
    for (const auto& a : t->measure.atoms()) m = std::max(m, std::abs(a.t));
    return m;
  }
  if (const auto* p = std::get_if<Product>(&form_)) {
    return p->left->frequency() + p->right->frequency();
  }
  return 0.0;
}

Quaternion cauchy_kernel_right(const Quaternion& s, const Quaternion& x) {
  require_off_sphere(s, x, "cauchy_kernel_right");
  return -((x - s.conj()) * inverse(kernel_denominator(s, x)));
}

Quaternion cauchy_kernel_left(const Quaternion& s, const Quaternion& x) {
  require_off_sphere(s, x, "cauchy_kernel_left");
  return -(inverse(kernel_denominator(s, x)) * (x - s.conj()));
}

Quaternion kernel_power(const Quaternion& s, const Quaternion& x, unsigned n) {
  if (n == 0) throw PreconditionError("kernel_power: n must be positive");
  require_off_sphere(s, x, "kernel_power");
  const Quaternion sc = s.conj();
  Quaternion sum;
  for (unsigned k = 0; k <= n; ++k) {
    sum += binomial(n, k) * (qpow(sc, n - k) * qpow(-x, k));
  }
  return sum * qpow(inverse(kernel_denominator(s, x)), n);
}

Quaternion eval(const SliceFunction& f, const Quaternion& x) {
  const auto& form = f.form();
  if (const auto* k = std::get_if<KernelPower>(&form)) return kernel_power(k->p, x, k->n);
  require_in_domain(f, x);
  if (const auto* p = std::get_if<RightPolynomial>(&form)) return eval_polynomial(p->coefficients, x);
  if (const auto* e = std::get_if<ExpKernel>(&form)) return qexp(-e->a * x);
  if (const auto* t = std::get_if<TransformOf>(&form)) return laplace_stieltjes(t->measure, x);
  if (const auto* st = std::get_if<Stem>(&form)) return eval_stem(*st, x);
  const auto& prod = std::get<Product>(form);
  return eval(*prod.left, x) * eval(*prod.right, x);
}

Quaternion slice_derivative(const SliceFunction& f, const Quaternion& x, unsigned m) {
  if (m == 0) return eval(f, x);
  const auto& form = f.form();
  if (const auto* k = std::get_if<KernelPower>(&form)) {
    return rising_factorial(k->n, m) * kernel_power(k->p, x, k->n + m);
  }
  require_in_domain(f, x);
  if (const auto* p = std::get_if<RightPolynomial>(&form)) {
    std::vector<Quaternion> d;
    for (std::size_t k = m; k < p->coefficients.size(); ++k) {
      d.push_back(falling_factorial(static_cast<unsigned>(k), m) * p->coefficients[k]);
    }
    return eval_polynomial(d, x);
  }
  if (const auto* e = std::get_if<ExpKernel>(&form)) {
    return std::pow(-e->a, static_cast<double>(m)) * qexp(-e->a * x);
  }
  if (const auto* t = std::get_if<TransformOf>(&form)) {
    return laplace_stieltjes(derivative_measure(t->measure, m), x);
  }
  if (const auto* prod = std::get_if<Product>(&form)) {
    Quaternion sum;
    for (unsigned k = 0; k <= m; ++k) {
      sum += binomial(m, k) * (slice_derivative(*prod->left, x, k) *
                               slice_derivative(*prod->right, x, m - k));
    }
    return sum;
  }
  const double h = std::max(1.0, x.abs()) * std::pow(1e-5, 1.0 / m);
  auto g = [&](double e) { return eval(f, x + Quaternion(e)); };
  if (!f.domain().contains(x - Quaternion(m * h)) || !f.domain().contains(x + Quaternion(m * h))) {
    throw DomainError("slice_derivative: x is too close to the domain boundary");
  }
  return finite_difference(g, m, h);
}

IntrinsicCertificate is_intrinsic(const SliceFunction& f, int samples, std::uint64_t seed,
                                  double tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int n_slices = std::max(3, std::min(samples, 8));
  std::vector<ImaginaryUnit> slices;
  while (static_cast<int>(slices.size()) < n_slices) {
    const Quaternion v(0.0, normal(rng), normal(rng), normal(rng));
    if (v.imag_abs() > 1e-3) slices.emplace_back(v);
  }

  const Domain& dom = f.domain();
  double lo = -2.0;
  double hi = 2.0;
  if (dom.kind == Domain::Kind::kStrip) {
    lo = std::max(lo, std::isfinite(dom.lower) ? dom.lower + 1e-3 : lo);
    hi = std::min(hi, std::isfinite(dom.upper) ? dom.upper - 1e-3 : hi);
  }

  IntrinsicCertificate cert;
  cert.slices = 0;
  std::vector<bool> used(slices.size(), false);
  bool ok = true;
  for (int k = 0; k < samples; ++k) {
    const ImaginaryUnit& i = slices[static_cast<std::size_t>(k) % slices.size()];
    Quaternion x;
    bool found = false;
    for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
      x = i.point(lo + (hi - lo) * unit(rng), 0.05 + 2.0 * unit(rng));
      found = dom.contains(x, 1e-6);
    }
    if (!found) continue;
    const Quaternion fx = eval(f, x);
    const Quaternion fc = eval(f, x.conj());
    const double dev = (fc - fx.conj()).abs();
    cert.max_deviation = std::max(cert.max_deviation, dev);
    if (dev > tol * (1.0 + fx.abs())) ok = false;
    used[static_cast<std::size_t>(k) % slices.size()] = true;
    ++cert.samples;
  }
  cert.slices = static_cast<int>(std::count(used.begin(), used.end(), true));
  cert.intrinsic = ok && cert.samples > 0;
  return cert;
}

QuadResult<Quaternion> cauchy_formula_reconstruct(const SliceFunction& f, const Quaternion& x,
                                                  const CircleContour& circle, double tol) {
  if (circle.center_imag != 0.0) {
    throw PreconditionError("cauchy_formula_reconstruct: circle must be centered on the real axis");
  }
  const Sphere sx = Sphere::of(x);
  if (!(std::hypot(sx.x0 - circle.center, sx.x1) < circle.radius)) {
    throw PreconditionError("cauchy_formula_reconstruct: the circle does not enclose [x]");
  }
  if (!f.domain().contains_disk(circle.center, circle.radius)) {
    throw DomainError("cauchy_formula_reconstruct: the disk leaves the domain of f");
  }
  auto integrand = [&](const ContourPoint& pt) {
    return eval(f, pt.s) * pt.weight * cauchy_kernel_right(pt.s, x);
  };
  auto res = integrate(integrand, Contour{circle}, 2.0 * std::numbers::pi * tol);
  const double scale = 0.5 / std::numbers::pi;
  res.value = scale * res.value;
  res.error *= scale;
  return res;
}

SplitValue splitting(const SliceFunction& f, const ImaginaryUnit& unit, const ImaginaryUnit& j,
                     std::complex<double> z) {
  const Quaternion& i = unit.q();
  const Quaternion& jq = j.q();
  if (std::abs((i * jq).real()) > 1e-12) {
    throw DomainError("splitting: the imaginary units must be orthogonal");
  }
  const Quaternion ij = i * jq;
  auto parts = [&](std::complex<double> w) {
    const Quaternion q = eval(f, unit.point(w));
    const double a = q.real();
    const double b = (q * i.conj()).real();
    const double c = (q * jq.conj()).real();
    const double d = (q * ij.conj()).real();
    return std::pair<std::complex<double>, std::complex<double>>{{a, b}, {c, -d}};
  };
  SplitValue out;
  std::tie(out.f1, out.f2) = parts(z);
  const double h = 1e-5 * std::max(1.0, std::abs(z));
  auto cr = [&](bool first) {
    auto comp = [&](std::complex<double> w) { return first ? parts(w).first : parts(w).second; };
    const auto dx = detail::richardson_derivative([&](double e) { return comp(z + e); }, h);
    const auto dy = detail::richardson_derivative(
        [&](double e) { return comp(z + std::complex<double>(0.0, e)); }, h);
    return std::abs(0.5 * (dx + std::complex<double>(0.0, 1.0) * dy));
  };
  out.cr_residual_f1 = cr(true);
  out.cr_residual_f2 = cr(false);
  return out;
}

StemPair stem_pair(const SliceFunction& f, double x0, double x1, const ImaginaryUnit& unit) {
  const Quaternion up = eval(f, unit.point(x0, x1));
  const Quaternion down = eval(f, unit.point(x0, -x1));
  return {0.5 * (up + down), -0.5 * ((up - down) * unit.q())};
}

QCALC_NS_END
