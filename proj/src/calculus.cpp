#include "qcalc/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qcalc/detail/exp_poly.hpp"
#include "qcalc/errors.hpp"

QCALC_NS_BEGIN

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_real_quaternion(const Quaternion& q) { return q.x == 0.0 && q.y == 0.0 && q.z == 0.0; }

/// Ray integral of value(t) starting at t0 (direction dir) whose norm is
/// bounded by bound * |P(t)| e^{-rate |t - t0|}.
template <class F>
QuadResult<QMatrix> ray_integral(const F& value, double t0, int dir, double rate, double bound,
                                 const detail::Poly& poly, double tol) {
  RayContour ray{t0, dir, rate, bound};
  if (!detail::poly_is_constant_one(poly)) {
    ray.decay_rate = 0.5 * rate;
    ray.bound = bound * detail::poly_decay_bound(poly, t0, 0.5 * rate);
  }
  auto g = [&](const ContourPoint& pt) { return value(pt.s.real()); };
  return integrate(g, Contour{ray}, tol);
}

void require_strip_setup(const SSpectrum& spectrum, double alpha, double c) {
  std::ostringstream os;
  if (!(c > 0.0) || !(std::abs(alpha) > c)) {
    os << "strip formula needs 0 < c < |alpha|, got c = " << c << ", alpha = " << alpha;
    throw PreconditionError(os.str());
  }
  const double omega = spectrum.max_abs_real();
  if (!(omega < c)) {
    os << "strip formula needs the S-spectrum inside |Re s| < c: max |Re| = " << omega
       << ", c = " << c;
    throw PreconditionError(os.str());
  }
}

double op_residual(const QMatrix& a, const QMatrix& b) { return max_abs_diff(a, b); }

}  // namespace

SliceFunction CalcProblem::function() const {
  if (fn) return *fn;
  return TransformOf{measure};
}

CalcProblem make_problem(QMatrix op, QMeasure measure, double epsilon, double t_max, int grid) {
  CalcProblem p;
  p.envelope = group_envelope(op, t_max, grid);
  p.op = std::move(op);
  p.measure = std::move(measure);
  p.epsilon = epsilon;
  return p;
}

void validate(const CalcProblem& problem) {
  const auto adm = admissible_for(problem.measure, problem.envelope.omega, problem.epsilon);
  if (!adm.admissible) {
    std::ostringstream os;
    os << "measure not admissible for omega = " << problem.envelope.omega
       << ", epsilon = " << problem.epsilon << " (margin " << adm.margin << ")";
    throw PreconditionError(os.str());
  }
  const double re = s_spectrum(problem.op).max_abs_real();
  if (!(re < problem.envelope.omega + problem.epsilon)) {
    std::ostringstream os;
    os << "S-spectrum leaves the strip |Re s| < omega + epsilon (max |Re| = " << re << ")";
    throw PreconditionError(os.str());
  }
}

OperatorValue f_of_T_group(const CalcProblem& problem) {
  validate(problem);
  const QMatrix& op = problem.op;
  const double omega = problem.envelope.omega;
  const double m_env = problem.envelope.M;
  const double tol = problem.tol.group;
  GroupEvaluator group(op);

  OperatorValue out;
  out.value = QMatrix::zero(op.n());
  for (const auto& a : problem.measure.atoms()) out.value = out.value + a.a * group(-a.t);

  for (const auto& d : problem.measure.densities()) {
    auto value = [&](double t) { return d.value(t) * group(-t); };
    const double scale = d.c.abs() * d.d.abs() * m_env;
    QuadOptions opt;
    opt.abs_tol = tol;
    // Finite part first, then the tails beyond 0 with their decay rates.
    double lo = d.lo;
    double hi = d.hi;
    if (d.hi == kInf && d.lo < 0.0) {
      auto r = integrate_interval(value, d.lo, 0.0, opt, std::max(1, static_cast<int>(-d.lo)));
      out.value = out.value + r.value;
      out.error += r.error;
      lo = 0.0;
    }
    if (d.lo == -kInf && d.hi > 0.0) {
      auto r = integrate_interval(value, 0.0, d.hi, opt, std::max(1, static_cast<int>(d.hi)));
      out.value = out.value + r.value;
      out.error += r.error;
      hi = 0.0;
    }
    if (std::isfinite(lo) && std::isfinite(hi)) {
      const int pieces = std::clamp(static_cast<int>(std::ceil(hi - lo)), 1, 256);
      auto r = integrate_interval(value, lo, hi, opt, pieces);
      out.value = out.value + r.value;
      out.error += r.error;
    } else if (hi == kInf) {
      const double rate = -(d.lambda.real() + omega);
      auto r = ray_integral(value, lo, +1, rate, scale * std::exp(-rate * lo), d.poly, tol);
      out.value = out.value + r.value;
      out.error += r.error;
    } else {
      const double rate = d.lambda.real() - omega;
      auto r = ray_integral(value, hi, -1, rate, scale * std::exp(rate * hi), d.poly, tol);
      out.value = out.value + r.value;
      out.error += r.error;
    }
  }
  out.norm_bound = m_env * exponential_moment(problem.measure, omega);
  return out;
}

QMatrix f_of_T_closed(const QMeasure& measure, const QMatrix& op) {
  const std::size_t n = op.n();
  GroupEvaluator group(op);
  QMatrix sum = QMatrix::zero(n);
  for (const auto& a : measure.atoms()) sum = sum + a.a * group(-a.t);
  const QMatrix op2 = op * op;
  for (const auto& d : measure.densities()) {
    const QMatrix q = op2 - (2.0 * d.lambda.real()) * op + QMatrix::scalar(n, Quaternion(d.lambda.norm2()));
    const QMatrix q_inv = inverse(q);
    auto solve = [&](const QMatrix& rhs) { return (d.lambda.conj() * rhs - rhs * op) * q_inv; };
    auto right_exp = [&](double t) { return group(-t); };
    const QMatrix start = QMatrix::scalar(n, d.d);
    sum = sum + detail::exp_poly_integral(d.c, d.poly, start, d.lo, d.hi, d.lambda, solve, right_exp);
  }
  return sum;
}

ContourValue s_calc_bounded(const SliceFunction& f, const QMatrix& op, double radius,
                            const ImaginaryUnit& slice, double tol) {
  ResolventEvaluator resolvent(op);
  const double extent = resolvent.spectrum().max_extent();
  const double margin = spectral_margin(resolvent.op_norm());
  if (!(radius > extent + margin)) {
    std::ostringstream os;
    os << "s inside S-spectrum margin: circle radius " << radius
       << " does not clear the S-spectrum (extent " << extent << ")";
    throw SpectralProximityError(os.str(), radius - extent);
  }
  if (!f.domain().contains_disk(0.0, radius)) {
    std::ostringstream os;
    os << "function is not regular on the closed ball of radius " << radius;
    throw DomainError(os.str());
  }
  auto integrand = [&](const ContourPoint& pt) {
    return (eval(f, pt.s) * pt.weight) * resolvent(pt.s);
  };
  CircleContour circle{0.0, radius, slice};
  auto res = integrate(integrand, Contour{circle}, kTwoPi * tol);
  ContourValue out;
  out.value = (1.0 / kTwoPi) * res.value;
  out.error = res.error / kTwoPi;
  out.radius = radius;
  out.evaluations = res.evaluations;
  return out;
}

StripValue strip_f_of_T_matrix(const SliceFunction& f, const QMatrix& op, double alpha, double c,
                               double truncation, const ImaginaryUnit& slice, double tol) {
  ResolventEvaluator resolvent(op);
  require_strip_setup(resolvent.spectrum(), alpha, c);
  if (!f.domain().contains_closed_strip(c)) {
    std::ostringstream os;
    os << "function is not regular on the closed strip |Re s| <= " << c;
    throw DomainError(os.str());
  }
  const QMatrix shifted = QMatrix::scalar(op.n(), Quaternion(alpha)) - op;
  const QMatrix regularizer = shifted * shifted;
  const double reg_norm = std::max(1.0, regularizer.norm());

  auto integrand = [&](const ContourPoint& pt) {
    const Quaternion gap = Quaternion(alpha) - pt.s;
    const Quaternion weight = eval(f, pt.s) * inverse(gap * gap) * pt.weight;
    return weight * resolvent(pt.s);
  };
  StripBoundaryContour strip{c, slice, truncation};
  const double freq = f.frequency();
  if (freq > 0.0) strip.max_panel = std::numbers::pi / freq;
  auto res = integrate(integrand, Contour{strip}, kTwoPi * tol / reg_norm);

  StripValue out;
  out.value = ((1.0 / kTwoPi) * res.value) * regularizer;
  out.error = res.error / kTwoPi * reg_norm;
  out.tail_bound = res.tail_bound / kTwoPi * reg_norm;
  out.truncation = res.truncation;
  out.evaluations = res.evaluations;
  return out;
}

StripVector strip_group_reconstruction(const QMatrix& op, double t, double alpha, double c,
                                       const QVector& u, double truncation,
                                       const ImaginaryUnit& slice, double tol) {
  const double u_norm = std::max(1.0, u.norm());
  auto m = strip_f_of_T_matrix(ExpKernel{-t}, op, alpha, c, truncation, slice, tol / u_norm);
  return {m.value * u, m.error * u_norm, m.truncation, m.tail_bound * u_norm};
}

StripVector strip_f_of_T(const CalcProblem& problem, double alpha, double c, const QVector& u,
                         double truncation) {
  validate(problem);
  if (!(problem.envelope.omega < c) || !(c < problem.envelope.omega + problem.epsilon)) {
    throw PreconditionError("strip formula needs omega < c < omega + epsilon");
  }
  const double u_norm = std::max(1.0, u.norm());
  auto m = strip_f_of_T_matrix(problem.function(), problem.op, alpha, c, truncation, problem.slice,
                               problem.tol.strip / u_norm);
  return {m.value * u, m.error * u_norm, m.truncation, m.tail_bound * u_norm};
}

ResidueBreakdown residue_oracle(const Quaternion& p, double alpha, const QMatrix& op,
                                const ImaginaryUnit& slice, const QVector& u) {
  const double gap = Sphere::of(p).distance(Quaternion(alpha));
  if (!(gap > 1e-6 * (1.0 + std::abs(alpha)))) {
    std::ostringstream os;
    os << "residue_oracle: alpha = " << alpha << " collides with the sphere of p (distance "
       << gap << ")";
    throw DomainError(os.str());
  }
  ResolventEvaluator resolvent(op);
  const std::size_t n = op.n();
  const QMatrix shifted = QMatrix::scalar(n, Quaternion(alpha)) - op;
  const QVector reg_u = (shifted * shifted) * u;

  ResidueBreakdown out;
  const SliceDecomposition dec = decompose(p);
  const Quaternion& i = slice.q();
  out.p_slice = slice.point(dec.x0, dec.x1);
  out.p_slice_conj = slice.point(dec.x0, -dec.x1);

  out.res_alpha = kernel_power(p, Quaternion(alpha), 2);
  out.laurent_alpha = cauchy_kernel_right(p, Quaternion(alpha));
  // g(alpha) = (alpha I - T) u and g'(alpha) = -u.
  out.contrib_alpha = out.res_alpha * (shifted * u) - out.laurent_alpha * u;

  auto inv_sq = [&](const Quaternion& q) {
    const Quaternion d = Quaternion(alpha) - q;
    return inverse(d * d);
  };
  if (dec.x1 == 0.0) {
    out.real_pole = true;
    out.res_p = -inv_sq(out.p_slice);
    out.res_p_conj = Quaternion();
    out.contrib_p = out.res_p * (resolvent(out.p_slice) * reg_u);
    out.contrib_p_conj = QVector(n);
  } else {
    const Quaternion ipi = dec.unit.q() * i;
    out.res_p = -0.5 * ((Quaternion(1.0) - ipi) * inv_sq(out.p_slice));
    out.res_p_conj = -0.5 * ((Quaternion(1.0) + ipi) * inv_sq(out.p_slice_conj));
    out.contrib_p = out.res_p * (resolvent(out.p_slice) * reg_u);
    out.contrib_p_conj = out.res_p_conj * (resolvent(out.p_slice_conj) * reg_u);
  }
  out.sum = out.contrib_alpha + out.contrib_p + out.contrib_p_conj;
  return out;
}

CircleCheck residue_by_quadrature(const Quaternion& p, double alpha, const QMatrix& op,
                                  const ImaginaryUnit& slice, const QVector& u,
                                  const Quaternion& center, double radius, double tol) {
  const auto z = slice_coordinates(center, slice, 1e-12);
  ResolventEvaluator resolvent(op);
  const QMatrix shifted = QMatrix::scalar(op.n(), Quaternion(alpha)) - op;
  const QVector reg_u = (shifted * shifted) * u;
  auto kernel = [&](const Quaternion& s) {
    const Quaternion d = Quaternion(alpha) - s;
    return cauchy_kernel_right(p, s) * inverse(d * d);
  };
  CircleContour circle{z.real(), radius, slice, z.imag()};
  auto res = integrate([&](const ContourPoint& pt) { return kernel(pt.s) * pt.weight; },
                       Contour{circle}, kTwoPi * tol);
  auto con = integrate(
      [&](const ContourPoint& pt) { return (kernel(pt.s) * pt.weight) * (resolvent(pt.s) * reg_u); },
      Contour{circle}, kTwoPi * tol);
  CircleCheck out;
  out.residue = (1.0 / kTwoPi) * res.value;
  out.contribution = (1.0 / kTwoPi) * con.value;
  out.error = (res.error + con.error) / kTwoPi;
  return out;
}

ComparisonReport compare_calculi(const CalcProblem& problem, double alpha, double c,
                                 std::optional<double> radius, double tolerance) {
  ComparisonReport report;
  const auto group = f_of_T_group(problem);
  report.value_group = group.value;
  report.error_group = group.error;

  try {
    report.value_closed = f_of_T_closed(problem.measure, problem.op);
  } catch (const Error& e) {
    report.skipped.push_back(std::string("closed: ") + e.what());
  }

  const SliceFunction f = problem.function();
  try {
    if (!(problem.envelope.omega < c) || !(c < problem.envelope.omega + problem.epsilon)) {
      throw PreconditionError("strip formula needs omega < c < omega + epsilon");
    }
    auto strip = strip_f_of_T_matrix(f, problem.op, alpha, c, 0.0, problem.slice, problem.tol.strip);
    report.value_strip = strip.value;
    report.error_strip = strip.error;
  } catch (const Error& e) {
    report.skipped.push_back(std::string("strip: ") + e.what());
  }

  const double extent = s_spectrum(problem.op).max_extent();
  const double reach = f.domain().ball_radius();
  double r = 0.0;
  if (radius) {
    r = *radius;
  } else if (std::isinf(reach)) {
    r = extent + 1.0;
  } else {
    r = 0.5 * (extent + reach);
  }
  if (!(reach > extent)) {
    report.skipped.push_back("contour: f is not regular on a ball containing the S-spectrum");
  } else {
    try {
      auto circle = s_calc_bounded(f, problem.op, r, problem.slice, problem.tol.circle);
      report.value_contour = circle.value;
      report.error_contour = circle.error;
      report.contour_radius = r;
    } catch (const Error& e) {
      report.skipped.push_back(std::string("contour: ") + e.what());
    }
  }

  struct Named {
    std::string name;
    const QMatrix* value;
    double error;
  };
  std::vector<Named> routes{{"group", &report.value_group, report.error_group}};
  if (report.value_strip) routes.push_back({"strip", &*report.value_strip, report.error_strip});
  if (report.value_contour) routes.push_back({"contour", &*report.value_contour, report.error_contour});
  if (report.value_closed) routes.push_back({"closed", &*report.value_closed, 0.0});
  for (std::size_t a = 0; a < routes.size(); ++a) {
    for (std::size_t b = a + 1; b < routes.size(); ++b) {
      PairResidual pr{routes[a].name, routes[b].name, op_residual(*routes[a].value, *routes[b].value),
                      routes[a].error + routes[b].error};
      report.max_residual = std::max(report.max_residual, pr.residual);
      report.residuals.push_back(pr);
    }
  }
  report.pass = report.max_residual <= tolerance;
  return report;
}

QMatrix poly_apply(const std::vector<Quaternion>& coefficients, const QMatrix& op) {
  for (const auto& a : coefficients) {
    if (!is_real_quaternion(a)) {
      throw PreconditionError("poly_apply: polynomial coefficients must be real");
    }
  }
  const std::size_t n = op.n();
  QMatrix r = QMatrix::zero(n);
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    r = r * op + QMatrix::scalar(n, *it);
  }
  return r;
}

InversionRecord inverting_sequence_run(const std::vector<std::vector<Quaternion>>& polys,
                                       const CalcProblem& problem, const QVector& u,
                                       double tolerance, double bound_limit) {
  InversionRecord record;
  record.tolerance = tolerance;
  const QMatrix f_op = f_of_T_group(problem).value;
  const SliceFunction f = problem.function();
  const double half_width = problem.envelope.omega + problem.epsilon;
  const std::vector<ImaginaryUnit> slices{ImaginaryUnit::e1(), ImaginaryUnit::e2(),
                                          ImaginaryUnit::e3()};

  unsigned n = 0;
  for (const auto& p : polys) {
    ++n;
    InversionEntry entry;
    entry.n = n;
    const QMatrix pf = poly_apply(p, problem.op) * f_op;
    entry.residual = (pf * u - u).norm();
    entry.operator_norm = pf.norm();
    const SliceFunction poly_fn = RightPolynomial{p};
    for (const auto& slice : slices) {
      for (int a = 0; a <= 8; ++a) {
        const double re = half_width * (-0.95 + 1.9 * a / 8.0);
        for (int b = 0; b <= 10; ++b) {
          const Quaternion s = slice.point(re, static_cast<double>(b));
          if (!f.domain().contains(s)) continue;
          const double v = (eval(poly_fn, s) * eval(f, s)).abs();
          entry.bound_sample_max = std::max(entry.bound_sample_max, v);
        }
      }
    }
    if (entry.bound_sample_max > bound_limit) {
      std::ostringstream os;
      os << "n = " << n << ": sampled |P_n f| = " << entry.bound_sample_max << " exceeds "
         << bound_limit;
      record.warnings.push_back(os.str());
    }
    record.entries.push_back(entry);
  }
  record.pass = !record.entries.empty() && record.entries.back().residual <= tolerance;
  return record;
}

QCALC_NS_END
