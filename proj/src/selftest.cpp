#include "qcalc/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qcalc/calculus.hpp"
#include "qcalc/json_io.hpp"

QCALC_NS_BEGIN

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Quaternion random_quaternion(Rng& rng, double box) {
  return {uniform(rng, -box, box), uniform(rng, -box, box), uniform(rng, -box, box),
          uniform(rng, -box, box)};
}

ImaginaryUnit random_unit(Rng& rng) {
  for (;;) {
    Quaternion q(0.0, uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    const double r = q.abs();
    if (r > 0.1 && r <= 1.0) return ImaginaryUnit(q / r);
  }
}

QVector random_unit_vector(Rng& rng, std::size_t n) {
  QVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = random_quaternion(rng, 1.0);
  const double r = v.norm();
  for (std::size_t i = 0; i < n; ++i) v[i] = v[i] / r;
  return v;
}

QMatrix diag_e1_e2half() { return QMatrix::diag({Quaternion::e1(), 0.5 * Quaternion::e2()}); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

CriterionResult make(int id, std::string name, double metric, double threshold,
                     std::string detail = {}) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.metric = metric;
  r.threshold = threshold;
  r.pass = metric <= threshold;
  r.detail = std::move(detail);
  return r;
}

CriterionResult resolvent_equation(Rng& rng) {
  double worst = 0.0;
  int trials = 0;
  while (trials < 200) {
    const std::size_t n = trials % 2 == 0 ? 2 : 3;
    QMatrix t(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) t(i, k) = random_quaternion(rng, 1.0);
    const Quaternion s = random_quaternion(rng, 3.0);
    if (s_spectrum(t).distance(s) < 0.1) continue;
    const QVector v = random_unit_vector(rng, n);
    const QMatrix r = s_resolvent_right(s, t);
    const double res = (s * (r * v) - r * (t * v) - v).norm();
    const double scale = 1e-9 * (1.0 + s.abs()) * (1.0 + t.norm());
    worst = std::max(worst, res / scale);
    ++trials;
  }
  return make(1, "resolvent_equation", worst, 1.0,
              "max residual / (1e-9 (1+|s|)(1+||T||)) over 200 triples");
}

CriterionResult kernel_laplace(Rng& rng) {
  double worst = 0.0;
  for (int side = 0; side < 2; ++side) {
    for (int trial = 0; trial < 50; ++trial) {
      const Quaternion x = random_quaternion(rng, 1.0);
      const double gap = 0.5 + uniform(rng, 0.0, 2.0);
      Quaternion s = random_quaternion(rng, 2.0);
      s.w = side == 0 ? x.w + gap : x.w - gap;
      auto integrand = [&](const ContourPoint& pt) {
        const double t = pt.s.real();
        return qexp(-t * s) * qexp(t * x);
      };
      const int dir = side == 0 ? +1 : -1;
      auto res = integrate(integrand, Contour{RayContour{0.0, dir, gap, 1.0}}, 1e-10);
      const Quaternion value = side == 0 ? res.value : -res.value;
      worst = std::max(worst, (value - cauchy_kernel_right(s, x)).abs());
    }
  }
  return make(2, "kernel_laplace", worst, 1e-7, "50 pairs per side");
}

CriterionResult resolvent_from_group() {
  const QMatrix t = diag_e1_e2half();
  double worst = 0.0;
  const Quaternion base[] = {Quaternion(2.0), Quaternion(1.0, 0.0, 0.0, 1.0)};
  for (const auto& b : base) {
    for (int sign : {+1, -1}) {
      const Quaternion s = static_cast<double>(sign) * b;
      const auto side = sign > 0 ? LaplaceSide::kPositive : LaplaceSide::kNegative;
      const auto lg = laplace_of_group(s, t, side);
      worst = std::max(worst, max_abs_diff(lg.value, s_resolvent_right(s, t)));
    }
  }
  return make(3, "resolvent_from_group", worst, 1e-7, "s in {+-2, +-(1+e3)}");
}

CriterionResult three_routes() {
  const QMatrix t = diag_e1_e2half();
  const CalcProblem problem = make_problem(t, kernel_measure(Quaternion(10.0)));
  const auto report = compare_calculi(problem, 5.0, 0.5, 3.0, 1e-5);
  if (!report.value_strip || !report.value_contour) {
    std::string why;
    for (const auto& s : report.skipped) why += s + "; ";
    return make(4, "three_route_agreement", INFINITY, 1e-5, "route missing: " + why);
  }
  const QMatrix kernel = s_resolvent_right(Quaternion(10.0), t);
  double worst = report.max_residual;
  for (const QMatrix* v : {&report.value_group, &*report.value_strip, &*report.value_contour}) {
    worst = std::max(worst, max_abs_diff(*v, kernel));
  }
  return make(4, "three_route_agreement", worst, 1e-5,
              "group, strip (alpha 5, c 0.5), circle (radius 3), closed kernel");
}

CriterionResult group_reconstruction() {
  const QMatrix t = diag_e1_e2half();
  GroupEvaluator group(t);
  double worst = 0.0;
  for (double time : {-1.0, -0.5, 0.5, 1.0}) {
    const QMatrix exact = group(time);
    for (std::size_t k = 0; k < t.n(); ++k) {
      const QVector u = QVector::basis(t.n(), k);
      const auto r = strip_group_reconstruction(t, time, 5.0, 0.5, u, 0.0, {}, 1e-6);
      worst = std::max(worst, max_abs_diff(r.value, exact * u));
    }
  }
  return make(5, "group_reconstruction", worst, 1e-4, "t in {-1, -0.5, 0.5, 1}, basis u");
}

CriterionResult residues() {
  const QMatrix t = diag_e1_e2half();
  const Quaternion p(3.0, 4.0, 0.0, 0.0);
  const double alpha = 10.0;
  const std::vector<ImaginaryUnit> slices{
      ImaginaryUnit::e1(), ImaginaryUnit::e2(),
      ImaginaryUnit(Quaternion(0.0, 1.0, 0.0, 1.0) / std::sqrt(2.0))};
  double worst = 0.0;
  for (const auto& slice : slices) {
    for (std::size_t k = 0; k < t.n(); ++k) {
      const QVector u = QVector::basis(t.n(), k);
      const auto oracle = residue_oracle(p, alpha, t, slice, u);
      struct Pole {
        Quaternion center;
        Quaternion residue;
        const QVector* contribution;
      };
      const Pole poles[] = {{Quaternion(alpha), oracle.res_alpha, &oracle.contrib_alpha},
                            {oracle.p_slice, oracle.res_p, &oracle.contrib_p},
                            {oracle.p_slice_conj, oracle.res_p_conj, &oracle.contrib_p_conj}};
      for (const auto& pole : poles) {
        const auto q = residue_by_quadrature(p, alpha, t, slice, u, pole.center, 0.1);
        worst = std::max(worst, (q.residue - pole.residue).abs());
        worst = std::max(worst, max_abs_diff(q.contribution, *pole.contribution));
      }
    }
  }
  return make(6, "residues", worst, 1e-7, "p = 3+4e1, alpha = 10, three slices");
}

CriterionResult contour_independence() {
  const QMatrix t = QMatrix::diag({Quaternion(1.0, 2.0, 0.0, 0.0), Quaternion(3.0)});
  const SliceFunction square = RightPolynomial{{Quaternion(0.0), Quaternion(0.0), Quaternion(1.0)}};
  const QMatrix t2 = t * t;
  std::vector<QMatrix> values;
  for (double radius : {5.0, 7.0}) {
    for (const auto& slice : {ImaginaryUnit::e1(), ImaginaryUnit::e2()}) {
      values.push_back(s_calc_bounded(square, t, radius, slice).value);
    }
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a) {
    worst = std::max(worst, max_abs_diff(values[a], t2));
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      worst = std::max(worst, max_abs_diff(values[a], values[b]));
    }
  }
  return make(7, "contour_independence", worst, 1e-8, "f(s) = s^2, radii {5, 7}, slices {e1, e2}");
}

QMeasure random_atomic(Rng& rng) {
  const int count = 1 + static_cast<int>(rng() % 5);
  std::vector<Atom> atoms;
  for (int i = 0; i < count; ++i) atoms.push_back({uniform(rng, -2.0, 2.0), random_quaternion(rng, 1.0)});
  return QMeasure(atoms, {});
}

QMeasure variation_of(const QMeasure& m) {
  std::vector<Atom> atoms;
  for (const auto& a : m.atoms()) atoms.push_back({a.t, Quaternion(a.a.abs())});
  std::vector<ExpDensity> dens;
  for (const auto& d : m.densities()) {
    ExpDensity v = d;
    v.c = Quaternion(d.c.abs() * d.d.abs());
    v.d = Quaternion(1.0);
    v.lambda = Quaternion(d.lambda.real());
    dens.push_back(v);
  }
  return QMeasure(atoms, dens);
}

CriterionResult measure_algebra(Rng& rng) {
  double product_gap = 0.0;
  double conv_excess = 0.0;
  std::vector<std::pair<QMeasure, QMeasure>> pairs;
  for (int i = 0; i < 100; ++i) {
    QMeasure mu = random_atomic(rng);
    QMeasure nu = random_atomic(rng);
    const double lhs = product_measure(mu, nu).total_variation();
    const double rhs = total_variation(mu) * total_variation(nu);
    product_gap = std::max(product_gap, std::abs(lhs - rhs) / std::max(1.0, rhs));
    pairs.emplace_back(std::move(mu), std::move(nu));
  }
  // One pair with exponential densities on top of the atomic ones.
  ExpDensity dm;
  dm.c = Quaternion(0.5, 0.0, 0.0, 1.0);
  dm.lambda = Quaternion(-1.0);
  ExpDensity dn;
  dn.c = Quaternion(0.8, 0.3, 0.0, 0.0);
  dn.lambda = Quaternion(-1.0);
  pairs.emplace_back(QMeasure({{0.5, Quaternion(1.0, 1.0, 0.0, 0.0)}}, {dm}),
                     QMeasure({{-0.25, Quaternion(0.0, 0.0, 2.0, 0.0)}}, {dn}));
  for (const auto& [mu, nu] : pairs) {
    const QMeasure conv = convolve(mu, nu);
    const QMeasure bound = convolve(variation_of(mu), variation_of(nu));
    for (int k = 0; k < 5; ++k) {
      double a = uniform(rng, -5.0, 5.0);
      double b = uniform(rng, -5.0, 5.0);
      if (a > b) std::swap(a, b);
      const Interval e{a, b};
      conv_excess = std::max(conv_excess, total_variation(conv, e) - total_variation(bound, e) * (1.0 + 1e-12));
    }
  }

  ExpDensity d1;
  d1.c = Quaternion(0.5, 0.0, 0.0, 1.0);
  d1.lambda = Quaternion(-2.0);
  const QMeasure mu({{0.5, Quaternion(1.0, 1.0, 0.0, 0.0)}, {-1.0, Quaternion(0.0, 0.0, 0.3, 0.0)}}, {d1});
  ExpDensity d2;
  d2.lambda = Quaternion(-2.0);
  const QMeasure nu({{0.25, Quaternion(2.0)}, {1.0, Quaternion(-0.5)}}, {d2});
  const QMeasure conv = convolve(mu, nu);
  double transform_gap = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Quaternion s = random_unit(rng).point(uniform(rng, -1.5, 3.0), uniform(rng, -3.0, 3.0));
    const Quaternion lhs = laplace_stieltjes(conv, s);
    const Quaternion rhs = laplace_stieltjes(mu, s) * laplace_stieltjes(nu, s);
    transform_gap = std::max(transform_gap, (lhs - rhs).abs());
  }
  const bool pass = product_gap <= 1e-12 && conv_excess <= 1e-14 && transform_gap <= 1e-8;
  CriterionResult r = make(8, "measure_algebra", transform_gap, 1e-8,
                           "product variation gap " + fmt(product_gap) + ", convolution excess " +
                               fmt(conv_excess) + ", transform gap " + fmt(transform_gap));
  r.pass = pass;
  return r;
}

QMeasure mixed_fixture() {
  ExpDensity d;
  d.c = Quaternion(0.5, 0.25, 0.0, 0.0);
  d.lambda = Quaternion(-1.5, 0.0, 0.7, 0.0);
  return QMeasure({{-0.5, Quaternion(1.0, 0.0, 0.0, 0.5)}, {0.75, Quaternion(0.2, -1.0, 0.3, 0.0)}},
                  {d});
}

CriterionResult transform_regularity(Rng& rng) {
  const QMeasure mu = mixed_fixture();
  auto f = [&](const Quaternion& x) { return laplace_stieltjes(mu, x); };
  double regularity = 0.0;
  double derivative = 0.0;
  const QMeasure mu1 = derivative_measure(mu, 1);
  const QMeasure mu2 = derivative_measure(mu, 2);
  for (int k = 0; k < 50; ++k) {
    const ImaginaryUnit unit = random_unit(rng);
    const Quaternion s = unit.point(uniform(rng, -1.2, 2.0), uniform(rng, -3.0, 3.0));
    regularity = std::max(regularity, right_regularity_residual(f, s, unit).abs());
    if (k % 5 != 0) continue;
    const double h = 1e-3;
    auto first = [&](double step) { return (0.5 / step) * (f(s + Quaternion(step)) - f(s - Quaternion(step))); };
    auto second = [&](double step) {
      return (1.0 / (step * step)) * (f(s + Quaternion(step)) - 2.0 * f(s) + f(s - Quaternion(step)));
    };
    const Quaternion d1 = (4.0 / 3.0) * first(0.5 * h) - (1.0 / 3.0) * first(h);
    const Quaternion d2 = (4.0 / 3.0) * second(0.5 * h) - (1.0 / 3.0) * second(h);
    derivative = std::max(derivative, (d1 - laplace_stieltjes(mu1, s)).abs());
    derivative = std::max(derivative, (d2 - laplace_stieltjes(mu2, s)).abs());
  }
  CriterionResult r = make(9, "transform_regularity", std::max(regularity, derivative), 1e-6,
                           "regularity residual " + fmt(regularity) + ", derivative gap " + fmt(derivative));
  return r;
}

CriterionResult product_rule() {
  const QMatrix t = diag_e1_e2half();
  const QMeasure mu({{0.3, Quaternion(1.0, 1.0, 0.0, 0.0)},
                     {-0.7, Quaternion(0.0, 0.0, 0.5, -0.2)},
                     {1.1, Quaternion(-0.4, 0.1, 0.0, 0.0)}},
                    {});
  const QMeasure nu({{0.5, Quaternion(2.0)}, {-0.2, Quaternion(-0.7)}}, {});
  const QMatrix fg = f_of_T_group(make_problem(t, convolve(mu, nu))).value;
  const QMatrix f = f_of_T_group(make_problem(t, mu)).value;
  const QMatrix g = f_of_T_group(make_problem(t, nu)).value;
  return make(10, "product_rule", (fg - f * g).norm(), 1e-8, "atomic mu, real atomic nu");
}

CriterionResult inversion() {
  const QMatrix t = diag_e1_e2half();
  const QMeasure mu3 = kernel_measure(Quaternion(3.0));
  const CalcProblem single = make_problem(t, mu3);
  const CalcProblem squared = make_problem(t, convolve(mu3, mu3));
  const std::vector<Quaternion> p1{Quaternion(3.0), Quaternion(-1.0)};
  const std::vector<Quaternion> p2{Quaternion(9.0), Quaternion(-6.0), Quaternion(1.0)};
  const QMatrix f = f_of_T_group(single).value;
  const QMatrix pf = s_calc_bounded(SliceFunction::product(RightPolynomial{p1}, TransformOf{mu3}), t, 2.0).value;
  const QMatrix p_of_t = poly_apply(p1, t);
  double first = 0.0;
  double second = 0.0;
  double composed = 0.0;
  for (std::size_t k = 0; k < t.n(); ++k) {
    const QVector u = QVector::basis(t.n(), k);
    first = std::max(first, inverting_sequence_run({p1}, single, u).entries.back().residual);
    second = std::max(second, inverting_sequence_run({p2}, squared, u, 1e-6).entries.back().residual);
    composed = std::max(composed, max_abs_diff(p_of_t * (f * u), pf * u));
  }
  CriterionResult r = make(11, "inversion", std::max(first, composed), 1e-7,
                           "P = 3-s residual " + fmt(first) + ", P^2 residual " + fmt(second) +
                               ", P[T]f(T) vs (Pf)(T) " + fmt(composed));
  r.pass = first <= 1e-7 && second <= 1e-6 && composed <= 1e-7;
  return r;
}

CriterionResult resolvent_power_bound() {
  const QMatrix t = diag_e1_e2half();
  const GroupEnvelope env = group_envelope(t, 5.0, 201, 0.0);
  GroupEvaluator group(t);
  double grid_excess = 0.0;
  for (int k = 0; k < 201; ++k) {
    const double time = -5.0 + 10.0 * k / 200.0;
    const double bound = env.M * std::exp(env.omega * std::abs(time));
    grid_excess = std::max(grid_excess, group(time).norm() / bound - 1.0);
  }
  const HyReport hy = hy_bound_check(t, {1.0, -1.0, 2.0, -2.0}, 4, env);
  CriterionResult r = make(12, "resolvent_power_bound", hy.max_ratio, env.M * (1.0 + 1e-6),
                           "M = " + fmt(env.M) + ", omega = " + fmt(env.omega) +
                               ", grid excess " + fmt(grid_excess));
  r.pass = hy.pass && grid_excess <= 1e-12;
  return r;
}

CriterionResult mutation_sensitivity(const VariantSuite& variant) {
  if (!variant) {
    return make(13, "mutation_sensitivity", INFINITY, 0.0, "mutation build not linked");
  }
  const Json report = Json::parse(variant({1, 4}));
  int still_passing = 0;
  int seen = 0;
  for (const auto& c : report.at("criteria")) {
    ++seen;
    if (c.at("pass").get<bool>()) ++still_passing;
  }
  CriterionResult r = make(13, "mutation_sensitivity", still_passing, 0.0,
                           "criteria 1 and 4 under the flipped kernel sign: " +
                               std::to_string(seen - still_passing) + " of " + std::to_string(seen) +
                               " fail");
  r.pass = seen == 2 && still_passing == 0;
  return r;
}

const char* criterion_name(int id) {
  static const char* names[] = {"",
                                "resolvent_equation",
                                "kernel_laplace",
                                "resolvent_from_group",
                                "three_route_agreement",
                                "group_reconstruction",
                                "residues",
                                "contour_independence",
                                "measure_algebra",
                                "transform_regularity",
                                "product_rule",
                                "inversion",
                                "resolvent_power_bound",
                                "mutation_sensitivity"};
  return id >= 1 && id <= kCriterionCount ? names[id] : "unknown";
}

CriterionResult run_one(int id, std::uint64_t seed, const VariantSuite& variant) {
  // Each criterion gets its own stream so subsets reproduce the full run.
  Rng rng(seed + static_cast<std::uint64_t>(id));
  switch (id) {
    case 1: return resolvent_equation(rng);
    case 2: return kernel_laplace(rng);
    case 3: return resolvent_from_group();
    case 4: return three_routes();
    case 5: return group_reconstruction();
    case 6: return residues();
    case 7: return contour_independence();
    case 8: return measure_algebra(rng);
    case 9: return transform_regularity(rng);
    case 10: return product_rule();
    case 11: return inversion();
    case 12: return resolvent_power_bound();
    case 13: return mutation_sensitivity(variant);
    default: break;
  }
  return make(id, "unknown", INFINITY, 0.0, "no such criterion");
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::uint64_t seed,
                                            const VariantSuite& variant) {
  std::vector<int> todo = ids;
  if (todo.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
  }
  std::vector<CriterionResult> out;
  for (int id : todo) {
    try {
      out.push_back(run_one(id, seed, variant));
    } catch (const std::exception& e) {
      CriterionResult r = make(id, criterion_name(id), INFINITY, 0.0, std::string("error: ") + e.what());
      r.pass = false;
      out.push_back(r);
    }
  }
  return out;
}

std::string acceptance_json(const std::vector<CriterionResult>& results, std::uint64_t seed) {
  Json criteria = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    criteria.push_back(Json{{"id", r.id},
                            {"name", r.name},
                            {"pass", r.pass},
                            {"metric", std::isfinite(r.metric) ? Json(r.metric) : Json(nullptr)},
                            {"threshold", r.threshold},
                            {"detail", r.detail}});
  }
  return Json{{"seed", seed}, {"criteria", criteria}, {"pass", all}}.dump(2);
}

std::string run_acceptance_json(const std::vector<int>& ids) {
  return acceptance_json(run_acceptance(ids), kDefaultSeed);
}

QCALC_NS_END
