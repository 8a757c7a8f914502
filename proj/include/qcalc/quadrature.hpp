#pragma once

// Certified numerical integration of vector-valued integrands.
//
// Values are integrated componentwise in their ambient real coordinates; the
// only requirements on a value type V are `V + V`, `V - V`, `double * V` and a
// norm found by `quad_norm(V)`. Noncommutative factor ordering is the
// integrand's business, never this layer's.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "qcalc/errors.hpp"
#include "qcalc/quaternion.hpp"

QCALC_NS_BEGIN

inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(const Quaternion& q) { return q.abs(); }

template <class V>
concept QuadValue = requires(const V& a, const V& b, double s) {
  { a + b } -> std::convertible_to<V>;
  { a - b } -> std::convertible_to<V>;
  { s * a } -> std::convertible_to<V>;
  { quad_norm(a) } -> std::convertible_to<double>;
};

template <class V>
struct QuadResult {
  V value;
  /// Conservative absolute error estimate (quadrature plus truncated tail).
  double error = 0.0;
  /// Part of `error` owed to truncating an infinite contour.
  double tail_bound = 0.0;
  int evaluations = 0;
  /// Truncation actually used on infinite contours (0 for bounded ones).
  double truncation = 0.0;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_subdivisions = 20000;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
void check_finite(const V& v) {
  if (!std::isfinite(quad_norm(v))) {
    throw ConvergenceError("quadrature: non-finite integrand sample",
                           std::numeric_limits<double>::infinity());
  }
}

template <class V>
struct Panel {
  double a;
  double b;
  V value;
  double error;
};

template <class V, class F>
Panel<V> gk15(const F& f, double a, double b, int& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  V fc = f(center);
  check_finite(fc);
  V kron = kWgk[7] * fc;
  V gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    V f1 = f(center - dx);
    V f2 = f(center + dx);
    check_finite(f1);
    check_finite(f2);
    V pair = f1 + f2;
    kron = kron + kWgk[j] * pair;
    if (j % 2 == 1) gauss = gauss + kWg[j / 2] * pair;
  }
  evals += 15;
  kron = half * kron;
  gauss = half * gauss;
  return {a, b, kron, quad_norm(kron - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 over the panels given by
/// consecutive entries of `breakpoints` (finite, increasing). The worst
/// panel is bisected until the summed estimate meets the tolerance.
template <class F>
auto integrate_panels(const F& f, const std::vector<double>& breakpoints,
                      const QuadOptions& opt = {})
    -> QuadResult<std::decay_t<std::invoke_result_t<const F&, double>>> {
  using V = std::decay_t<std::invoke_result_t<const F&, double>>;
  static_assert(QuadValue<V>);
  if (breakpoints.size() < 2) {
    throw PreconditionError("integrate_panels: need at least two breakpoints");
  }
  using P = detail::Panel<V>;
  auto cmp = [](const P& l, const P& r) { return l.error < r.error; };
  std::priority_queue<P, std::vector<P>, decltype(cmp)> heap(cmp);

  int evals = 0;
  double total_err = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k + 1] > breakpoints[k])) {
      throw PreconditionError("integrate_panels: breakpoints must increase");
    }
    P p = detail::gk15<V>(f, breakpoints[k], breakpoints[k + 1], evals);
    total_err += p.error;
    heap.push(std::move(p));
  }

  auto current_sum = [&heap]() {
    // Deterministic: sort panels by left endpoint before summing.
    auto copy = heap;
    std::vector<P> panels;
    panels.reserve(copy.size());
    while (!copy.empty()) {
      panels.push_back(copy.top());
      copy.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const P& l, const P& r) { return l.a < r.a; });
    V sum = 0.0 * panels.front().value;
    double err = 0.0;
    for (const auto& p : panels) {
      sum = sum + p.value;
      err += p.error;
    }
    return std::pair<V, double>(sum, err);
  };

  int subdivisions = 0;
  auto [sum, err] = current_sum();
  double tol = std::max(opt.abs_tol, opt.rel_tol * quad_norm(sum));
  while (err > tol) {
    if (subdivisions >= opt.max_subdivisions) {
      throw ConvergenceError("quadrature: subdivision limit reached, estimate " +
                                 std::to_string(err),
                             err);
    }
    // Refine a batch of the worst panels before re-summing.
    const int batch = std::max<int>(1, static_cast<int>(heap.size() / 8));
    for (int k = 0; k < batch && !heap.empty(); ++k) {
      P worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.a + worst.b);
      if (!(mid > worst.a && mid < worst.b)) {
        throw ConvergenceError("quadrature: panel width underflow", err);
      }
      heap.push(detail::gk15<V>(f, worst.a, mid, evals));
      heap.push(detail::gk15<V>(f, mid, worst.b, evals));
      ++subdivisions;
    }
    std::tie(sum, err) = current_sum();
    tol = std::max(opt.abs_tol, opt.rel_tol * quad_norm(sum));
  }
  return {sum, err, 0.0, evals, 0.0};
}

/// Finite interval [a, b], split into `pieces` equal initial panels.
template <class F>
auto integrate_interval(const F& f, double a, double b, const QuadOptions& opt = {},
                        int pieces = 1) {
  std::vector<double> bp;
  pieces = std::max(1, pieces);
  for (int k = 0; k <= pieces; ++k) bp.push_back(a + (b - a) * k / pieces);
  bp.back() = b;
  return integrate_panels(f, bp, opt);
}

/// Periodic trapezoid rule on [0, 2*pi) with node doubling until successive
/// results differ by less than `tol`. The reported error is that difference.
template <class F>
auto periodic_trapezoid(const F& g, double tol, int n0 = 16, int n_max = 1 << 16)
    -> QuadResult<std::decay_t<std::invoke_result_t<const F&, double>>> {
  using V = std::decay_t<std::invoke_result_t<const F&, double>>;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  int n = std::max(4, n0);
  V raw = g(0.0);
  detail::check_finite(raw);
  for (int k = 1; k < n; ++k) {
    V v = g(two_pi * k / n);
    detail::check_finite(v);
    raw = raw + v;
  }
  int evals = n;
  V estimate = (two_pi / n) * raw;
  while (n < n_max) {
    // New nodes are the midpoints of the previous grid.
    V extra = 0.0 * raw;
    for (int k = 0; k < n; ++k) {
      V v = g(two_pi * (k + 0.5) / n);
      detail::check_finite(v);
      extra = extra + v;
    }
    evals += n;
    raw = raw + extra;
    n *= 2;
    V next = (two_pi / n) * raw;
    const double diff = quad_norm(next - estimate);
    estimate = next;
    if (diff < tol) return {estimate, diff, 0.0, evals, 0.0};
  }
  throw ConvergenceError("periodic trapezoid: node limit reached", tol);
}

/// Circle (center + I center_imag) + radius e^{I theta} in the slice plane C_I.
struct CircleContour {
  double center = 0.0;
  double radius = 1.0;
  ImaginaryUnit slice;
  double center_imag = 0.0;
};

/// The two lines s = c + I tau and s = -c - I tau, tau in R, oriented so that
/// the strip |Re s| < c is on the left. `truncation` bounds |tau|; a
/// nonpositive value selects it automatically from the integrand decay.
struct StripBoundaryContour {
  double c = 1.0;
  ImaginaryUnit slice;
  double truncation = 0.0;
  /// Cap on panel width, set from the oscillation frequency of the integrand.
  double max_panel = std::numeric_limits<double>::infinity();
};

/// Half-line t0 + direction * [0, inf). With decay_rate > 0 the caller
/// asserts |f(t)| <= bound * exp(-decay_rate |t - t0|), which fixes the
/// truncation point; otherwise the ray is mapped onto [0, 1).
struct RayContour {
  double t0 = 0.0;
  int direction = +1;
  double decay_rate = 0.0;
  double bound = 1.0;
};

struct Contour {
  std::variant<CircleContour, StripBoundaryContour, RayContour> kind;
  /// +1 keeps the natural orientation, -1 reverses it.
  int orientation = +1;
};

/// A node handed to contour integrands. For slice contours `weight` is
/// ds_I / d(param) where ds_I = -ds I; for rays it is dt / d(param) = 1.
struct ContourPoint {
  double param = 0.0;
  Quaternion s;
  Quaternion weight;
};

namespace detail {

inline std::vector<double> strip_breakpoints(double L, double max_panel) {
  // Panels grow geometrically away from the origin, capped by max_panel.
  std::vector<double> pos{0.0};
  double t = 0.0;
  double w = std::min(0.5, max_panel);
  while (t < L) {
    const double next = std::min(L, t + w);
    pos.push_back(next);
    t = next;
    w = std::min(max_panel, std::max(w, 0.5 * t));
  }
  std::vector<double> bp;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (*it > 0.0) bp.push_back(-*it);
  }
  bp.insert(bp.end(), pos.begin(), pos.end());
  return bp;
}

}  // namespace detail

/// Integrates integrand(ContourPoint) d(param) over a contour.
template <class F>
auto integrate(const F& integrand, const Contour& contour, double tol,
               const QuadOptions& base = {})
    -> QuadResult<std::decay_t<std::invoke_result_t<const F&, ContourPoint>>> {
  static_assert(QuadValue<std::decay_t<std::invoke_result_t<const F&, ContourPoint>>>);
  const double sign = contour.orientation >= 0 ? 1.0 : -1.0;

  if (const auto* circle = std::get_if<CircleContour>(&contour.kind)) {
    if (!(circle->radius > 0.0)) throw PreconditionError("circle radius must be positive");
    const Quaternion center = circle->slice.point(circle->center, circle->center_imag);
    auto g = [&](double theta) {
      const Quaternion rel =
          circle->slice.point(circle->radius * std::cos(theta), circle->radius * std::sin(theta));
      ContourPoint pt{theta, center + rel, sign * rel};
      return integrand(pt);
    };
    return periodic_trapezoid(g, tol);
  }

  if (const auto* strip = std::get_if<StripBoundaryContour>(&contour.kind)) {
    if (!(strip->c > 0.0)) throw PreconditionError("strip half-width must be positive");
    const ImaginaryUnit& I = strip->slice;
    auto g = [&](double tau) {
      ContourPoint right{tau, I.point(strip->c, tau), Quaternion(sign)};
      ContourPoint left{tau, I.point(-strip->c, -tau), Quaternion(-sign)};
      return integrand(right) + integrand(left);
    };
    // Tail bound from the K/(1+tau^2) envelope measured at +-L.
    auto tail = [&](double L) {
      const double k = std::max(quad_norm(g(L)), quad_norm(g(-L))) * (1.0 + L * L);
      return 2.0 * k / L;
    };
    double L = strip->truncation;
    if (!(L > 0.0)) {
      L = 32.0 * std::max(1.0, strip->c);
      while (tail(L) > 0.1 * tol) {
        L *= 2.0;
        if (L > 1e9) {
          throw ConvergenceError("strip contour: integrand decays too slowly", tail(L));
        }
      }
    }
    const double tail_bound = tail(L);
    QuadOptions opt = base;
    opt.abs_tol = 0.5 * tol;
    auto res = integrate_panels(g, detail::strip_breakpoints(L, strip->max_panel), opt);
    res.tail_bound = tail_bound;
    res.error += tail_bound;
    res.truncation = L;
    return res;
  }

  const auto& ray = std::get<RayContour>(contour.kind);
  const double dir = ray.direction >= 0 ? 1.0 : -1.0;
  QuadOptions opt = base;
  opt.abs_tol = 0.5 * tol;
  if (ray.decay_rate > 0.0) {
    // bound * exp(-k t*) / k <= tol / 10
    const double k = ray.decay_rate;
    const double t_star = std::max(1.0, std::log(std::max(1.0, 10.0 * ray.bound / (k * tol))) / k);
    auto g = [&](double u) {
      ContourPoint pt{u, Quaternion(ray.t0 + dir * u), Quaternion(sign)};
      return integrand(pt);
    };
    const int pieces = std::max(1, static_cast<int>(std::ceil(t_star)));
    auto res = integrate_interval(g, 0.0, t_star, opt, std::min(pieces, 256));
    res.tail_bound = ray.bound * std::exp(-k * t_star) / k;
    res.error += res.tail_bound;
    res.truncation = t_star;
    return res;
  }
  auto g = [&](double u) {
    const double one_minus = 1.0 - u;
    const double t = u / one_minus;
    ContourPoint pt{t, Quaternion(ray.t0 + dir * t), Quaternion(sign)};
    return (1.0 / (one_minus * one_minus)) * integrand(pt);
  };
  return integrate_interval(g, 0.0, 1.0, opt, 8);
}

QCALC_NS_END
