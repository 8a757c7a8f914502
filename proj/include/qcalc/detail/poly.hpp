#pragma once

// Real polynomials in one variable, ascending coefficients.

#include <algorithm>
#include <cmath>
#include <vector>

#include "qcalc/namespace.hpp"

QCALC_NS_BEGIN
namespace detail {

using Poly = std::vector<double>;

inline double poly_eval(const Poly& p, double t) {
  double r = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * t + *it;
  return r;
}

inline Poly poly_trim(Poly p) {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  if (p.empty()) p.push_back(0.0);
  return p;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return poly_trim(r);
}

inline Poly poly_scale(const Poly& a, double s) {
  Poly r = a;
  for (auto& c : r) c *= s;
  return poly_trim(r);
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return poly_trim(r);
}

/// p(offset + slope * r) as a polynomial in r.
inline Poly poly_compose_linear(const Poly& p, double offset, double slope) {
  Poly r{0.0};
  const Poly lin{offset, slope};
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = poly_add(poly_mul(r, lin), Poly{*it});
  return r;
}

inline Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return Poly{0.0};
  Poly r(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = static_cast<double>(i) * p[i];
  return r;
}

inline bool poly_is_constant_one(const Poly& p) {
  const Poly t = poly_trim(p);
  return t.size() == 1 && t[0] == 1.0;
}

inline std::size_t poly_degree(const Poly& p) { return poly_trim(p).size() - 1; }

/// Bound on sup_{tau >= 0} |P(t0 + tau)| e^{-rate tau}, taken termwise from
/// (|t0| + tau)^j e^{-rate (|t0| + tau)} <= (j / (e rate))^j.
inline double poly_decay_bound(const Poly& p, double t0, double rate) {
  double b = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    const double jj = static_cast<double>(j);
    const double peak = j == 0 ? 1.0 : std::pow(jj / (std::exp(1.0) * rate), jj);
    b += std::abs(p[j]) * std::exp(rate * std::abs(t0)) * peak;
  }
  return b;
}

}  // namespace detail
QCALC_NS_END
