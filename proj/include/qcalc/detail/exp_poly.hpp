#pragma once

// Closed-form integrals  int_lo^hi c P(t) e^{t lambda} d E(t) dt  where
// E(t) = e^{-tB} for a quaternion or matrix B. With X solving the Sylvester
// equation lambda X - X B = d one has
//   d/dt [e^{t lambda} X E(t)] = e^{t lambda} d E(t),
// so repeated integration by parts reduces every moment to boundary terms.

#include <cmath>

#include "qcalc/detail/poly.hpp"
#include "qcalc/quaternion.hpp"

QCALC_NS_BEGIN
namespace detail {

/// int_lo^hi t^k e^{t lambda} d E(t) dt. Infinite endpoints contribute
/// nothing; convergence there is the caller's precondition.
template <class V, class Solve, class RightExp>
V exp_moment(unsigned k, const V& d, double lo, double hi, const Quaternion& lambda,
             const Solve& solve, const RightExp& right_exp) {
  const V x = solve(d);
  auto term = [&](double t) {
    return std::pow(t, static_cast<double>(k)) * (qexp(t * lambda) * x * right_exp(t));
  };
  V result = 0.0 * x;
  if (std::isfinite(hi)) result = result + term(hi);
  if (std::isfinite(lo)) result = result - term(lo);
  if (k == 0) return result;
  return result - static_cast<double>(k) * exp_moment(k - 1, x, lo, hi, lambda, solve, right_exp);
}

template <class V, class Solve, class RightExp>
V exp_poly_integral(const Quaternion& c, const Poly& p, const V& d, double lo, double hi,
                    const Quaternion& lambda, const Solve& solve, const RightExp& right_exp) {
  V sum = 0.0 * d;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    sum = sum + p[j] * exp_moment(static_cast<unsigned>(j), d, lo, hi, lambda, solve, right_exp);
  }
  return c * sum;
}

}  // namespace detail
QCALC_NS_END
