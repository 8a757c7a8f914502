#include "qcalc/quaternion.hpp"

#include <ostream>

#include "qcalc/errors.hpp"

QCALC_NS_BEGIN

Quaternion inverse(const Quaternion& q) {
  const double n2 = q.norm2();
  if (n2 == 0.0 || !std::isfinite(n2)) {
    throw DomainError("inverse: quaternion is zero");
  }
  return q.conj() / n2;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '[' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ']';
}

ImaginaryUnit::ImaginaryUnit(const Quaternion& q, double tol) {
  const double im = q.imag_abs();
  if (im == 0.0 || std::abs(q.w) > tol * std::max(1.0, im)) {
    throw DomainError("imaginary unit must be a nonzero purely imaginary quaternion");
  }
  dir_ = q.imag() / im;
}

SliceDecomposition decompose(const Quaternion& q) {
  SliceDecomposition d;
  d.x0 = q.w;
  d.x1 = q.imag_abs();
  if (d.x1 > 0.0) d.unit = ImaginaryUnit(q.imag());
  return d;
}

std::complex<double> slice_coordinates(const Quaternion& q, const ImaginaryUnit& unit,
                                       double tol) {
  const Quaternion& i = unit.q();
  const double b = q.x * i.x + q.y * i.y + q.z * i.z;
  const Quaternion off = q.imag() - i * b;
  if (off.abs() > tol * std::max(1.0, q.abs())) {
    throw DomainError("point does not lie in the requested slice plane");
  }
  return {q.w, b};
}

bool Sphere::contains(const Quaternion& q, double tol) const {
  return std::abs(q.real() - x0) <= tol && std::abs(q.imag_abs() - x1) <= tol;
}

Quaternion qexp(const Quaternion& q) {
  const double r = std::exp(q.w);
  const double im = q.imag_abs();
  if (im == 0.0) return Quaternion(r);
  const double k = r * std::sin(im) / im;
  return {r * std::cos(im), k * q.x, k * q.y, k * q.z};
}

Quaternion qpow(const Quaternion& q, unsigned n) {
  Quaternion result(1.0);
  Quaternion base = q;
  while (n > 0) {
    if (n & 1u) result = result * base;
    base = base * base;
    n >>= 1u;
  }
  return result;
}

QCALC_NS_END
