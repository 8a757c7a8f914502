#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <iosfwd>

#include "qcalc/namespace.hpp"

QCALC_NS_BEGIN

/// Real quaternion w + x e1 + y e2 + z e3 with Hamilton orientation
/// e1 e2 = e3, e2 e3 = e1, e3 e1 = e2.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_) : w(w_) {}  // NOLINT: reals embed implicitly
  constexpr Quaternion(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion e1() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion e2() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion e3() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr double real() const { return w; }
  constexpr Quaternion imag() const { return {0.0, x, y, z}; }
  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double abs() const { return std::sqrt(norm2()); }
  double imag_abs() const { return std::sqrt(x * x + y * y + z * z); }
  constexpr bool is_zero() const { return w == 0 && x == 0 && y == 0 && z == 0; }

  std::array<double, 4> to_array() const { return {w, x, y, z}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double a) {
    w *= a; x *= a; y *= a; z *= a;
    return *this;
  }
  constexpr Quaternion& operator/=(double a) {
    w /= a; x /= a; y /= a; z /= a;
    return *this;
  }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a /= s; }

/// Hamilton product.
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
  return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}

inline Quaternion mul(const Quaternion& a, const Quaternion& b) { return a * b; }
inline Quaternion conj(const Quaternion& q) { return q.conj(); }
inline double abs(const Quaternion& q) { return q.abs(); }

/// q^{-1} = conj(q)/|q|^2. Throws DomainError for q = 0.
Quaternion inverse(const Quaternion& q);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

/// Purely imaginary quaternion of modulus one.
class ImaginaryUnit {
 public:
  /// Defaults to e1.
  ImaginaryUnit() : dir_(Quaternion::e1()) {}
  /// Accepts any quaternion whose real part is negligible relative to its
  /// imaginary part and normalizes it. Throws DomainError otherwise.
  explicit ImaginaryUnit(const Quaternion& q, double tol = 1e-12);

  static ImaginaryUnit e1() { return ImaginaryUnit(Quaternion::e1()); }
  static ImaginaryUnit e2() { return ImaginaryUnit(Quaternion::e2()); }
  static ImaginaryUnit e3() { return ImaginaryUnit(Quaternion::e3()); }

  const Quaternion& q() const { return dir_; }
  operator const Quaternion&() const { return dir_; }  // NOLINT

  /// The point a + I b of the slice plane C_I.
  Quaternion point(double a, double b) const { return Quaternion(a) + dir_ * b; }
  Quaternion point(std::complex<double> z) const { return point(z.real(), z.imag()); }

 private:
  Quaternion dir_;
};

/// q = x0 + unit * x1 with x1 >= 0.
struct SliceDecomposition {
  double x0 = 0.0;
  double x1 = 0.0;
  ImaginaryUnit unit;

  Quaternion recompose() const { return unit.point(x0, x1); }
};

/// Real quaternions get the canonical unit e1.
SliceDecomposition decompose(const Quaternion& q);

/// Coordinates of q in the slice C_I when q lies in it; throws DomainError
/// if q is off the slice by more than tol.
std::complex<double> slice_coordinates(const Quaternion& q, const ImaginaryUnit& unit,
                                       double tol = 1e-12);

/// The 2-sphere [x] = { x0 + I x1 : I in S }.
struct Sphere {
  double x0 = 0.0;
  double x1 = 0.0;

  static Sphere of(const Quaternion& q) { return {q.real(), q.imag_abs()}; }
  bool is_point() const { return x1 == 0.0; }
  bool contains(const Quaternion& q, double tol = 1e-12) const;
  /// Euclidean distance between the two spheres (points with aligned units).
  double distance(const Sphere& other) const {
    return std::hypot(x0 - other.x0, x1 - other.x1);
  }
  double distance(const Quaternion& q) const { return distance(Sphere::of(q)); }
};

/// e^{x0}(cos x1 + I_x sin x1).
Quaternion qexp(const Quaternion& q);

/// Integer power by repeated squaring; n >= 0.
Quaternion qpow(const Quaternion& q, unsigned n);

/// Largest absolute component difference style distance |a - b|.
inline double dist(const Quaternion& a, const Quaternion& b) { return (a - b).abs(); }

QCALC_NS_END
