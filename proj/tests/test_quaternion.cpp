#include <cmath>
#include <numbers>

#include "qcalc/quaternion.hpp"
#include "test_util.hpp"

using namespace qcalc;

namespace {

// Left multiplication as a 4x4 real matrix acting on (w, x, y, z).
std::array<double, 4> left_mul_oracle(const Quaternion& a, const Quaternion& b) {
  const double m[4][4] = {{a.w, -a.x, -a.y, -a.z},
                          {a.x, a.w, -a.z, a.y},
                          {a.y, a.z, a.w, -a.x},
                          {a.z, -a.y, a.x, a.w}};
  const double v[4] = {b.w, b.x, b.y, b.z};
  std::array<double, 4> r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) r[i] += m[i][k] * v[k];
  return r;
}

}  // namespace

TEST(Quaternion, HamiltonOrientation) {
  EXPECT_EQ(Quaternion::e1() * Quaternion::e2(), Quaternion::e3());
  EXPECT_EQ(Quaternion::e2() * Quaternion::e3(), Quaternion::e1());
  EXPECT_EQ(Quaternion::e3() * Quaternion::e1(), Quaternion::e2());
  EXPECT_EQ(Quaternion::e2() * Quaternion::e1(), -Quaternion::e3());
  EXPECT_EQ(Quaternion::e1() * Quaternion::e1(), Quaternion(-1.0));
}

TEST(Quaternion, ProductAgainstMatrixOracle) {
  const Quaternion p = Quaternion(1, 2, 0, 0) * Quaternion(3, 0, 1, 0);
  EXPECT_EQ(p, Quaternion(3, 6, 1, 2));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const Quaternion a = qt::random_q(rng, 3.0);
    const Quaternion b = qt::random_q(rng, 3.0);
    const auto oracle = left_mul_oracle(a, b);
    const auto got = (a * b).to_array();
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(got[i], oracle[i], 1e-13);
  }
}

TEST(Quaternion, Inverse) {
  const Quaternion q(1, 1, 1, 0);
  EXPECT_Q_NEAR(q * inverse(q), Quaternion(1.0), 1e-15);
  EXPECT_EQ(inverse(Quaternion(2.0)), Quaternion(0.5));
  EXPECT_EQ(inverse(Quaternion::e1()), -Quaternion::e1());
  EXPECT_Q_NEAR(inverse(Quaternion(3, 2, 0, 0)), Quaternion(3, -2, 0, 0) / 13.0, 1e-16);
  EXPECT_Q_NEAR(Quaternion(3, 2, 0, 0) * inverse(Quaternion(3, 2, 0, 0)), Quaternion(1.0), 1e-15);
  EXPECT_THROW(inverse(Quaternion()), DomainError);
}

TEST(Quaternion, NormIsMultiplicative) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const Quaternion a = qt::random_q(rng, 2.0);
    const Quaternion b = qt::random_q(rng, 2.0);
    EXPECT_NEAR((a * b).abs(), a.abs() * b.abs(), 1e-13);
    EXPECT_Q_NEAR((a * b).conj(), b.conj() * a.conj(), 1e-14);
  }
}

TEST(Quaternion, Decompose) {
  auto d = decompose(Quaternion(1, 2, 0, 0));
  EXPECT_EQ(d.x0, 1.0);
  EXPECT_EQ(d.x1, 2.0);
  EXPECT_EQ(d.unit.q(), Quaternion::e1());

  d = decompose(Quaternion(5.0));
  EXPECT_EQ(d.x0, 5.0);
  EXPECT_EQ(d.x1, 0.0);
  EXPECT_EQ(d.unit.q(), Quaternion::e1());

  d = decompose(Quaternion(0, 0, 1, 1));
  EXPECT_NEAR(d.x1, std::sqrt(2.0), 1e-15);
  EXPECT_Q_NEAR(d.unit.q(), Quaternion(0, 0, 1, 1) / std::sqrt(2.0), 1e-15);
  EXPECT_Q_NEAR(d.recompose(), Quaternion(0, 0, 1, 1), 1e-15);
}

TEST(Quaternion, SliceCoordinates) {
  const auto z = slice_coordinates(Quaternion(1, 0, 2, 0), ImaginaryUnit::e2());
  EXPECT_EQ(z, std::complex<double>(1.0, 2.0));
  EXPECT_THROW(slice_coordinates(Quaternion(1, 0, 2, 0), ImaginaryUnit::e1()), DomainError);
}

TEST(Quaternion, ImaginaryUnitRejectsReal) {
  EXPECT_THROW(ImaginaryUnit{Quaternion(1.0)}, DomainError);
  EXPECT_THROW(ImaginaryUnit{Quaternion()}, DomainError);
  EXPECT_Q_NEAR(ImaginaryUnit(Quaternion(0, 3, 4, 0)).q(), Quaternion(0, 0.6, 0.8, 0), 1e-15);
}

TEST(Quaternion, Exponential) {
  EXPECT_EQ(qexp(Quaternion()), Quaternion(1.0));
  EXPECT_Q_NEAR(qexp(std::numbers::pi / 2 * Quaternion::e1()), Quaternion::e1(), 1e-15);
  // Power series oracle.
  const Quaternion x(1, 0, 1, 0);
  Quaternion term(1.0);
  Quaternion sum(1.0);
  for (int k = 1; k < 40; ++k) {
    term = term * x / static_cast<double>(k);
    sum = sum + term;
  }
  EXPECT_Q_NEAR(qexp(x), sum, 1e-12);
  EXPECT_Q_NEAR(qexp(x), std::exp(1.0) * Quaternion(std::cos(1.0), 0, std::sin(1.0), 0), 1e-14);
}

TEST(Quaternion, Power) {
  const Quaternion q(1, 2, -1, 0.5);
  EXPECT_EQ(qpow(q, 0), Quaternion(1.0));
  EXPECT_Q_NEAR(qpow(q, 3), q * q * q, 1e-13);
}

TEST(Quaternion, SphereDistance) {
  const Sphere s = Sphere::of(Quaternion(1, 0, 2, 0));
  EXPECT_TRUE(s.contains(Quaternion(1, 2, 0, 0)));
  EXPECT_FALSE(s.contains(Quaternion(1, 1, 0, 0)));
  EXPECT_NEAR(s.distance(Quaternion(1, 0, 0, 3)), 1.0, 1e-15);
}
