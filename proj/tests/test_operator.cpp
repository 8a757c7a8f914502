#include <cmath>
#include <numbers>

#include "qcalc/operator.hpp"
#include "test_util.hpp"

using namespace qcalc;

TEST(SSpectrum, DiagonalWithComplexEntry) {
  const auto s = s_spectrum(QMatrix::diag({Quaternion(1, 2, 0, 0), Quaternion(3.0)}));
  ASSERT_EQ(s.spheres.size(), 2u);
  EXPECT_NEAR(s.spheres[0].sphere.x0, 1.0, 1e-12);
  EXPECT_NEAR(s.spheres[0].sphere.x1, 2.0, 1e-12);
  EXPECT_NEAR(s.spheres[1].sphere.x0, 3.0, 1e-12);
  EXPECT_NEAR(s.spheres[1].sphere.x1, 0.0, 1e-12);
  EXPECT_EQ(s.total_multiplicity(), 2);
}

TEST(SSpectrum, ZeroOperator) {
  const auto s = s_spectrum(QMatrix::zero(2));
  ASSERT_EQ(s.spheres.size(), 1u);
  EXPECT_EQ(s.spheres[0].multiplicity, 2);
  EXPECT_NEAR(s.spheres[0].sphere.x0, 0.0, 1e-14);
}

TEST(SSpectrum, EntriesOnTheSameSphere) {
  const auto s = s_spectrum(QMatrix::diag({Quaternion::e1(), Quaternion::e2()}));
  ASSERT_EQ(s.spheres.size(), 1u);
  EXPECT_NEAR(s.spheres[0].sphere.x1, 1.0, 1e-12);
  EXPECT_EQ(s.spheres[0].multiplicity, 2);
}

TEST(SSpectrum, InvariantUnderQuaternionicSimilarity) {
  std::mt19937_64 rng(21);
  const QMatrix t = qt::random_m(rng, 3);
  const QMatrix p = qt::random_m(rng, 3);
  const auto a = s_spectrum(t);
  const auto b = s_spectrum(inverse(p) * t * p);
  ASSERT_EQ(a.spheres.size(), b.spheres.size());
  for (std::size_t i = 0; i < a.spheres.size(); ++i) {
    EXPECT_NEAR(a.spheres[i].sphere.x0, b.spheres[i].sphere.x0, 1e-9);
    EXPECT_NEAR(a.spheres[i].sphere.x1, b.spheres[i].sphere.x1, 1e-9);
  }
}

TEST(Resolvent, PseudoResolventOfDiagonal) {
  const QMatrix t = QMatrix::diag({Quaternion::e1(), Quaternion::e2()});
  // Entrywise q^2 - 4q + 4 = 3 - 4q for q = e1, e2.
  const QMatrix expected = QMatrix::diag({Quaternion(3, 4, 0, 0) / 25.0, Quaternion(3, 0, 4, 0) / 25.0});
  EXPECT_M_NEAR(pseudo_resolvent(Quaternion(2.0), t), expected, 1e-15);
  EXPECT_M_NEAR(pseudo_resolvent(Quaternion(2.0), QMatrix::zero(2)), 0.25 * QMatrix::identity(2), 1e-15);
  EXPECT_THROW(pseudo_resolvent(Quaternion::e3(), t), SpectralProximityError);
}

TEST(Resolvent, RealPointIsTheInverse) {
  const QMatrix t = QMatrix::diag({Quaternion(1, 2, 0, 0), Quaternion(3.0)});
  const QMatrix expected = QMatrix::diag({Quaternion(3, 2, 0, 0) / 13.0, Quaternion(1.0)});
  EXPECT_M_NEAR(s_resolvent_right(Quaternion(4.0), t), expected, 1e-14);
  EXPECT_M_NEAR(s_resolvent_right(Quaternion(4.0), t), inverse(4.0 * QMatrix::identity(2) - t), 1e-14);
}

TEST(Resolvent, ZeroOperator) {
  const Quaternion s(1, -2, 0.5, 3);
  EXPECT_M_NEAR(s_resolvent_right(s, QMatrix::zero(2)), QMatrix::scalar(2, inverse(s)), 1e-15);
}

TEST(Resolvent, Equation) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 50; ++k) {
    const QMatrix t = qt::random_m(rng, 3);
    const Quaternion s = qt::random_q(rng, 3.0);
    if (s_spectrum(t).distance(s) < 0.1) continue;
    const QMatrix r = s_resolvent_right(s, t);
    const double scale = (1 + s.abs()) * (1 + t.norm());
    EXPECT_M_NEAR(s * r - r * t, QMatrix::identity(3), 1e-11 * scale);
  }
}

TEST(Resolvent, PowerMatchesSliceDerivative) {
  std::mt19937_64 rng(8);
  const QMatrix t = qt::random_m(rng, 2);
  const Quaternion s(2.5, 0.4, -1.0, 0.3);
  ResolventEvaluator r(t);
  const double h = 1e-5;
  const QMatrix d = (0.5 / h) * (r(s + Quaternion(h)) - r(s - Quaternion(h)));
  EXPECT_M_NEAR(d, -1.0 * r.power(2, s), 1e-6);
  EXPECT_M_NEAR(r.power(1, s), r(s), 1e-15);
}

TEST(Resolvent, PowerAtRealPointIsMatrixPower) {
  std::mt19937_64 rng(12);
  const QMatrix t = qt::random_m(rng, 3, 0.5);
  const QMatrix r = s_resolvent_right(Quaternion(4.0), t);
  EXPECT_M_NEAR(s_resolvent_right_power(3, Quaternion(4.0), t), r * r * r, 1e-13);
}

TEST(Resolvent, OnTheSphereThrows) {
  const QMatrix t = QMatrix::diag({Quaternion::e1(), Quaternion::e2()});
  EXPECT_THROW(s_resolvent_right(Quaternion::e1(), t), SpectralProximityError);
  EXPECT_THROW(s_resolvent_right(Quaternion(0, 0, 0, 1), t), SpectralProximityError);
}

TEST(Group, ExponentialBasics) {
  EXPECT_M_NEAR(qexp_matrix(qt::diag_e1_e2half(), 0.0), QMatrix::identity(2), 1e-15);
  const QMatrix t = QMatrix::diag({Quaternion::e1(), Quaternion()});
  EXPECT_M_NEAR(qexp_matrix(t, std::numbers::pi), QMatrix::diag({Quaternion(-1.0), Quaternion(1.0)}), 1e-14);
}

TEST(Group, TaylorOracle) {
  std::mt19937_64 rng(31);
  QMatrix t = qt::random_m(rng, 3);
  t = (1.0 / t.norm()) * t;
  QMatrix term = QMatrix::identity(3);
  QMatrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = (1.0 / k) * (term * t);
    sum = sum + term;
  }
  EXPECT_M_NEAR(qexp_matrix(t, 1.0), sum, 1e-10);
  GroupEvaluator g(t);
  EXPECT_M_NEAR(g(0.7) * g(-0.7), QMatrix::identity(3), 1e-13);
  EXPECT_M_NEAR(g(0.3) * g(0.4), g(0.7), 1e-13);
}

TEST(Group, RangeCap) {
  EXPECT_THROW(qexp_matrix(QMatrix::identity(2), 1000.0), RangeError);
}

TEST(Group, LaplaceOfGroup) {
  EXPECT_M_NEAR(laplace_of_group(Quaternion(2.0), QMatrix::zero(2), LaplaceSide::kPositive).value,
                0.5 * QMatrix::identity(2), 1e-9);
  const QMatrix t = QMatrix::diag({Quaternion::e1(), Quaternion::e2()});
  EXPECT_M_NEAR(laplace_of_group(Quaternion(2.0), t, LaplaceSide::kPositive).value,
                s_resolvent_right(Quaternion(2.0), t), 1e-7);
  EXPECT_M_NEAR(laplace_of_group(Quaternion(-2.0), t, LaplaceSide::kNegative).value,
                s_resolvent_right(Quaternion(-2.0), t), 1e-7);
  const Quaternion s(1.5, 0, 0.5, 1);
  EXPECT_M_NEAR(laplace_of_group(s, t, LaplaceSide::kPositive).value, s_resolvent_right(s, t), 1e-7);
}

TEST(Group, LaplaceNeedsMargin) {
  const QMatrix t = QMatrix::diag({Quaternion::e1(), Quaternion::e2()});
  EXPECT_THROW(laplace_of_group(Quaternion(0.01), t, LaplaceSide::kPositive), ConvergenceError);
  EXPECT_THROW(laplace_of_group(Quaternion(2.0), t, LaplaceSide::kNegative), ConvergenceError);
}

TEST(Group, Envelope) {
  const auto zero = group_envelope(QMatrix::zero(2), 5.0, 101, 0.0);
  EXPECT_EQ(zero.M, 1.0);
  EXPECT_EQ(zero.omega, 0.0);

  const auto rot = group_envelope(qt::diag_e1_e2half(), 5.0, 201, 0.0);
  EXPECT_LE(rot.omega, 1e-12);
  EXPECT_GE(rot.M, 1.0);
  EXPECT_LT(rot.M, 1.0 + 1e-12);

  const auto shifted = group_envelope(QMatrix::diag({Quaternion(1, 1, 0, 0), Quaternion(-1.0)}), 3.0, 61, 0.0);
  EXPECT_NEAR(shifted.omega, 1.0, 1e-12);
}

TEST(Group, ResolventPowerBound) {
  const auto zero = hy_bound_check(QMatrix::zero(2), {0.5, -1.0, 3.0}, 5,
                                   group_envelope(QMatrix::zero(2), 5.0, 11, 0.0));
  EXPECT_TRUE(zero.pass);
  EXPECT_NEAR(zero.max_ratio, 1.0, 1e-12);

  const auto rot = hy_bound_check(qt::diag_e1_e2half(), {1.0, -1.0, 2.0, -2.0}, 4);
  EXPECT_TRUE(rot.pass);
  EXPECT_EQ(rot.entries.size(), 16u);

  EXPECT_THROW(hy_bound_check(qt::diag_e1_e2half(), {0.0}, 2), PreconditionError);
}
