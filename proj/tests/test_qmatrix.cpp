#include <complex>

#include "qcalc/qmatrix.hpp"
#include "test_util.hpp"

using namespace qcalc;
using cd = std::complex<double>;

TEST(QMatrix, EmbeddingOfScalars) {
  ComplexMatrix one = embed(QMatrix{{Quaternion(1.0)}});
  EXPECT_EQ(one, ComplexMatrix::Identity(2, 2));

  ComplexMatrix i = embed(QMatrix{{Quaternion::e1()}});
  EXPECT_EQ(i(0, 0), cd(0, 1));
  EXPECT_EQ(i(1, 1), cd(0, -1));
  EXPECT_EQ(i(0, 1), cd(0, 0));

  ComplexMatrix j = embed(QMatrix{{Quaternion::e2()}});
  EXPECT_EQ(j(0, 1), cd(1, 0));
  EXPECT_EQ(j(1, 0), cd(-1, 0));
  EXPECT_TRUE((j * j).isApprox(-ComplexMatrix::Identity(2, 2)));
}

TEST(QMatrix, EmbeddingIsMultiplicative) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const QMatrix a = qt::random_m(rng, 3);
    const QMatrix b = qt::random_m(rng, 3);
    EXPECT_LE((embed(a * b) - embed(a) * embed(b)).norm(), 1e-13);
    EXPECT_M_NEAR(unembed(embed(a)), a, 1e-15);
    const QVector v = qt::random_v(rng, 3);
    EXPECT_M_NEAR(unembed_vector(embed(a) * embed(v)), a * v, 1e-14);
  }
}

TEST(QMatrix, ScalarActsOnTheLeft) {
  const QMatrix m = QMatrix::diag({Quaternion::e2(), Quaternion(1.0)});
  const QMatrix left = Quaternion::e1() * m;
  const QMatrix right = m * Quaternion::e1();
  EXPECT_EQ(left(0, 0), Quaternion::e3());
  EXPECT_EQ(right(0, 0), -Quaternion::e3());
}

TEST(QMatrix, Inverse) {
  EXPECT_M_NEAR(inverse(QMatrix::identity(3)), QMatrix::identity(3), 1e-15);
  const QMatrix d = QMatrix::diag({Quaternion(3, 2, 0, 0), Quaternion(1.0)});
  const QMatrix expected = QMatrix::diag({Quaternion(3, -2, 0, 0) / 13.0, Quaternion(1.0)});
  EXPECT_M_NEAR(inverse(d), expected, 1e-15);
  EXPECT_M_NEAR(inverse(d) * d, QMatrix::identity(2), 1e-15);

  std::mt19937_64 rng(9);
  const QMatrix a = qt::random_m(rng, 4);
  EXPECT_M_NEAR(a * inverse(a), QMatrix::identity(4), 1e-12);
}

TEST(QMatrix, SingularInverseThrows) {
  QMatrix a{{Quaternion(1.0), Quaternion::e1()}, {Quaternion(), Quaternion()}};
  EXPECT_THROW(inverse(a), SingularMatrixError);
}

TEST(QMatrix, NormsOfUnitaryDiagonal) {
  const QMatrix u = QMatrix::diag({Quaternion::e1(), Quaternion::e2()});
  EXPECT_NEAR(u.norm(), 1.0, 1e-15);
  EXPECT_NEAR(u.frobenius(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(condition_number(u), 1.0, 1e-14);
}

TEST(QMatrix, Power) {
  std::mt19937_64 rng(2);
  const QMatrix a = qt::random_m(rng, 2);
  EXPECT_M_NEAR(power(a, 0), QMatrix::identity(2), 0.0);
  EXPECT_M_NEAR(power(a, 3), a * a * a, 1e-13);
}

TEST(QMatrix, ColumnsRoundTrip) {
  std::mt19937_64 rng(3);
  const QMatrix a = qt::random_m(rng, 3);
  EXPECT_M_NEAR(QMatrix::from_columns({a.column(0), a.column(1), a.column(2)}), a, 0.0);
  EXPECT_M_NEAR(a * QVector::basis(3, 1), a.column(1), 0.0);
}
