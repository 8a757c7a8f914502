#include <cmath>
#include <complex>

#include "qcalc/measure.hpp"
#include "qcalc/slice_function.hpp"
#include "test_util.hpp"

using namespace qcalc;

namespace {

const Quaternion kE1 = Quaternion::e1();
const Quaternion kE2 = Quaternion::e2();
const Quaternion kE3 = Quaternion::e3();

SliceFunction square() { return RightPolynomial{{Quaternion(), Quaternion(), Quaternion(1.0)}}; }

Quaternion random_point(std::mt19937_64& rng, double scale = 1.0) {
  return scale * qt::random_q(rng);
}

}  // namespace

TEST(SliceFunction, PolynomialEvaluation) {
  EXPECT_Q_NEAR(eval(square(), Quaternion(1, 0, 1, 0)), 2.0 * kE2, 1e-15);
  const SliceFunction f = RightPolynomial{{kE1, kE2}};
  const Quaternion x(0.5, -1.0, 0.25, 2.0);
  EXPECT_Q_NEAR(eval(f, x), kE1 + kE2 * x, 1e-15);
}

TEST(SliceFunction, StemPair) {
  const StemPair sp = stem_pair(square(), 1.0, 1.0, ImaginaryUnit::e1());
  EXPECT_Q_NEAR(sp.alpha, Quaternion(), 1e-15);
  EXPECT_Q_NEAR(sp.beta, Quaternion(2.0), 1e-15);
  // alpha + beta J reproduces the value on every slice.
  std::mt19937_64 rng(4);
  const SliceFunction f = RightPolynomial{{kE3, Quaternion(1, 1, 0, 0), kE2}};
  const StemPair g = stem_pair(f, 0.3, 0.8, ImaginaryUnit::e2());
  for (int k = 0; k < 10; ++k) {
    const ImaginaryUnit j(qt::random_q(rng).imag());
    EXPECT_Q_NEAR(eval(f, j.point(0.3, 0.8)), g.alpha + g.beta * j.q(), 1e-13);
  }
}

TEST(SliceFunction, ExpKernelAndTransform) {
  EXPECT_Q_NEAR(eval(ExpKernel{1.0}, kE1), Quaternion(std::cos(1.0), -std::sin(1.0), 0, 0), 1e-15);
  EXPECT_Q_NEAR(eval(ExpKernel{0.0}, Quaternion(1, 2, 3, 4)), Quaternion(1.0), 1e-15);
  const SliceFunction t = TransformOf{kernel_measure(Quaternion(2.0))};
  const Quaternion x(0.5, 0, 1.0, -0.5);
  EXPECT_Q_NEAR(eval(t, x), cauchy_kernel_right(Quaternion(2.0), x), 1e-14);
  EXPECT_EQ(t.domain().kind, Domain::Kind::kStrip);
  EXPECT_THROW(eval(t, Quaternion(2.5)), DomainError);
  EXPECT_EQ(SliceFunction(TransformOf{QMeasure({{-3.0, Quaternion(1.0)}, {2.0, kE1}}, {})}).frequency(), 3.0);
}

TEST(SliceFunction, KernelIdentities) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const Quaternion s = random_point(rng, 2.0);
    const Quaternion x = random_point(rng, 2.0);
    EXPECT_Q_NEAR(cauchy_kernel_left(s, x), -cauchy_kernel_right(x, s), 1e-10 * (1.0 + cauchy_kernel_left(s, x).abs()));
    EXPECT_Q_NEAR(kernel_power(s, x, 1), cauchy_kernel_right(s, x), 1e-12 * (1.0 + kernel_power(s, x, 1).abs()));
  }
  // Commuting arguments reduce to the plain inverse (s - x)^{-1}.
  const Quaternion s(2.0, 1.0, 0, 0);
  const Quaternion x(-0.5, 0.3, 0, 0);
  EXPECT_Q_NEAR(cauchy_kernel_right(s, x), inverse(s - x), 1e-14);
  EXPECT_Q_NEAR(kernel_power(s, x, 3), qpow(inverse(s - x), 3), 1e-13);
  EXPECT_THROW(cauchy_kernel_right(Quaternion(1, 1, 0, 0), Quaternion(1, 0, 1, 0)), SingularityError);
  EXPECT_THROW(kernel_power(s, x, 0), PreconditionError);
}

TEST(SliceFunction, KernelPowerIsRealDerivative) {
  std::mt19937_64 rng(12);
  for (unsigned n = 1; n <= 4; ++n) {
    const Quaternion s(2.0, 0.0, 1.0, 0.0);
    const Quaternion x = random_point(rng, 0.5);
    const Quaternion fd = detail::richardson_derivative(
        [&](double e) { return kernel_power(s + Quaternion(e), x, n); }, 1e-3);
    EXPECT_Q_NEAR(fd, -static_cast<double>(n) * kernel_power(s, x, n + 1), 1e-7);
  }
}

TEST(SliceFunction, KernelRegularity) {
  std::mt19937_64 rng(13);
  const ImaginaryUnit u = ImaginaryUnit::e1();
  for (int k = 0; k < 20; ++k) {
    const Quaternion s = random_point(rng, 1.0) + Quaternion(3.0);
    const Quaternion x = random_point(rng, 1.0);
    const auto in_x = [&](const Quaternion& y) { return cauchy_kernel_right(s, y); };
    const auto in_s = [&](const Quaternion& y) { return cauchy_kernel_right(y, x); };
    EXPECT_LT(right_regularity_residual(in_x, x, u).abs(), 1e-8);
    EXPECT_LT(left_regularity_residual(in_s, s, u).abs(), 1e-8);
    const auto p2 = [&](const Quaternion& y) { return kernel_power(s, y, 2); };
    EXPECT_LT(right_regularity_residual(p2, x, u).abs(), 1e-8);
  }
}

TEST(SliceFunction, PolynomialRegularity) {
  const SliceFunction f = RightPolynomial{{kE1, Quaternion(1, 0, 2, 0), kE3}};
  std::mt19937_64 rng(14);
  for (int k = 0; k < 10; ++k) {
    const Quaternion x = random_point(rng);
    EXPECT_LT(right_regularity_residual([&](const Quaternion& y) { return eval(f, y); }, x, ImaginaryUnit::e1()).abs(),
              1e-8);
  }
}

TEST(SliceFunction, SliceDerivative) {
  const SliceFunction cube = RightPolynomial{{Quaternion(), Quaternion(), Quaternion(), kE2}};
  const Quaternion x(0.5, 0.2, -0.7, 0.1);
  EXPECT_Q_NEAR(slice_derivative(cube, x, 1), 3.0 * kE2 * x * x, 1e-7);
  EXPECT_Q_NEAR(slice_derivative(cube, x, 2), 6.0 * kE2 * x, 1e-5);
  EXPECT_Q_NEAR(slice_derivative(cube, x, 0), eval(cube, x), 1e-15);
  const SliceFunction e = ExpKernel{2.0};
  EXPECT_Q_NEAR(slice_derivative(e, x, 1), -2.0 * eval(e, x), 1e-7);
}

TEST(SliceFunction, Intrinsic) {
  const auto yes = is_intrinsic(RightPolynomial{{Quaternion(1.0), Quaternion(-2.0), Quaternion(1.0)}}, 30);
  EXPECT_TRUE(yes.intrinsic);
  EXPECT_GE(yes.slices, 3);
  EXPECT_LT(yes.max_deviation, 1e-12);
  EXPECT_FALSE(is_intrinsic(SliceFunction::constant(kE1), 30).intrinsic);
  EXPECT_TRUE(is_intrinsic(ExpKernel{1.5}, 30).intrinsic);
  EXPECT_TRUE(is_intrinsic(TransformOf{kernel_measure(Quaternion(2.0))}, 30).intrinsic);
  EXPECT_FALSE(is_intrinsic(TransformOf{QMeasure::dirac(1.0, kE3)}, 30).intrinsic);
}

TEST(SliceFunction, CauchyReconstruction) {
  const Quaternion x(1, 0, 1, 0);
  for (const ImaginaryUnit& slice : {ImaginaryUnit::e1(), ImaginaryUnit::e3(), ImaginaryUnit(Quaternion(0, 1, 1, 1))}) {
    const auto r = cauchy_formula_reconstruct(square(), x, CircleContour{0.0, 3.0, slice});
    EXPECT_Q_NEAR(r.value, 2.0 * kE2, 1e-11);
  }
  const SliceFunction f = RightPolynomial{{kE3, Quaternion(0.5, 1, 0, 0), kE2}};
  const Quaternion y(-0.3, 0.2, 0.4, -0.1);
  EXPECT_Q_NEAR(cauchy_formula_reconstruct(f, y, CircleContour{0.0, 2.0, ImaginaryUnit::e2()}).value, eval(f, y),
                1e-11);
  const SliceFunction e = ExpKernel{1.0};
  EXPECT_Q_NEAR(cauchy_formula_reconstruct(e, y, CircleContour{0.0, 2.0, ImaginaryUnit::e1()}).value, eval(e, y),
                1e-11);
  const SliceFunction k = KernelPower{Quaternion(5.0), 1};
  EXPECT_THROW(cauchy_formula_reconstruct(k, y, CircleContour{0.0, 6.0, ImaginaryUnit::e1()}), DomainError);
}

TEST(SliceFunction, Splitting) {
  const ImaginaryUnit i = ImaginaryUnit::e1();
  const ImaginaryUnit j = ImaginaryUnit::e2();
  const std::complex<double> z(0.7, -0.4);
  SplitValue v = splitting(SliceFunction::constant(kE2), i, j, z);
  EXPECT_NEAR(std::abs(v.f1), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v.f2 - 1.0), 0.0, 1e-15);
  v = splitting(square(), i, j, z);
  EXPECT_NEAR(std::abs(v.f1 - z * z), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v.f2), 0.0, 1e-15);
  EXPECT_LT(v.cr_residual_f1, 1e-8);
  v = splitting(RightPolynomial{{kE2, Quaternion(1.0)}}, i, j, z);
  EXPECT_NEAR(std::abs(v.f1 - z), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v.f2 - 1.0), 0.0, 1e-15);
  v = splitting(RightPolynomial{{Quaternion(1, 1, 2, 3), Quaternion(0, 0.5, -1, 2), kE3}}, i, j, z);
  EXPECT_LT(v.cr_residual_f1, 1e-8);
  EXPECT_LT(v.cr_residual_f2, 1e-8);
  EXPECT_THROW(splitting(square(), i, i, z), DomainError);
}

TEST(SliceFunction, StemForm) {
  const Stem stem{ImaginaryUnit::e1(), [](std::complex<double> z) { return Quaternion(z.real() * z.real() - z.imag() * z.imag(), 2.0 * z.real() * z.imag(), 0, 0); },
                  Domain::whole()};
  std::mt19937_64 rng(15);
  for (int k = 0; k < 10; ++k) {
    const Quaternion x = random_point(rng);
    EXPECT_Q_NEAR(eval(stem, x), x * x, 1e-14);
  }
}

TEST(SliceFunction, ProductForm) {
  const SliceFunction f = RightPolynomial{{kE1, Quaternion(1.0)}};
  const SliceFunction g = ExpKernel{0.5};
  const SliceFunction fg = SliceFunction::product(f, g);
  const Quaternion x(0.2, 0.3, -0.4, 0.5);
  EXPECT_Q_NEAR(eval(fg, x), eval(f, x) * eval(g, x), 1e-15);
  EXPECT_EQ(fg.frequency(), 0.5);
  const SliceFunction bounded = SliceFunction::product(f, TransformOf{kernel_measure(Quaternion(1.0))});
  EXPECT_THROW(eval(bounded, Quaternion(1.5)), DomainError);
}

TEST(SliceFunction, Domains) {
  const Domain strip = Domain::strip(-1.0, 2.0);
  EXPECT_TRUE(strip.contains(Quaternion(1.5, 10, 0, 0)));
  EXPECT_FALSE(strip.contains(Quaternion(2.5)));
  EXPECT_TRUE(strip.contains_closed_strip(0.9));
  EXPECT_FALSE(strip.contains_closed_strip(1.0));
  EXPECT_TRUE(strip.contains_disk(0.5, 1.4));
  EXPECT_FALSE(strip.contains_disk(0.5, 1.6));

  const Domain ball = Domain::ball(3.0);
  EXPECT_EQ(ball.ball_radius(), 3.0);
  EXPECT_FALSE(ball.contains_closed_strip(1.0));

  const Domain holes = Domain::sphere_complement({Sphere{2.0, 1.0}});
  EXPECT_FALSE(holes.contains(Quaternion(2.0, 0, 0, 1.0)));
  EXPECT_TRUE(holes.contains(Quaternion(2.0, 0, 0, 0.5)));
  EXPECT_NEAR(holes.ball_radius(), std::sqrt(5.0), 1e-14);
  EXPECT_FALSE(holes.contains_disk(0.0, 3.0));

  const Domain both = Domain::intersection({strip, ball});
  EXPECT_FALSE(both.contains(Quaternion(1.5, 3.0, 0, 0)));
  EXPECT_TRUE(both.contains(Quaternion(1.5, 1.0, 0, 0)));
  EXPECT_TRUE(Domain::whole().contains_closed_strip(100.0));
}
