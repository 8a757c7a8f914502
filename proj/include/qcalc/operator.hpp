#pragma once

// Quaternionic matrices as bounded right-linear operators: S-spectrum,
// pseudo-resolvent, right S-resolvent and its powers, the generated group
// exp(tT), its Laplace transform and growth envelope.

#include <optional>
#include <vector>

#include "qcalc/qmatrix.hpp"
#include "qcalc/quadrature.hpp"

QCALC_NS_BEGIN

struct SpectralSphere {
  Sphere sphere;
  int multiplicity = 1;
};

/// Axially symmetric S-spectrum of a matrix, as a list of spheres.
struct SSpectrum {
  std::vector<SpectralSphere> spheres;

  int total_multiplicity() const;
  /// Distance from the sphere [s] to the nearest spectral sphere.
  double distance(const Quaternion& s) const;
  /// max |Re| over the spectrum.
  double max_abs_real() const;
  /// max (|x0| + x1) over the spectrum.
  double max_extent() const;
  /// max modulus sqrt(x0^2 + x1^2) over the spectrum.
  double max_modulus() const;
};

/// Eigenvalues of chi(T) come in conjugate pairs; each pair {lambda,
/// conj(lambda)} gives the sphere (Re lambda, |Im lambda|).
SSpectrum s_spectrum(const QMatrix& t);

/// Smallest singular value of T^2 - 2 Re(s) T + |s|^2 I.
double pseudo_resolvent_sigma_min(const Quaternion& s, const QMatrix& t);

/// Minimum spectral distance for s to count as a resolvent point.
inline double spectral_margin(double t_norm) { return 1e-8 * (1.0 + t_norm); }

/// Precomputes the data needed to evaluate S_R^{-1}(s, T) at many points.
class ResolventEvaluator {
 public:
  explicit ResolventEvaluator(QMatrix t);

  const QMatrix& op() const { return t_; }
  const SSpectrum& spectrum() const { return spectrum_; }
  double op_norm() const { return norm_; }

  /// Throws SpectralProximityError if [s] is within the margin of sigma_S(T).
  void require_resolvent_point(const Quaternion& s) const;

  /// (T^2 - 2 Re(s) T + |s|^2 I)^{-1}.
  QMatrix pseudo(const Quaternion& s) const;
  /// S_R^{-1}(s, T) = -(T - conj(s) I) (T^2 - 2 Re(s) T + |s|^2 I)^{-1}.
  QMatrix operator()(const Quaternion& s) const;
  /// S_R^{-n}(s, T) = sum_k C(n,k) conj(s)^{n-k} (-T)^k (T^2 - 2 Re(s) T + |s|^2 I)^{-n}.
  QMatrix power(unsigned n, const Quaternion& s) const;

 private:
  ComplexMatrix pseudo_embedded(const Quaternion& s) const;

  QMatrix t_;
  QMatrix t2_;
  ComplexMatrix chi_t_;
  ComplexMatrix chi_t2_;
  SSpectrum spectrum_;
  double norm_;
};

/// Inverse of T^2 - 2 Re(s) T + |s|^2 I with a residual check.
QMatrix pseudo_resolvent(const Quaternion& s, const QMatrix& t);
QMatrix s_resolvent_right(const Quaternion& s, const QMatrix& t);
QMatrix s_resolvent_right_power(unsigned n, const Quaternion& s, const QMatrix& t);

/// exp(tT) through the complex adjoint (scaling and squaring, Pade 13).
/// Throws RangeError when |t| ||T|| exceeds `cap`.
QMatrix qexp_matrix(const QMatrix& t_op, double t, double cap = 700.0);

/// Reusable exponential: caches chi(T).
class GroupEvaluator {
 public:
  explicit GroupEvaluator(const QMatrix& t_op, double cap = 700.0);
  QMatrix operator()(double t) const;
  std::size_t n() const { return n_; }

 private:
  ComplexMatrix chi_;
  std::size_t n_;
  double norm_;
  double cap_;
};

/// ||exp(tT)|| <= M e^{omega |t|}.
struct GroupEnvelope {
  double M = 1.0;
  double omega = 0.0;
  double t_max = 0.0;
  int grid = 0;
};

/// omega = max |Re| over sigma_S(T) + slack; M = max over an equispaced grid
/// on [-t_max, t_max] of ||exp(tT)|| e^{-omega |t|}.
GroupEnvelope group_envelope(const QMatrix& t_op, double t_max, int grid,
                             double slack = 1e-9);

enum class LaplaceSide { kPositive, kNegative };

struct LaplaceOfGroup {
  QMatrix value;
  double error = 0.0;
  double margin = 0.0;
  double truncation = 0.0;
};

/// Positive side: int_0^inf e^{-ts} exp(tT) dt for Re s > omega.
/// Negative side: -int_{-inf}^0 e^{-ts} exp(tT) dt for Re s < -omega.
/// Throws ConvergenceError when the margin is below `min_margin`.
LaplaceOfGroup laplace_of_group(const Quaternion& s, const QMatrix& t_op, LaplaceSide side,
                                const std::optional<GroupEnvelope>& envelope = std::nullopt,
                                double tol = 1e-10, double min_margin = 0.05);

struct HyEntry {
  double s0 = 0.0;
  unsigned n = 0;
  double ratio = 0.0;
};

struct HyReport {
  GroupEnvelope envelope;
  double max_ratio = 0.0;
  bool pass = false;
  std::vector<HyEntry> entries;
};

/// Evaluates ||S_R^{-1}(s0, T)^n|| (|s0| - omega)^n against M for every
/// sample and n = 1..n_max. Throws PreconditionError if |s0| <= omega.
HyReport hy_bound_check(const QMatrix& t_op, const std::vector<double>& s0_samples,
                        unsigned n_max,
                        const std::optional<GroupEnvelope>& envelope = std::nullopt);

QCALC_NS_END
