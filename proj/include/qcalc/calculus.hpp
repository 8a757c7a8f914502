#pragma once

// Functions of a quaternionic matrix: the group calculus f(T) keyed on a
// measure, the bounded S-functional calculus on circles, the strip formulas,
// residue bookkeeping, and inverting sequences.

#include <optional>
#include <string>
#include <vector>

#include "qcalc/measure.hpp"
#include "qcalc/operator.hpp"
#include "qcalc/slice_function.hpp"

QCALC_NS_BEGIN

struct CalcTolerances {
  /// Group integrals and ray quadrature.
  double group = 1e-10;
  /// Truncated strip-boundary integrals.
  double strip = 1e-8;
  /// Circle contours.
  double circle = 1e-11;
};

struct CalcProblem {
  QMatrix op;
  GroupEnvelope envelope;
  QMeasure measure;
  /// Closed-form stand-in for the transform of `measure` on contour routes.
  std::optional<SliceFunction> fn;
  ImaginaryUnit slice;
  double epsilon = 1.0;
  CalcTolerances tol;

  SliceFunction function() const;
};

/// Builds a problem with the envelope sampled on [-t_max, t_max].
CalcProblem make_problem(QMatrix op, QMeasure measure, double epsilon = 1.0,
                         double t_max = 10.0, int grid = 401);

/// Throws PreconditionError unless the measure is admissible for
/// (envelope.omega, epsilon) and the S-spectrum sits inside the strip.
void validate(const CalcProblem& problem);

struct OperatorValue {
  QMatrix value;
  double error = 0.0;
  /// M int e^{omega |t|} d|mu|(t).
  double norm_bound = 0.0;
};

/// f(T) = sum a_i exp(-t_i T) + int c P(t) e^{t lambda} d exp(-tT) dt, the
/// density parts by quadrature truncated with the group envelope.
OperatorValue f_of_T_group(const CalcProblem& problem);

/// Same operator from the matrix Sylvester recursion, no quadrature.
QMatrix f_of_T_closed(const QMeasure& measure, const QMatrix& op);

struct ContourValue {
  QMatrix value;
  double error = 0.0;
  double radius = 0.0;
  int evaluations = 0;
};

/// (1/2 pi) oint_{|s| = radius} f(s) ds_I S_R^{-1}(s, T) in the slice C_I.
ContourValue s_calc_bounded(const SliceFunction& f, const QMatrix& op, double radius,
                            const ImaginaryUnit& slice = {}, double tol = 1e-11);

struct StripValue {
  QMatrix value;
  double error = 0.0;
  double truncation = 0.0;
  double tail_bound = 0.0;
  int evaluations = 0;
};

/// (1/2 pi) int over the strip boundary of f(s) (alpha - s)^{-2} ds_I
/// S_R^{-1}(s, T), times (alpha I - T)^2. Requires the S-spectrum strictly
/// inside |Re s| < c < |alpha| and f regular on the closed strip.
StripValue strip_f_of_T_matrix(const SliceFunction& f, const QMatrix& op, double alpha, double c,
                               double truncation = 0.0, const ImaginaryUnit& slice = {},
                               double tol = 1e-8);

struct StripVector {
  QVector value;
  double error = 0.0;
  double truncation = 0.0;
  double tail_bound = 0.0;
};

/// exp(tT) u from the strip formula with f(s) = e^{ts}.
StripVector strip_group_reconstruction(const QMatrix& op, double t, double alpha, double c,
                                       const QVector& u, double truncation = 0.0,
                                       const ImaginaryUnit& slice = {}, double tol = 1e-8);

/// f(T) u from the strip formula, f the problem's function.
StripVector strip_f_of_T(const CalcProblem& problem, double alpha, double c, const QVector& u,
                         double truncation = 0.0);

/// Singularities of F(s) = S_R^{-1}(p, s) (alpha - s)^{-2} in C_I, paired
/// with g(s) = S_R^{-1}(s, T) (alpha I - T)^2 u. Residues sit to the left of
/// g; contributions are for positively oriented small circles.
struct ResidueBreakdown {
  Quaternion p_slice;
  Quaternion p_slice_conj;
  /// Residue of F at alpha, S_R^{-2}(p, alpha).
  Quaternion res_alpha;
  /// Coefficient of (s - alpha)^{-2}, S_R^{-1}(p, alpha).
  Quaternion laurent_alpha;
  Quaternion res_p;
  Quaternion res_p_conj;
  QVector contrib_alpha;
  QVector contrib_p;
  QVector contrib_p_conj;
  QVector sum;
  /// p real: the two poles merge and res_p carries the whole residue.
  bool real_pole = false;
};

ResidueBreakdown residue_oracle(const Quaternion& p, double alpha, const QMatrix& op,
                                const ImaginaryUnit& slice, const QVector& u);

struct CircleCheck {
  Quaternion residue;
  QVector contribution;
  double error = 0.0;
};

/// Small-circle quadrature of F and of F ds_I g around `center` in C_I.
CircleCheck residue_by_quadrature(const Quaternion& p, double alpha, const QMatrix& op,
                                  const ImaginaryUnit& slice, const QVector& u,
                                  const Quaternion& center, double radius, double tol = 1e-12);

struct PairResidual {
  std::string first;
  std::string second;
  double residual = 0.0;
  double error_estimate = 0.0;
};

struct ComparisonReport {
  QMatrix value_group;
  double error_group = 0.0;
  std::optional<QMatrix> value_strip;
  double error_strip = 0.0;
  std::optional<QMatrix> value_contour;
  double error_contour = 0.0;
  double contour_radius = 0.0;
  std::optional<QMatrix> value_closed;
  std::vector<PairResidual> residuals;
  std::vector<std::string> skipped;
  double max_residual = 0.0;
  bool pass = false;
};

/// Computes f(T) by every applicable route and the pairwise residuals.
/// Routes that do not apply are listed in `skipped` with the reason.
ComparisonReport compare_calculi(const CalcProblem& problem, double alpha, double c,
                                 std::optional<double> radius = std::nullopt,
                                 double tolerance = 1e-6);

/// sum_k T^k a_k for real a_k; PreconditionError on non-real coefficients.
QMatrix poly_apply(const std::vector<Quaternion>& coefficients, const QMatrix& op);

struct InversionEntry {
  unsigned n = 0;
  double residual = 0.0;
  /// Largest |P_n(s) f(s)| over the sampled strip grid.
  double bound_sample_max = 0.0;
  /// ||P_n[T] f(T)||.
  double operator_norm = 0.0;
};

struct InversionRecord {
  std::vector<InversionEntry> entries;
  std::vector<std::string> warnings;
  double tolerance = 0.0;
  bool pass = false;
};

/// Residuals ||P_n[T] f(T) u - u|| with the growth conditions sampled on the
/// open strip |Re s| < omega + epsilon.
InversionRecord inverting_sequence_run(const std::vector<std::vector<Quaternion>>& polys,
                                       const CalcProblem& problem, const QVector& u,
                                       double tolerance = 1e-7, double bound_limit = 1e6);

QCALC_NS_END
