#include "qcalc/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "qcalc/errors.hpp"

QCALC_NS_BEGIN

namespace {

double binomial(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

int SSpectrum::total_multiplicity() const {
  int m = 0;
  for (const auto& s : spheres) m += s.multiplicity;
  return m;
}

double SSpectrum::distance(const Quaternion& s) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& sp : spheres) d = std::min(d, sp.sphere.distance(s));
  return d;
}

double SSpectrum::max_abs_real() const {
  double m = 0.0;
  for (const auto& sp : spheres) m = std::max(m, std::abs(sp.sphere.x0));
  return m;
}

double SSpectrum::max_extent() const {
  double m = 0.0;
  for (const auto& sp : spheres) m = std::max(m, std::abs(sp.sphere.x0) + sp.sphere.x1);
  return m;
}

double SSpectrum::max_modulus() const {
  double m = 0.0;
  for (const auto& sp : spheres) m = std::max(m, std::hypot(sp.sphere.x0, sp.sphere.x1));
  return m;
}

SSpectrum s_spectrum(const QMatrix& t) {
  SSpectrum out;
  if (t.n() == 0) return out;
  const ComplexMatrix chi = embed(t);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(chi, false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("s_spectrum: eigensolver did not converge", 0.0);
  }
  std::vector<Sphere> pts;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const auto lambda = solver.eigenvalues()(k);
    pts.push_back({lambda.real(), std::abs(lambda.imag())});
  }
  std::sort(pts.begin(), pts.end(), [](const Sphere& a, const Sphere& b) {
    return a.x0 != b.x0 ? a.x0 < b.x0 : a.x1 < b.x1;
  });

  const double tol = 1e-6 * (1.0 + chi.cwiseAbs().maxCoeff());
  struct Cluster {
    double x0 = 0.0;
    double x1 = 0.0;
    int count = 0;
  };
  std::vector<Cluster> clusters;
  for (const auto& p : pts) {
    bool joined = false;
    for (auto& c : clusters) {
      if (std::hypot(c.x0 / c.count - p.x0, c.x1 / c.count - p.x1) <= tol) {
        c.x0 += p.x0;
        c.x1 += p.x1;
        ++c.count;
        joined = true;
        break;
      }
    }
    if (!joined) clusters.push_back({p.x0, p.x1, 1});
  }
  for (const auto& c : clusters) {
    SpectralSphere s;
    s.sphere = {c.x0 / c.count, c.x1 / c.count};
    s.multiplicity = std::max(1, (c.count + 1) / 2);
    out.spheres.push_back(s);
  }
  return out;
}

double pseudo_resolvent_sigma_min(const Quaternion& s, const QMatrix& t) {
  const QMatrix q = t * t - (2.0 * s.real()) * t + QMatrix::scalar(t.n(), s.norm2());
  const auto sv = singular_values(q);
  return sv(sv.size() - 1);
}

ResolventEvaluator::ResolventEvaluator(QMatrix t)
    : t_(std::move(t)),
      t2_(t_ * t_),
      chi_t_(embed(t_)),
      chi_t2_(embed(t2_)),
      spectrum_(s_spectrum(t_)),
      norm_(t_.norm()) {}

void ResolventEvaluator::require_resolvent_point(const Quaternion& s) const {
  const double d = spectrum_.distance(s);
  if (!(d > spectral_margin(norm_))) {
    std::ostringstream os;
    os << "s inside S-spectrum margin: [s] with s = " << s << " is at distance " << d
       << " from the S-spectrum";
    throw SpectralProximityError(os.str(), d);
  }
}

ComplexMatrix ResolventEvaluator::pseudo_embedded(const Quaternion& s) const {
  require_resolvent_point(s);
  const Eigen::Index m = chi_t_.rows();
  ComplexMatrix q = chi_t2_ - (2.0 * s.real()) * chi_t_;
  q.diagonal().array() += s.norm2();
  return q.partialPivLu().solve(ComplexMatrix::Identity(m, m));
}

QMatrix ResolventEvaluator::pseudo(const Quaternion& s) const {
  return unembed(pseudo_embedded(s));
}

QMatrix ResolventEvaluator::operator()(const Quaternion& s) const {
  const QMatrix shifted = t_ - QMatrix::scalar(t_.n(), s.conj());
#ifdef QCALC_MUTATE_KERNEL_SIGN
  return shifted * pseudo(s);
#else
  return -(shifted * pseudo(s));
#endif
}

QMatrix ResolventEvaluator::power(unsigned n, const Quaternion& s) const {
  if (n == 0) return QMatrix::identity(t_.n());
  if (n == 1) return (*this)(s);
  const QMatrix inv = pseudo(s);
  const Quaternion sc = s.conj();
  QMatrix sum = QMatrix::zero(t_.n());
  QMatrix minus_t_pow = QMatrix::identity(t_.n());
  for (unsigned k = 0; k <= n; ++k) {
    sum = sum + binomial(n, k) * (qpow(sc, n - k) * minus_t_pow);
    minus_t_pow = minus_t_pow * (-t_);
  }
  return sum * qcalc::power(inv, n);
}

QMatrix pseudo_resolvent(const Quaternion& s, const QMatrix& t) {
  ResolventEvaluator ev(t);
  const QMatrix inv = ev.pseudo(s);
  const QMatrix q = t * t - (2.0 * s.real()) * t + QMatrix::scalar(t.n(), s.norm2());
  const double residual = (q * inv - QMatrix::identity(t.n())).norm();
  const double cond = q.norm() * inv.norm();
  if (residual > 1e-10 * std::max(1.0, cond)) {
    std::ostringstream os;
    os << "pseudo_resolvent: residual " << residual << " exceeds tolerance (condition "
       << cond << ")";
    throw ConvergenceError(os.str(), residual);
  }
  return inv;
}

QMatrix s_resolvent_right(const Quaternion& s, const QMatrix& t) {
  return ResolventEvaluator(t)(s);
}

QMatrix s_resolvent_right_power(unsigned n, const Quaternion& s, const QMatrix& t) {
  return ResolventEvaluator(t).power(n, s);
}

GroupEvaluator::GroupEvaluator(const QMatrix& t_op, double cap)
    : chi_(embed(t_op)), n_(t_op.n()), norm_(t_op.norm()), cap_(cap) {}

QMatrix GroupEvaluator::operator()(double t) const {
  if (std::abs(t) * norm_ > cap_) {
    std::ostringstream os;
    os << "qexp_matrix: |t| ||T|| = " << std::abs(t) * norm_ << " exceeds cap " << cap_;
    throw RangeError(os.str());
  }
  if (t == 0.0) return QMatrix::identity(n_);
  const ComplexMatrix scaled = t * chi_;
  return unembed(scaled.exp());
}

QMatrix qexp_matrix(const QMatrix& t_op, double t, double cap) {
  return GroupEvaluator(t_op, cap)(t);
}

GroupEnvelope group_envelope(const QMatrix& t_op, double t_max, int grid, double slack) {
  GroupEnvelope env;
  env.omega = s_spectrum(t_op).max_abs_real() + slack;
  env.t_max = t_max;
  env.grid = std::max(1, grid);
  GroupEvaluator group(t_op);
  double m = 0.0;
  for (int k = 0; k < env.grid; ++k) {
    const double t = env.grid == 1 ? 0.0 : -t_max + 2.0 * t_max * k / (env.grid - 1);
    m = std::max(m, group(t).norm() * std::exp(-env.omega * std::abs(t)));
  }
  env.M = std::max(m, 1.0);
  return env;
}

LaplaceOfGroup laplace_of_group(const Quaternion& s, const QMatrix& t_op, LaplaceSide side,
                                const std::optional<GroupEnvelope>& envelope, double tol,
                                double min_margin) {
  const GroupEnvelope env = envelope ? *envelope : group_envelope(t_op, 10.0, 401);
  const bool positive = side == LaplaceSide::kPositive;
  const double margin = positive ? s.real() - env.omega : -env.omega - s.real();
  if (margin < min_margin) {
    std::ostringstream os;
    os << "laplace_of_group: margin " << margin << " below " << min_margin
       << " (need " << (positive ? "Re s > omega" : "Re s < -omega") << ")";
    throw ConvergenceError(os.str(), margin);
  }
  GroupEvaluator group(t_op);
  auto integrand = [&](const ContourPoint& pt) {
    const double t = pt.s.real();
    return qexp(-t * s) * group(t);
  };
  Contour ray{RayContour{0.0, positive ? +1 : -1, margin, env.M}};
  auto res = integrate(integrand, ray, tol);
  LaplaceOfGroup out;
  out.value = positive ? res.value : -res.value;
  out.error = res.error;
  out.margin = margin;
  out.truncation = res.truncation;
  return out;
}

HyReport hy_bound_check(const QMatrix& t_op, const std::vector<double>& s0_samples,
                        unsigned n_max, const std::optional<GroupEnvelope>& envelope) {
  HyReport report;
  report.envelope = envelope ? *envelope : group_envelope(t_op, 10.0, 2001);
  const double omega = report.envelope.omega;
  for (double s0 : s0_samples) {
    if (!(std::abs(s0) > omega)) {
      std::ostringstream os;
      os << "hy_bound_check: sample s0 = " << s0 << " violates |s0| > omega = " << omega;
      throw PreconditionError(os.str());
    }
  }
  ResolventEvaluator resolvent(t_op);
  for (double s0 : s0_samples) {
    const QMatrix r = resolvent(Quaternion(s0));
    QMatrix p = QMatrix::identity(t_op.n());
    for (unsigned n = 1; n <= n_max; ++n) {
      p = p * r;
      const double ratio = p.norm() * std::pow(std::abs(s0) - omega, static_cast<double>(n));
      report.entries.push_back({s0, n, ratio});
      report.max_ratio = std::max(report.max_ratio, ratio);
    }
  }
  report.pass = report.max_ratio <= report.envelope.M * (1.0 + 1e-6);
  return report;
}

QCALC_NS_END
