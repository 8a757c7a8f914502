#include "qcalc/qmatrix.hpp"

#include <cmath>
#include <sstream>

#include "qcalc/errors.hpp"

QCALC_NS_BEGIN

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw PreconditionError(os.str());
  }
}

}  // namespace

QVector QVector::basis(std::size_t n, std::size_t k) {
  QVector v(n);
  v[k] = Quaternion(1.0);
  return v;
}

double QVector::norm() const {
  double s = 0.0;
  for (const auto& q : data_) s += q.norm2();
  return std::sqrt(s);
}

QVector operator+(const QVector& a, const QVector& b) {
  require_same_size(a.size(), b.size(), "vector sum");
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVector operator-(const QVector& a, const QVector& b) {
  require_same_size(a.size(), b.size(), "vector difference");
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QVector operator*(double s, const QVector& v) {
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
  return r;
}

QVector operator*(const Quaternion& a, const QVector& v) {
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = a * v[i];
  return r;
}

QVector operator*(const QVector& v, const Quaternion& a) {
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * a;
  return r;
}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows)
    : n_(rows.size()), data_() {
  data_.reserve(n_ * n_);
  for (const auto& row : rows) {
    require_same_size(row.size(), n_, "QMatrix initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

QMatrix QMatrix::identity(std::size_t n) { return scalar(n, Quaternion(1.0)); }

QMatrix QMatrix::diag(const std::vector<Quaternion>& d) {
  QMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

QMatrix QMatrix::scalar(std::size_t n, const Quaternion& a) {
  QMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = a;
  return m;
}

QVector QMatrix::column(std::size_t j) const {
  QVector v(n_);
  for (std::size_t i = 0; i < n_; ++i) v[i] = (*this)(i, j);
  return v;
}

QMatrix QMatrix::from_columns(const std::vector<QVector>& cols) {
  QMatrix m(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    require_same_size(cols[j].size(), cols.size(), "from_columns");
    for (std::size_t i = 0; i < cols.size(); ++i) m(i, j) = cols[j][i];
  }
  return m;
}

double QMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& q : data_) s += q.norm2();
  return std::sqrt(s);
}

double QMatrix::norm() const {
  if (n_ == 0) return 0.0;
  return singular_values(*this)(0);
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  require_same_size(a.n(), b.n(), "matrix sum");
  QMatrix r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  require_same_size(a.n(), b.n(), "matrix difference");
  QMatrix r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

QMatrix operator-(const QMatrix& a) { return -1.0 * a; }

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  require_same_size(a.n(), b.n(), "matrix product");
  const std::size_t n = a.n();
  QMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Quaternion& aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

QMatrix operator*(double s, const QMatrix& a) {
  QMatrix r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) = s * a(i, j);
  return r;
}

QMatrix operator*(const Quaternion& q, const QMatrix& a) {
  QMatrix r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) = q * a(i, j);
  return r;
}

QMatrix operator*(const QMatrix& a, const Quaternion& q) {
  QMatrix r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) = a(i, j) * q;
  return r;
}

QVector operator*(const QMatrix& a, const QVector& v) {
  require_same_size(a.n(), v.size(), "matrix-vector product");
  QVector r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

double max_abs_diff(const QMatrix& a, const QMatrix& b) {
  require_same_size(a.n(), b.n(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) m = std::max(m, dist(a(i, j), b(i, j)));
  return m;
}

double max_abs_diff(const QVector& a, const QVector& b) {
  require_same_size(a.size(), b.size(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, dist(a[i], b[i]));
  return m;
}

ComplexMatrix embed(const QMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.n());
  ComplexMatrix m(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Quaternion& q = a(i, j);
      const std::complex<double> z1(q.w, q.x);
      const std::complex<double> z2(q.y, q.z);
      m(i, j) = z1;
      m(i, j + n) = z2;
      m(i + n, j) = -std::conj(z2);
      m(i + n, j + n) = std::conj(z1);
    }
  return m;
}

QMatrix unembed(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw PreconditionError("unembed: expected a square matrix of even size");
  }
  const Eigen::Index n = m.rows() / 2;
  QMatrix a(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto z1 = m(i, j);
      const auto z2 = m(i, j + n);
      a(i, j) = Quaternion(z1.real(), z1.imag(), z2.real(), z2.imag());
    }
  return a;
}

Eigen::VectorXcd embed(const QVector& v) {
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::VectorXcd e(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Quaternion& q = v[i];
    e(i) = {q.w, q.x};
    e(i + n) = -std::conj(std::complex<double>(q.y, q.z));
  }
  return e;
}

QVector unembed_vector(const Eigen::VectorXcd& e) {
  const Eigen::Index n = e.size() / 2;
  QVector v(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto z2 = -std::conj(e(i + n));
    v[i] = Quaternion(e(i).real(), e(i).imag(), z2.real(), z2.imag());
  }
  return v;
}

Eigen::VectorXd singular_values(const QMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(embed(a));
  return svd.singularValues();
}

QMatrix inverse(const QMatrix& a, double rcond_tol) {
  const ComplexMatrix m = embed(a);
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > rcond_tol * smax) || smax == 0.0) {
    std::ostringstream os;
    os << "inverse: matrix is numerically singular (smallest singular value " << smin << ")";
    throw SingularMatrixError(os.str(), smin);
  }
  return unembed(m.partialPivLu().inverse());
}

double condition_number(const QMatrix& a) {
  const auto sv = singular_values(a);
  return sv(0) / sv(sv.size() - 1);
}

QMatrix power(const QMatrix& a, unsigned k) {
  QMatrix result = QMatrix::identity(a.n());
  QMatrix base = a;
  while (k > 0) {
    if (k & 1u) result = result * base;
    base = base * base;
    k >>= 1u;
  }
  return result;
}

QCALC_NS_END
