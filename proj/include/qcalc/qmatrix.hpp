#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "qcalc/quaternion.hpp"

QCALC_NS_BEGIN

using ComplexMatrix = Eigen::MatrixXcd;

/// Column vector of quaternions, the state space of a QMatrix.
class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t n) : data_(n) {}
  QVector(std::initializer_list<Quaternion> init) : data_(init) {}
  explicit QVector(std::vector<Quaternion> data) : data_(std::move(data)) {}

  /// k-th standard basis vector of length n.
  static QVector basis(std::size_t n, std::size_t k);

  std::size_t size() const { return data_.size(); }
  Quaternion& operator[](std::size_t i) { return data_[i]; }
  const Quaternion& operator[](std::size_t i) const { return data_[i]; }
  const std::vector<Quaternion>& data() const { return data_; }

  double norm() const;

 private:
  std::vector<Quaternion> data_;
};

QVector operator+(const QVector& a, const QVector& b);
QVector operator-(const QVector& a, const QVector& b);
QVector operator*(double s, const QVector& v);
/// Left scalar action a v (entrywise a * v_i).
QVector operator*(const Quaternion& a, const QVector& v);
/// Right scalar action v a.
QVector operator*(const QVector& v, const Quaternion& a);
inline double quad_norm(const QVector& v) { return v.norm(); }

/// n x n quaternionic matrix acting on column vectors from the left. It is a
/// right-linear operator: A (v a) = (A v) a.
class QMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(std::size_t n) : n_(n), data_(n * n) {}
  QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows);

  static QMatrix zero(std::size_t n) { return QMatrix(n); }
  static QMatrix identity(std::size_t n);
  static QMatrix diag(const std::vector<Quaternion>& d);
  /// a * Identity, with a acting from the left on every entry.
  static QMatrix scalar(std::size_t n, const Quaternion& a);

  std::size_t n() const { return n_; }
  Quaternion& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Quaternion& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  QVector column(std::size_t j) const;
  static QMatrix from_columns(const std::vector<QVector>& cols);

  /// Frobenius norm.
  double frobenius() const;
  /// Operator norm, the largest singular value of the complex adjoint.
  double norm() const;

 private:
  std::size_t n_ = 0;
  std::vector<Quaternion> data_;
};

QMatrix operator+(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a);
QMatrix operator*(const QMatrix& a, const QMatrix& b);
QMatrix operator*(double s, const QMatrix& a);
/// Left scalar action (a A)_{ij} = a A_{ij}.
QMatrix operator*(const Quaternion& a, const QMatrix& m);
/// Right scalar action (A a)_{ij} = A_{ij} a.
QMatrix operator*(const QMatrix& m, const Quaternion& a);
QVector operator*(const QMatrix& a, const QVector& v);
inline double quad_norm(const QMatrix& m) { return m.frobenius(); }

/// Largest entrywise modulus of a - b.
double max_abs_diff(const QMatrix& a, const QMatrix& b);
double max_abs_diff(const QVector& a, const QVector& b);

/// Complex adjoint chi(A) = [[A1, A2], [-conj(A2), conj(A1)]] for
/// A = A1 + A2 e2 with A1, A2 over C_{e1}.
ComplexMatrix embed(const QMatrix& a);
/// Reads A1 and A2 back from the top block row of a 2n x 2n matrix.
QMatrix unembed(const ComplexMatrix& m);
/// Embedding of a vector v = v1 + v2 e2 as the stacked column [v1; -conj(v2)].
Eigen::VectorXcd embed(const QVector& v);
QVector unembed_vector(const Eigen::VectorXcd& v);

/// Singular values of chi(A) in decreasing order (each appears twice).
Eigen::VectorXd singular_values(const QMatrix& a);

/// Inverse through the complex adjoint. Throws SingularMatrixError when the
/// smallest singular value falls below rcond_tol times the largest.
QMatrix inverse(const QMatrix& a, double rcond_tol = 1e-13);

/// sigma_max / sigma_min of chi(A).
double condition_number(const QMatrix& a);

/// A^k, k >= 0.
QMatrix power(const QMatrix& a, unsigned k);

QCALC_NS_END
