#include "quartsolve/operators.hpp"

#include <cmath>
#include <sstream>

namespace quartsolve {

namespace {

std::string shape_of(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

/// In-place lower Cholesky with a relative pivot threshold.  A pivot at or
/// below 1e-12 times the largest diagonal entry of the input is treated as a
/// rank deficiency rather than rounded through.
Matrix cholesky_or_throw(const Matrix& m) {
  const auto n = m.rows();
  const double pivot_floor = 1e-12 * m.diagonal().maxCoeff();
  Matrix chol = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = m(j, j) - chol.row(j).head(j).squaredNorm();
    if (!(pivot > pivot_floor) || !std::isfinite(pivot)) {
      std::ostringstream os;
      os << "SpdOperator: pivot " << pivot << " at index " << j
         << " under threshold " << pivot_floor;
      throw NotPositiveDefinite(os.str());
    }
    chol(j, j) = std::sqrt(pivot);
    const Eigen::Index len = n - j - 1;
    if (len > 0) {
      chol.block(j + 1, j, len, 1) =
          (m.block(j + 1, j, len, 1) -
           chol.block(j + 1, 0, len, j) * chol.row(j).head(j).transpose()) /
          chol(j, j);
    }
  }
  return chol;
}

}  // namespace

PsdFactor::PsdFactor(Matrix u) : U(std::move(u)) {
  if (U.rows() < 1 || U.cols() < 1) {
    throw BadShape("PsdFactor: factor must be at least 1x1, got " + shape_of(U));
  }
  if (U.cols() > U.rows()) {
    throw BadShape("PsdFactor: more columns than rows (" + shape_of(U) + ")");
  }
  if (U.cwiseAbs().maxCoeff() == 0.0) {
    throw BadShape("PsdFactor: all-zero factor represents the zero operator");
  }
}

Vector PsdFactor::apply(const Vector& x) const {
  if (x.size() != U.rows()) {
    throw DimensionMismatch("PsdFactor::apply: vector has wrong length");
  }
  return U * (U.transpose() * x);
}

double PsdFactor::quad(const Vector& x) const {
  if (x.size() != U.rows()) {
    throw DimensionMismatch("PsdFactor::quad: vector has wrong length");
  }
  return (U.transpose() * x).squaredNorm();
}

SpdOperator::SpdOperator(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() < 1) {
    throw DimensionMismatch("SpdOperator: matrix must be square, got " + shape_of(mat_));
  }
  const double asym = (mat_ - mat_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    std::ostringstream os;
    os << "SpdOperator: matrix asymmetric by " << asym;
    throw NotPositiveDefinite(os.str());
  }
  chol_ = cholesky_or_throw(mat_);
}

Vector SpdOperator::apply(const Vector& v) const {
  if (v.size() != mat_.rows()) {
    throw DimensionMismatch("SpdOperator::apply: vector has wrong length");
  }
  return mat_.selfadjointView<Eigen::Lower>() * v;
}

Vector SpdOperator::apply_inverse(const Vector& v) const {
  if (v.size() != mat_.rows()) {
    throw DimensionMismatch("SpdOperator::apply_inverse: vector has wrong length");
  }
  Vector w = chol_.triangularView<Eigen::Lower>().solve(v);
  chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(w);
  return w;
}

Matrix SpdOperator::solve_lower(const Matrix& rhs) const {
  if (rhs.rows() != mat_.rows()) {
    throw DimensionMismatch("SpdOperator::solve_lower: row count mismatch");
  }
  return chol_.triangularView<Eigen::Lower>().solve(rhs);
}

double SpdOperator::quad(const Vector& v) const {
  return v.dot(apply(v));
}

SpdOperator sum_weighted(const std::vector<PsdFactor>& factors, const Vector& tau) {
  if (factors.empty()) {
    throw DimensionMismatch("sum_weighted: no factors");
  }
  if (tau.size() != static_cast<Eigen::Index>(factors.size())) {
    throw DimensionMismatch("sum_weighted: weight count does not match factor count");
  }
  const auto n = factors.front().U.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].U.rows() != n) {
      throw DimensionMismatch("sum_weighted: factor dimensions differ");
    }
    if (!(tau[static_cast<Eigen::Index>(i)] > 0.0)) {
      std::ostringstream os;
      os << "sum_weighted: weight " << i << " is not strictly positive";
      throw NotPositiveDefinite(os.str());
    }
    acc.selfadjointView<Eigen::Lower>().rankUpdate(factors[i].U,
                                                   tau[static_cast<Eigen::Index>(i)]);
  }
  acc.triangularView<Eigen::StrictlyUpper>() = acc.transpose();
  return SpdOperator(std::move(acc));
}

Vector apply_inverse(const SpdOperator& op, const Vector& v) {
  return op.apply_inverse(v);
}

std::pair<double, double> extreme_eigenvalues(const SpdOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.dense(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

double trace_inner(const SpdOperator& op, const PsdFactor& factor) {
  if (factor.dim() != op.dim()) {
    throw DimensionMismatch("trace_inner: factor dimension does not match operator");
  }
  return op.solve_lower(factor.U).squaredNorm();
}

Preconditioner Preconditioner::identity(int dim) {
  if (dim < 1) throw DimensionMismatch("Preconditioner::identity: dim must be positive");
  return Preconditioner(Kind::Identity, dim);
}

Preconditioner Preconditioner::diagonal(Vector d) {
  if (d.size() < 1 || (d.array() <= 0.0).any()) {
    throw NotPositiveDefinite("Preconditioner::diagonal: entries must be strictly positive");
  }
  Preconditioner p(Kind::Diagonal, static_cast<int>(d.size()));
  p.diag_sqrt_ = d.cwiseSqrt();
  p.diag_ = std::move(d);
  return p;
}

Preconditioner Preconditioner::general(SpdOperator op) {
  Preconditioner p(Kind::General, op.dim());
  p.op_.push_back(std::move(op));
  return p;
}

Vector Preconditioner::apply(const Vector& x) const {
  switch (kind_) {
    case Kind::Identity: return x;
    case Kind::Diagonal: return diag_.cwiseProduct(x);
    case Kind::General: return op_.front().apply(x);
  }
  throw std::logic_error("unreachable");
}

Vector Preconditioner::apply_inverse(const Vector& v) const {
  switch (kind_) {
    case Kind::Identity: return v;
    case Kind::Diagonal: return v.cwiseQuotient(diag_);
    case Kind::General: return op_.front().apply_inverse(v);
  }
  throw std::logic_error("unreachable");
}

double Preconditioner::quad(const Vector& x) const {
  switch (kind_) {
    case Kind::Identity: return x.squaredNorm();
    case Kind::Diagonal: return diag_.cwiseProduct(x).dot(x);
    case Kind::General: return op_.front().quad(x);
  }
  throw std::logic_error("unreachable");
}

double Preconditioner::norm(const Vector& x) const {
  return std::sqrt(std::max(quad(x), 0.0));
}

double Preconditioner::dual_norm(const Vector& v) const {
  return std::sqrt(std::max(v.dot(apply_inverse(v)), 0.0));
}

Matrix Preconditioner::whiten(const Matrix& r) const {
  switch (kind_) {
    case Kind::Identity: return r;
    case Kind::Diagonal: return diag_sqrt_.asDiagonal().inverse() * r;
    case Kind::General: return op_.front().solve_lower(r);
  }
  throw std::logic_error("unreachable");
}

const Vector& Preconditioner::diagonal_entries() const {
  if (kind_ != Kind::Diagonal) {
    throw std::logic_error("Preconditioner: diagonal entries requested from non-diagonal kind");
  }
  return diag_;
}

const SpdOperator& Preconditioner::op() const {
  if (kind_ != Kind::General) {
    throw std::logic_error("Preconditioner: dense operator requested from structured kind");
  }
  return op_.front();
}

}  // namespace quartsolve
