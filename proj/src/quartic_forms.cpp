#include "quartsolve/quartic_forms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace quartsolve {

namespace {

/// Column-stacked view of a Gram-variant point.
Eigen::Map<const Matrix> as_matrix(const Vector& x, int n_rows, int r_cols) {
  return Eigen::Map<const Matrix>(x.data(), n_rows, r_cols);
}

void require_dim(const Vector& x, int dim, const char* where) {
  if (x.size() != dim) {
    std::ostringstream os;
    os << where << ": point has length " << x.size() << ", form dimension is " << dim;
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

QuarticForm QuarticForm::sum_of_squares(std::vector<PsdFactor> factors) {
  if (factors.empty()) {
    throw BadShape("QuarticForm: at least one factor required");
  }
  QuarticForm form;
  form.variant_ = Variant::SumOfSquares;
  form.dim_ = factors.front().dim();
  for (const auto& f : factors) {
    if (f.dim() != form.dim_) {
      throw BadShape("QuarticForm: factors have mixed dimensions");
    }
  }
  bool all_rank_one = true;
  for (const auto& f : factors) {
    if (f.cols() != 1) { all_rank_one = false; break; }
  }
  if (all_rank_one) {
    Matrix rows(static_cast<Eigen::Index>(factors.size()), form.dim_);
    for (size_t i = 0; i < factors.size(); ++i) {
      rows.row(static_cast<Eigen::Index>(i)) = factors[i].U.col(0).transpose();
    }
    form.packed_rows_ = std::move(rows);
  }
  form.factors_ = std::move(factors);
  return form;
}

QuarticForm QuarticForm::gram(int n_rows, int r_cols) {
  if (r_cols < 1 || n_rows < r_cols) {
    std::ostringstream os;
    os << "QuarticForm::gram: need n_rows >= r_cols >= 1, got " << n_rows << ", " << r_cols;
    throw BadShape(os.str());
  }
  QuarticForm form;
  form.variant_ = Variant::Gram;
  form.n_rows_ = n_rows;
  form.r_cols_ = r_cols;
  form.dim_ = n_rows * r_cols;
  return form;
}

const std::vector<PsdFactor>& QuarticForm::factors() const {
  if (variant_ != Variant::SumOfSquares) {
    throw std::logic_error("QuarticForm: Gram variant stores no factors");
  }
  return factors_;
}

double QuarticForm::eval_rho(const Vector& x) const {
  require_dim(x, dim_, "eval_rho");
  if (variant_ == Variant::Gram) {
    auto X = as_matrix(x, n_rows_, r_cols_);
    return (X.transpose() * X).squaredNorm();
  }
  if (packed_rows_) {
    return (*packed_rows_ * x).array().square().square().sum();
  }
  double acc = 0.0;
  for (const auto& f : factors_) {
    const double q = f.quad(x);
    acc += q * q;
  }
  return acc;
}

Vector QuarticForm::grad_rho(const Vector& x) const {
  require_dim(x, dim_, "grad_rho");
  if (variant_ == Variant::Gram) {
    auto X = as_matrix(x, n_rows_, r_cols_);
    Matrix g = 4.0 * X * (X.transpose() * X);
    return Eigen::Map<Vector>(g.data(), dim_);
  }
  if (packed_rows_) {
    Vector t = *packed_rows_ * x;
    return 4.0 * (packed_rows_->transpose() * t.array().cube().matrix());
  }
  Vector g = Vector::Zero(dim_);
  for (const auto& f : factors_) {
    Vector inner = f.U.transpose() * x;
    g.noalias() += 4.0 * inner.squaredNorm() * (f.U * inner);
  }
  return g;
}

double QuarticForm::eval_sqrt_rho(const Vector& x) const {
  return std::sqrt(eval_rho(x));
}

Vector QuarticForm::grad_sqrt_rho(const Vector& x) const {
  const double rho = eval_rho(x);
  if (rho <= 1e-300) {
    return Vector::Zero(dim_);
  }
  return grad_rho(x) / (2.0 * std::sqrt(rho));
}

double QuarticForm::quad_pair(const Vector& x, const Vector& y) const {
  if (variant_ != Variant::SumOfSquares) {
    throw std::logic_error("quad_pair: defined through the SumOfSquares expansion only");
  }
  require_dim(x, dim_, "quad_pair");
  require_dim(y, dim_, "quad_pair");
  double acc = 0.0;
  for (const auto& f : factors_) {
    acc += f.quad(x) * f.quad(y);
  }
  return acc;
}

double QuarticForm::cube_pair(const Vector& x, const Vector& y) const {
  if (variant_ != Variant::SumOfSquares) {
    throw std::logic_error("cube_pair: defined through the SumOfSquares expansion only");
  }
  require_dim(x, dim_, "cube_pair");
  require_dim(y, dim_, "cube_pair");
  double acc = 0.0;
  for (const auto& f : factors_) {
    Vector ux = f.U.transpose() * x;
    Vector uy = f.U.transpose() * y;
    acc += ux.squaredNorm() * ux.dot(uy);
  }
  return acc;
}

double QuarticBounds::kappa() const {
  if (!(alpha2 > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(beta2 / alpha2);
}

QuarticBounds bounds_from_structure(const QuarticForm& form, const Preconditioner& norm) {
  QuarticBounds bounds;
  bounds.norm = &norm;
  if (form.variant() == QuarticForm::Variant::Gram) {
    if (norm.kind() != Preconditioner::Kind::Identity) {
      throw UnsupportedGeometry(
          "bounds_from_structure: Gram bounds are stated in the Frobenius norm only");
    }
    bounds.alpha2 = 1.0 / form.r_cols();
    bounds.beta2 = 1.0;
    return bounds;
  }
  if (norm.dim() != form.dim()) {
    throw DimensionMismatch("bounds_from_structure: norm dimension mismatch");
  }
  const auto& factors = form.factors();
  const int n = form.dim();
  Matrix whitened_sum = Matrix::Zero(n, n);
  for (const auto& f : factors) {
    Matrix w = norm.whiten(f.U);
    whitened_sum.selfadjointView<Eigen::Lower>().rankUpdate(w, 1.0);
  }
  whitened_sum.triangularView<Eigen::StrictlyUpper>() = whitened_sum.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(whitened_sum, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-12 * hi) || !(hi > 0.0)) {
    std::ostringstream os;
    os << "bounds_from_structure: factor sum is singular (extremes " << lo << ", " << hi << ")";
    throw SingularBbar(os.str());
  }
  bounds.alpha2 = lo * lo / static_cast<double>(factors.size());
  bounds.beta2 = hi * hi;
  return bounds;
}

}  // namespace quartsolve
