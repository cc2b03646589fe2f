#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "quartsolve/errors.hpp"

namespace quartsolve {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Tall factor U of a positive semidefinite operator B = U Uᵀ.
/// rank(B) never exceeds the column count of U.
struct PsdFactor {
  Matrix U;

  explicit PsdFactor(Matrix u);

  int dim() const { return static_cast<int>(U.rows()); }
  int cols() const { return static_cast<int>(U.cols()); }

  /// B x = U (Uᵀ x), never materializing the n×n matrix.
  Vector apply(const Vector& x) const;

  /// ⟨x, B x⟩ = ‖Uᵀ x‖².
  double quad(const Vector& x) const;

  Matrix dense() const { return U * U.transpose(); }
};

/// Dense symmetric positive definite operator with its lower-triangular
/// factorization M = L Lᵀ.  Construction fails with NotPositiveDefinite
/// unless every pivot exceeds 1e-12 times the largest diagonal entry,
/// and rejects matrices that are not symmetric to 1e-12 absolute.
class SpdOperator {
 public:
  explicit SpdOperator(Matrix m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& dense() const { return mat_; }
  const Matrix& chol_lower() const { return chol_; }

  Vector apply(const Vector& v) const;

  /// M⁻¹ v via two triangular solves; residual ≤ 1e-10 relative.
  Vector apply_inverse(const Vector& v) const;

  /// L⁻¹ R for the stored factor L (whitening of columns).
  Matrix solve_lower(const Matrix& rhs) const;

  /// ⟨v, M v⟩.
  double quad(const Vector& v) const;

 private:
  Matrix mat_;
  Matrix chol_;
};

/// B(τ) = Σ τᵢ Uᵢ Uᵢᵀ with all τᵢ > 0; fails if the sum is numerically
/// singular (rank-deficient tuples signal a broken assumption upstream).
SpdOperator sum_weighted(const std::vector<PsdFactor>& factors, const Vector& tau);

Vector apply_inverse(const SpdOperator& op, const Vector& v);

/// (λ_min, λ_max) by full symmetric eigendecomposition.
std::pair<double, double> extreme_eigenvalues(const SpdOperator& op);

/// Tr[M⁻¹ U Uᵀ] = ‖L⁻¹U‖_F², nonnegative by construction.
double trace_inner(const SpdOperator& op, const PsdFactor& factor);

/// Quadratic norm carrier: ‖x‖ = ⟨B x, x⟩^{1/2} for an SPD operator B.
/// Identity and Diagonal kinds keep cone projections separable; General
/// wraps a dense SpdOperator.
class Preconditioner {
 public:
  enum class Kind { Identity, Diagonal, General };

  static Preconditioner identity(int dim);
  static Preconditioner diagonal(Vector d);
  static Preconditioner general(SpdOperator op);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  Vector apply(const Vector& x) const;
  Vector apply_inverse(const Vector& v) const;
  double quad(const Vector& x) const;
  double norm(const Vector& x) const;

  /// Dual norm ⟨v, B⁻¹ v⟩^{1/2}.
  double dual_norm(const Vector& v) const;

  /// Whitened columns L⁻¹ R where B = L Lᵀ.
  Matrix whiten(const Matrix& r) const;

  const Vector& diagonal_entries() const;
  const SpdOperator& op() const;

 private:
  Preconditioner(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_ = 0;
  Vector diag_;       // Diagonal kind
  Vector diag_sqrt_;  // cached √d for whitening
  std::vector<SpdOperator> op_;  // General kind; empty otherwise
};

}  // namespace quartsolve
