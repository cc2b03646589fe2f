#pragma once

#include <optional>
#include <vector>

#include "quartsolve/operators.hpp"

namespace quartsolve {

/// Convex quartic form in one of two structured shapes:
///   SumOfSquares  ρ(x) = Σᵢ ⟨x, Bᵢ x⟩²  with Bᵢ = Uᵢ Uᵢᵀ,
///   Gram          ρ(X) = ‖Xᵀ X‖_F²     on column-stacked X (n_rows × r_cols).
/// Immutable after construction and safe to share across threads.
class QuarticForm {
 public:
  enum class Variant { SumOfSquares, Gram };

  static QuarticForm sum_of_squares(std::vector<PsdFactor> factors);
  static QuarticForm gram(int n_rows, int r_cols);

  Variant variant() const { return variant_; }
  int dim() const { return dim_; }

  const std::vector<PsdFactor>& factors() const;
  int n_rows() const { return n_rows_; }
  int r_cols() const { return r_cols_; }

  double eval_rho(const Vector& x) const;
  Vector grad_rho(const Vector& x) const;

  double eval_sqrt_rho(const Vector& x) const;

  /// ∇√ρ = ∇ρ / (2√ρ); returns the zero vector whenever ρ(x) ≤ 1e-300,
  /// consistent with the gradient vanishing at the origin.
  Vector grad_sqrt_rho(const Vector& x) const;

  /// Mixed evaluations of the underlying 4-linear form, available only for
  /// the SumOfSquares shape:
  ///   quad_pair(x, y)  = Σᵢ ⟨x,Bᵢx⟩⟨y,Bᵢy⟩
  ///   cube_pair(x, y)  = Σᵢ ⟨x,Bᵢx⟩⟨x,Bᵢy⟩
  double quad_pair(const Vector& x, const Vector& y) const;
  double cube_pair(const Vector& x, const Vector& y) const;

 private:
  QuarticForm() = default;

  Variant variant_ = Variant::SumOfSquares;
  int dim_ = 0;
  int n_rows_ = 0;
  int r_cols_ = 0;
  std::vector<PsdFactor> factors_;

  /// Stacked rows aᵢᵀ when every factor is rank one; enables matrix-level
  /// evaluation instead of a per-factor loop.
  std::optional<Matrix> packed_rows_;
};

/// Certificates of the degree-4 sandwich  alpha2·‖x‖⁴ ≤ ρ(x) ≤ beta2·‖x‖⁴
/// in the norm of `norm` (non-owning; caller keeps it alive).
struct QuarticBounds {
  double alpha2 = 0.0;
  double beta2 = 0.0;
  const Preconditioner* norm = nullptr;

  double kappa() const;
};

/// Structural certificates: for SumOfSquares, alpha2 = λ_min(B̃)²/m and
/// beta2 = λ_max(B̃)² with B̃ the whitened sum of the factors; for Gram,
/// (1/r_cols, 1) in the Frobenius norm.
QuarticBounds bounds_from_structure(const QuarticForm& form, const Preconditioner& norm);

}  // namespace quartsolve
