#pragma once

#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "quartsolve/operators.hpp"

/// Independent oracles for cross-checking the library.  Everything here
/// deliberately takes the slow, obvious route (dense inverses, exhaustive
/// active sets, finite differences) so that agreement with the library is
/// evidence rather than tautology.
namespace qtest {

using quartsolve::Matrix;
using quartsolve::PsdFactor;
using quartsolve::Vector;

/// Σᵢ τᵢ·Uᵢ Uᵢᵀ accumulated entry by entry, no rank updates.
Matrix naive_weighted_sum(const std::vector<PsdFactor>& factors, const Vector& tau);

/// Dense inverse through partial-pivot LU (not the Cholesky the library uses).
Matrix dense_inverse(const Matrix& m);

/// (λ_min, λ_max) through the general non-symmetric eigensolver route.
std::pair<double, double> dense_extreme_eigenvalues(const Matrix& m);

/// Tr[M · U Uᵀ] computed densely.
double trace_product(const Matrix& m, const PsdFactor& factor);

/// Central finite differences of a scalar function.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                   double step);

/// Exhaustive active-set solve of
///   min ‖y − ŷ‖²_B  s.t.  y ≥ 0, ⟨c, y⟩ = 1,   B = diag(b) ≻ 0,
/// enumerating all 2ⁿ clamp patterns (n ≤ 20 guarded).  Returns the best
/// feasible stationary candidate.
Vector qp_orthant_projection(const Vector& y_hat, const Vector& c, const Vector& b_diag);

/// Classic sort-and-threshold projection onto the probability simplex.
Vector simplex_projection_sorted(const Vector& y_hat);

/// Minimizer of ⟨a, y − y₀⟩ + coeff·‖y − y₀‖²_B over the affine slice
/// {⟨c,y⟩ = 1} via the KKT linear system (full-space cone).
Vector slice_model_minimizer_fullspace(const Vector& a, double coeff, const Matrix& b,
                                       const Vector& c, const Vector& y0);

/// min over s in a uniform grid of [0, s_max] of f(s·y); returns (s*, value).
std::pair<double, double> grid_min_over_scale(const std::function<double(double)>& f_of_s,
                                              double s_max, int samples);

std::mt19937_64 make_rng(std::uint64_t seed);
Vector random_unit(std::mt19937_64& rng, int n);
Vector random_gaussian(std::mt19937_64& rng, int n);
Matrix random_gaussian_matrix(std::mt19937_64& rng, int rows, int cols);

}  // namespace qtest
