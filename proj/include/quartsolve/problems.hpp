#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "quartsolve/dc_outer.hpp"
#include "quartsolve/quartic_forms.hpp"

namespace quartsolve {

/// Synthetic quartic-plus-linear instance built from the rows of a matrix
/// with a prescribed spectrum.
struct SyntheticInstance {
  QuarticForm form;
  Vector linear_term;
  /// Largest leverage score at uniform weights, filled by gen_coherent.
  double gamma = 0.0;
};

/// A = UΣVᵀ with Gaussian-QR orthonormal U, V and singular values uniform
/// in [sigma_min, 1]; rank-one factors from the rows of A, unit Gaussian
/// linear term.  Deterministic in seed.
SyntheticInstance gen_synthetic(int m, int n, double sigma_min, std::uint64_t seed);

enum class CoherenceTarget { Low, High };

/// Low: Gaussian singular vectors with the spectrum rescaled so
/// σ_max/σ_min = sigma_ratio exactly (coherence stays near n/m).
/// High: one planted row σ·e₁ with every other row supported on the
/// remaining coordinates, forcing that row's leverage to 1.
SyntheticInstance gen_coherent(int m, int n, CoherenceTarget target, double sigma_ratio,
                               std::uint64_t seed);

/// Phaseless measurements of a planted complex signal, embedded over the
/// reals with interleaved layout (Re x₁, Im x₁, Re x₂, ...).  Each factor
/// has exactly two columns (the embedding of qᵢqᵢᴴ).
struct PhaseRetrievalInstance {
  QipInstance qip;
  Vector x_star;  // embedded planted signal, dimension 2N
};
PhaseRetrievalInstance gen_phase_retrieval(int n_signal, int m, std::uint64_t seed);

/// Distance measurements on a connected random graph over N centered planted
/// points in ℝʳ, column-stacked into a vector of length N·r; one extra
/// centering factor pins the translation mode.
struct DmcInstance {
  QipInstance qip;
  Matrix points;  // N x r planted, centered
  std::vector<std::pair<int, int>> edges;
  double laplacian_lambda1 = 0.0;  // algebraic connectivity of the graph
  int max_degree = 0;
  /// Largest effective resistance over the edges (coherence of the edge
  /// factors divided by r).
  double gamma_graph = 0.0;
};
DmcInstance gen_dmc(int n_points, int r, double edge_density, std::uint64_t seed);

/// Classical multidimensional-scaling start for distance completion: missing
/// pairs get shortest-path lengths along measured edges, the squared matrix
/// is double centered and its top-r spectral factors give a centered
/// column-stacked configuration.  Exact on complete graphs; on partial ones
/// it lands near the planted basin, which a random start often misses.
Vector dmc_mds_start(const DmcInstance& inst);

/// Symmetric nonnegative factorization target M = X*X*ᵀ with Gram-shaped ρ
/// and the nonnegative orthant cone.
struct SymnmfInstance {
  QuarticForm form;  // Gram variant on n x r
  Matrix target;     // M, n x n
  Matrix x_star;     // planted nonnegative factor
  Cone cone;

  DcProblem to_dc_problem() const;
  double eval_F(const Matrix& x) const;
};
SymnmfInstance gen_symnmf(int n, int r, std::uint64_t seed);

/// Every generated SumOfSquares tuple must satisfy the preconditioning
/// assumptions: nonzero PSD factors of common dimension with a full-rank
/// sum, and m ≥ n where the weight bounds require it.
void check_factor_assumptions(const std::vector<PsdFactor>& factors, bool require_m_ge_n);

}  // namespace quartsolve
