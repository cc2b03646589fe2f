#pragma once

#include <vector>

#include "quartsolve/operators.hpp"

namespace quartsolve {

/// Strictly positive weight vector over the factor tuple, compared in the
/// log-infinity metric D(u,v) = maxᵢ |ln uᵢ − ln vᵢ|.
struct WeightVector {
  Vector tau;

  explicit WeightVector(Vector t);
  int size() const { return static_cast<int>(tau.size()); }
};

/// Conjugate pair 1/p + 1/q = 1 with p ∈ (1, 2].
struct PNorm {
  double p;
  double q;

  explicit PNorm(double power);
};

/// Log-infinity distance; coordinates below 1e-300 are floored before the
/// logarithm (the `floored` flag of the result reports that it happened).
struct LogDistance {
  double value = 0.0;
  bool floored = false;
};
LogDistance log_inf_distance(const Vector& u, const Vector& v);

/// ℓᵢ = τᵢ·Tr[B(τ)⁻¹Bᵢ]; each ℓᵢ ∈ [0, rank(Bᵢ)] and Σℓᵢ = n.
Vector leverage_scores(const std::vector<PsdFactor>& factors, const WeightVector& tau);

/// One fixed-point sweep: Tᵢ = ((1/n)·Tr[B(τ)⁻¹Bᵢ])^{p−1}.
WeightVector fixed_point_map(const std::vector<PsdFactor>& factors,
                             const WeightVector& tau, const PNorm& pnorm);

struct WeightsResult {
  WeightVector tau;
  long iterations = 0;
};

/// Fixed-point iteration from the uniform start τ⁽⁰⁾ = m^{1/p−1}·1,
/// stopping when successive iterates are within ((2−p)/(p−1))·ε in
/// log-infinity distance.  Requires p ∈ (1,2).
WeightsResult compute_weights(const std::vector<PsdFactor>& factors, double p, double eps);

struct RatioInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Empirical min/max over `samples` random directions x of
///   W_p(x)^{1/p} / ‖x‖²_{B(τ)}   with   W_p(x) = Σᵢ ⟨x, Bᵢx⟩ᵖ
/// (at p = 2 the numerator equals √ρ exactly).  The ratio is 0-homogeneous
/// in x, so the sampling law matters only for coverage.  When `rescale_tau`
/// is set the weights are first normalized to unit q-norm and both
/// intervals are reported.
struct CertifyResult {
  RatioInterval raw;
  RatioInterval rescaled;  // valid only when rescale was requested
  bool rescaled_valid = false;
};
CertifyResult certify_ratio(const std::vector<PsdFactor>& factors, const WeightVector& tau,
                            const PNorm& pnorm, int samples, std::uint64_t seed,
                            bool rescale_tau = false);

struct PreconditionerP2Result {
  SpdOperator b_hat;
  double scale = 0.0;
  double p_prime = 0.0;
  /// Certified upper ratio per unit scale: √ρ ≤ e^ε·upper_factor·scale·‖x‖²;
  /// equals ω√n when p′ comes from the surrogate-power formula.
  double upper_factor = 0.0;
  /// Set when m ≤ n forced the p′ = 1.5 fallback (weaker certificate).
  bool used_fallback = false;
  long iterations = 0;
};

/// Surrogate-power wrapper for the p = 2 certificate: picks
/// p′ = 2ln(m/n)/(ln(m/n)+2lnω), runs the fixed point, and returns B(τ̄)
/// with the scaling 1/m^{1/p′−1/2}.
PreconditionerP2Result optimal_preconditioner_p2(const std::vector<PsdFactor>& factors,
                                                 double omega, double eps);

/// γ = maxᵢ Tr[(ΣⱼBⱼ)⁻¹Bᵢ] ∈ [n/m, max rank].
double coherence(const std::vector<PsdFactor>& factors);

}  // namespace quartsolve
