#include "quartsolve/lewis.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace quartsolve {

namespace {

constexpr double kLogFloor = 1e-300;

/// Tr[B(τ)⁻¹Bᵢ] for every i, sharing one factorization of B(τ).
Vector inverse_traces(const std::vector<PsdFactor>& factors, const Vector& tau) {
  const SpdOperator weighted = sum_weighted(factors, tau);
  Vector traces(static_cast<Eigen::Index>(factors.size()));
  for (size_t i = 0; i < factors.size(); ++i) {
    traces(static_cast<Eigen::Index>(i)) = trace_inner(weighted, factors[i]);
  }
  return traces;
}

}  // namespace

WeightVector::WeightVector(Vector t) : tau(std::move(t)) {
  if (tau.size() == 0) {
    throw BadShape("WeightVector: empty weight vector");
  }
  for (Eigen::Index i = 0; i < tau.size(); ++i) {
    if (!(tau(i) > 0.0) || !std::isfinite(tau(i))) {
      std::ostringstream os;
      os << "WeightVector: entry " << i << " is " << tau(i) << ", must be finite positive";
      throw BadShape(os.str());
    }
  }
}

PNorm::PNorm(double power) : p(power), q(power / (power - 1.0)) {
  if (!(power > 1.0 && power <= 2.0)) {
    std::ostringstream os;
    os << "PNorm: power " << power << " outside (1, 2]";
    throw ConfigError(os.str());
  }
}

LogDistance log_inf_distance(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) {
    throw DimensionMismatch("log_inf_distance: length mismatch");
  }
  LogDistance dist;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    double a = u(i);
    double b = v(i);
    if (a < kLogFloor || b < kLogFloor) {
      dist.floored = true;
      a = std::max(a, kLogFloor);
      b = std::max(b, kLogFloor);
    }
    dist.value = std::max(dist.value, std::abs(std::log(a) - std::log(b)));
  }
  return dist;
}

Vector leverage_scores(const std::vector<PsdFactor>& factors, const WeightVector& tau) {
  if (static_cast<size_t>(tau.size()) != factors.size()) {
    throw DimensionMismatch("leverage_scores: one weight per factor required");
  }
  return tau.tau.cwiseProduct(inverse_traces(factors, tau.tau));
}

WeightVector fixed_point_map(const std::vector<PsdFactor>& factors, const WeightVector& tau,
                             const PNorm& pnorm) {
  if (static_cast<size_t>(tau.size()) != factors.size()) {
    throw DimensionMismatch("fixed_point_map: one weight per factor required");
  }
  const double n = static_cast<double>(factors.front().dim());
  Vector traces = inverse_traces(factors, tau.tau);
  Vector mapped(traces.size());
  for (Eigen::Index i = 0; i < traces.size(); ++i) {
    mapped(i) = std::pow(traces(i) / n, pnorm.p - 1.0);
  }
  return WeightVector(std::move(mapped));
}

WeightsResult compute_weights(const std::vector<PsdFactor>& factors, double p, double eps) {
  if (!(p > 1.0 && p < 2.0)) {
    std::ostringstream os;
    os << "compute_weights: power " << p << " outside (1, 2)";
    throw ConfigError(os.str());
  }
  if (!(eps > 0.0)) {
    throw ConfigError("compute_weights: eps must be positive");
  }
  const PNorm pnorm(p);
  const double m = static_cast<double>(factors.size());
  const double stop = (2.0 - p) / (p - 1.0) * eps;
  WeightVector tau(Vector::Constant(static_cast<Eigen::Index>(factors.size()),
                                    std::pow(m, 1.0 / p - 1.0)));
  WeightsResult result{tau, 0};
  for (long k = 0; k < 100000; ++k) {
    WeightVector next = fixed_point_map(factors, result.tau, pnorm);
    ++result.iterations;
    const double change = log_inf_distance(next.tau, result.tau.tau).value;
    result.tau = std::move(next);
    if (change <= stop) {
      return result;
    }
  }
  throw NotPositiveDefinite("compute_weights: fixed point failed to settle in 1e5 sweeps");
}

CertifyResult certify_ratio(const std::vector<PsdFactor>& factors, const WeightVector& tau,
                            const PNorm& pnorm, int samples, std::uint64_t seed,
                            bool rescale_tau) {
  if (static_cast<size_t>(tau.size()) != factors.size()) {
    throw DimensionMismatch("certify_ratio: one weight per factor required");
  }
  const int dim = factors.front().dim();
  const SpdOperator weighted_raw = sum_weighted(factors, tau.tau);
  const double q_norm = std::pow(tau.tau.array().pow(pnorm.q).sum(), 1.0 / pnorm.q);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CertifyResult result;
  result.raw = {std::numeric_limits<double>::infinity(), 0.0};
  result.rescaled = result.raw;
  result.rescaled_valid = rescale_tau;
  for (int s = 0; s < samples; ++s) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) {
      x(i) = gauss(rng);
    }
    const double nx = x.norm();
    if (nx == 0.0) {
      continue;
    }
    x /= nx;
    double wp = 0.0;
    for (const auto& f : factors) {
      wp += std::pow(f.quad(x), pnorm.p);
    }
    const double numerator = std::pow(wp, 1.0 / pnorm.p);
    const double denom_raw = weighted_raw.quad(x);
    const double ratio_raw = numerator / denom_raw;
    result.raw.lo = std::min(result.raw.lo, ratio_raw);
    result.raw.hi = std::max(result.raw.hi, ratio_raw);
    if (rescale_tau) {
      // B(τ/‖τ‖_q) = B(τ)/‖τ‖_q, so the rescaled ratio needs no second
      // factorization.
      const double ratio_rescaled = ratio_raw * q_norm;
      result.rescaled.lo = std::min(result.rescaled.lo, ratio_rescaled);
      result.rescaled.hi = std::max(result.rescaled.hi, ratio_rescaled);
    }
  }
  return result;
}

PreconditionerP2Result optimal_preconditioner_p2(const std::vector<PsdFactor>& factors,
                                                 double omega, double eps) {
  if (!(omega > 1.0)) {
    throw ConfigError("optimal_preconditioner_p2: omega must exceed 1");
  }
  const double m = static_cast<double>(factors.size());
  const double n = static_cast<double>(factors.front().dim());
  double p_prime = 0.0;
  bool fallback = false;
  if (m > n) {
    const double log_ratio = std::log(m / n);
    p_prime = 2.0 * log_ratio / (log_ratio + 2.0 * std::log(omega));
  }
  if (!(p_prime > 1.0 && p_prime < 2.0)) {
    // The surrogate power leaves (1,2) whenever m ≤ n·ω²; certify at 1.5
    // instead, which still sandwiches √ρ but with the generic factor below.
    p_prime = 1.5;
    fallback = true;
  }
  WeightsResult weights = compute_weights(factors, p_prime, eps);
  const PNorm pnorm(p_prime);
  const double q_norm =
      std::pow(weights.tau.tau.array().pow(pnorm.q).sum(), 1.0 / pnorm.q);
  Vector tau_hat = weights.tau.tau / q_norm;

  PreconditionerP2Result result{sum_weighted(factors, tau_hat),
                                std::pow(m, 0.5 - 1.0 / p_prime),
                                p_prime,
                                std::pow(n, 1.0 - 1.0 / p_prime) *
                                    std::pow(m, 1.0 / p_prime - 0.5),
                                fallback,
                                weights.iterations};
  return result;
}

double coherence(const std::vector<PsdFactor>& factors) {
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(factors.size()));
  return inverse_traces(factors, ones).maxCoeff();
}

}  // namespace quartsolve
