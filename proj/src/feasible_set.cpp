#include "quartsolve/feasible_set.hpp"

#include <cmath>
#include <sstream>

namespace quartsolve {

namespace {

/// Componentwise positive part, the orthant projection in any diagonal norm.
Vector clamp_nonnegative(const Vector& v) {
  return v.cwiseMax(0.0);
}

}  // namespace

FeasibleSet::FeasibleSet(Cone cone, Vector linear_term, Preconditioner norm)
    : cone_(cone), c_(std::move(linear_term)), norm_(std::move(norm)) {
  if (c_.size() == 0 || c_.lpNorm<Eigen::Infinity>() == 0.0) {
    throw BadShape("FeasibleSet: linear term must be a nonzero vector");
  }
  if (norm_.dim() != c_.size()) {
    throw DimensionMismatch("FeasibleSet: norm dimension does not match linear term");
  }
  if (cone_.kind == ConeKind::NonnegativeOrthant) {
    if (c_.maxCoeff() <= 0.0) {
      throw AssumptionPolarViolated(
          "FeasibleSet: no orthant point reaches the slice, every linear-term entry is <= 0");
    }
    if (norm_.kind() == Preconditioner::Kind::General) {
      throw UnsupportedGeometry(
          "FeasibleSet: orthant projection supports identity or diagonal norms only");
    }
  }
  b_inv_c_ = norm_.apply_inverse(c_);
  c_dual_norm_ = std::sqrt(c_.dot(b_inv_c_));
}

bool FeasibleSet::in_cone(const Vector& x) const {
  if (cone_.kind == ConeKind::FullSpace) {
    return true;
  }
  return (x.array() >= 0.0).all();
}

Vector FeasibleSet::project(const Vector& y_hat) const {
  if (y_hat.size() != c_.size()) {
    throw DimensionMismatch("project: point dimension does not match the set");
  }
  if (cone_.kind == ConeKind::FullSpace) {
    const double gap = 1.0 - c_.dot(y_hat);
    return y_hat + (gap / (c_dual_norm_ * c_dual_norm_)) * b_inv_c_;
  }
  const double t_star = dual_bisection(y_hat);
  Vector y = clamp_nonnegative(y_hat + t_star * b_inv_c_);
  // Bisection leaves a residual in ⟨c,y⟩; one exact rescue pass over the
  // strictly positive support sharpens it without leaving the orthant.
  const double cy = c_.dot(y);
  if (std::abs(cy - 1.0) > 1e-12) {
    double support_weight = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) > 0.0) {
        support_weight += c_(i) * b_inv_c_(i);
      }
    }
    if (support_weight > 0.0) {
      Vector sharpened = y;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) > 0.0) {
          sharpened(i) += (1.0 - cy) / support_weight * b_inv_c_(i);
        }
      }
      if ((sharpened.array() >= 0.0).all() &&
          std::abs(c_.dot(sharpened) - 1.0) < std::abs(cy - 1.0)) {
        y = sharpened;
      }
    }
  }
  return y;
}

double FeasibleSet::dual_bisection(const Vector& y_hat) const {
  if (cone_.kind != ConeKind::NonnegativeOrthant) {
    throw UnsupportedGeometry("dual_bisection: defined for the orthant cone only");
  }
  const auto slice_value = [&](double t) {
    return c_.dot(clamp_nonnegative(y_hat + t * b_inv_c_));
  };
  if (std::abs(slice_value(0.0) - 1.0) <= 1e-14 && in_cone(y_hat)) {
    return 0.0;
  }
  double radius = (1.0 + std::abs(c_.dot(y_hat))) / (c_dual_norm_ * c_dual_norm_);
  double lo = -radius;
  double hi = radius;
  // The slice value is nondecreasing in t and unbounded above along B⁻¹c,
  // so doubling the radius always brackets 1 eventually.
  for (int attempt = 0; attempt < 200 && slice_value(hi) < 1.0; ++attempt) {
    hi *= 2.0;
  }
  for (int attempt = 0; attempt < 200 && slice_value(lo) > 1.0; ++attempt) {
    lo *= 2.0;
  }
  if (slice_value(lo) > 1.0 || slice_value(hi) < 1.0) {
    throw BisectionNoBracket("dual_bisection: could not bracket the slice equation");
  }
  double mid = 0.5 * (lo + hi);
  while (hi - lo > 1e-12 * (1.0 + std::abs(mid))) {
    if (slice_value(mid) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    mid = 0.5 * (lo + hi);
  }
  return mid;
}

Vector FeasibleSet::initial_point() const {
  return project(b_inv_c_ / (c_dual_norm_ * c_dual_norm_));
}

}  // namespace quartsolve
