#pragma once

#include <stdexcept>

namespace quartsolve {

/// Common base so callers can catch every library failure in one clause.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };

/// Sum of the quadratic operators is singular; the structural bound
/// certificates cannot be formed.
struct SingularBbar : Error { using Error::Error; };

struct BadShape : Error { using Error::Error; };
struct UnsupportedGeometry : Error { using Error::Error; };

/// The linear term lies in the polar of the cone, so the problem is
/// minimized at the origin and the slice is unreachable from inside the cone.
struct AssumptionPolarViolated : Error { using Error::Error; };

struct Infeasible : Error { using Error::Error; };
struct BisectionNoBracket : Error { using Error::Error; };

/// The quartic form vanished on the slice; signals a zero lower certificate
/// or an infeasibility bug upstream.
struct ZeroRho : Error { using Error::Error; };

struct LineSearchStall : Error { using Error::Error; };
struct DisconnectedGraph : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace quartsolve
