#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quartsolve/operators.hpp"

namespace quartsolve {

/// Portable text container for generated instances: a header line with the
/// shape, then factor blocks in row-major order, then the linear term and/or
/// target vectors.  Full 17-digit precision, whitespace separated, no binary.
///
///   qfinst 1
///   kind sos|gram m <count> n <dim> r <max-cols>
///   factor <index> <rows> <cols>
///   <row-major entries, one factor row per line>
///   matrix <rows> <cols>          (optional, Gram targets)
///   c <len> / d <len>             (optional vectors)
///   end
struct InstanceText {
  std::string kind;  // "sos" or "gram"
  std::vector<PsdFactor> factors;
  std::optional<Matrix> matrix;
  std::optional<Vector> c;
  std::optional<Vector> d;
};

void save_instance(std::ostream& out, const InstanceText& inst);
void save_instance_file(const std::string& path, const InstanceText& inst);

InstanceText load_instance(std::istream& in);
InstanceText load_instance_file(const std::string& path);

/// Shortest-round-trip-free fixed formatting used across every text artifact
/// (instances and CSVs): 17 significant digits, C locale.
std::string format_number(double v);

}  // namespace quartsolve
