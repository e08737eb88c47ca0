#pragma once

#include <stdexcept>
#include <string>

#include "abel/coeffs.hpp"

namespace abel {

class SpecParseError : public std::runtime_error {
 public:
  SpecParseError(const std::string& what, int line, std::string field)
      : std::runtime_error("line " + std::to_string(line) +
                           (field.empty() ? "" : ", field '" + field + "'") +
                           ": " + what),
        line(line),
        field(std::move(field)) {}
  int line;
  std::string field;
};

/// Parses the key-value equation document
///   A: {trig: {c0: 1, cos: [...], sin: [...]}}
///   B: {poly: {terms: [[exp, coef], ...]}}
///   C: {samples: [[t, v], ...]}
/// A and B are required, C defaults to zero. Commas are optional
/// separators; '#' starts a comment.
AbelEquation parse_spec(const std::string& text);

/// Canonical serialization; parse_spec(serialize_spec(eq)) == eq.
std::string serialize_spec(const AbelEquation& eq);

/// Fixed 17-significant-digit formatting used across reports and spec
/// documents (round-trips doubles exactly).
std::string format_double(double v);

}  // namespace abel
