#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dlq {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  singular_evaluation,  // kernel evaluated at a coincident pair without softening
  ill_posed_system,     // rank-deficient system with lambda = 0
  negative_weight,      // negative scalar weight under NegativeWeightPolicy::error
  self_intersection,    // collar/tube construction produced coincident points
  degenerate_pair,      // S^2 Green gradient at coincident or antipodal points
  parse_error,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace dlq
