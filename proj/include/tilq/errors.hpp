#pragma once

#include <stdexcept>
#include <string>

namespace tilq {

// Numerical failure inside a solver (blow-up, violated sign condition,
// broken a-priori bound). Distinct from precondition violations, which
// throw std::invalid_argument / std::domain_error.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tilq
