#pragma once

#include <stdexcept>
#include <string>

namespace mheat {

// Validation failures: bad arguments, malformed configs, unknown scenarios.
struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Evaluation at (or too close to) a critical point where the requested
// quantity is not defined.
struct degenerate_point_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative solve (CG, BiCGStab, eigen iteration) failed to reach its
// tolerance within the iteration cap.
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An operation that needs a nonempty domain was handed an empty slice.
struct empty_domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mheat
