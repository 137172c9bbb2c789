#pragma once

#include <stdexcept>
#include <string>

namespace epsense {

/// Rejected inputs or configuration. The CLI maps this to exit code 1.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical procedure could not produce a trustworthy result
/// (bracket without sign change, non-convergence, quadrature error
/// above tolerance, ...). The CLI maps this to exit code 2.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
std::string num_str(double v);
}

}  // namespace epsense
