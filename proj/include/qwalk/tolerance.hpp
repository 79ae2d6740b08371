#pragma once

#include <stdexcept>
#include <string>

namespace qwalk
{

/// Raised when a numerical post-condition cannot be met (solver failure,
/// loss of unitarity, non-convergent root finding).
class NumericalError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Global numeric tolerance for runtime post-condition checks (norm and
/// probability conservation). Defaults to 1e-9; the QWALK_TOL environment
/// variable overrides it at first use.
double tolerance();

/// Replaces the global tolerance. Intended for tools and tests; not
/// synchronized with concurrent readers.
void set_tolerance(double tol);

} // namespace qwalk
