#include "qwalk/tolerance.hpp"

#include <atomic>
#include <cstdlib>

namespace qwalk
{

namespace
{

double initial_tolerance()
{
	if(const char* env = std::getenv("QWALK_TOL"))
	{
		char* end = nullptr;
		const double value = std::strtod(env, &end);
		if(end != env && value > 0.0)
		{
			return value;
		}
	}
	return 1e-9;
}

std::atomic<double>& tolerance_slot()
{
	static std::atomic<double> slot{initial_tolerance()};
	return slot;
}

} // namespace

double tolerance()
{
	return tolerance_slot().load(std::memory_order_relaxed);
}

void set_tolerance(double tol)
{
	if(!(tol > 0.0))
	{
		throw std::invalid_argument("tolerance must be positive");
	}
	tolerance_slot().store(tol, std::memory_order_relaxed);
}

} // namespace qwalk
