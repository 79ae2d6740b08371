#include "qwalk/search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace qwalk
{

Operator search_hamiltonian(const SignedWeightedGraph& g, double alpha, double gamma,
                            std::optional<std::size_t> marked)
{
	Matrix<double> h = -gamma * generalized_laplacian(g, alpha).matrix();
	if(marked)
	{
		if(*marked >= g.size())
		{
			throw std::invalid_argument("marked vertex outside the graph");
		}
		h(static_cast<Eigen::Index>(*marked), static_cast<Eigen::Index>(*marked)) -= 1.0;
	}
	return Operator(std::move(h), "search Hamiltonian");
}

Matrix<double> ReducedBarbellModel::adjacency() const
{
	validate(BarbellSpec{n, bridge_weight});
	const double half = static_cast<double>(n) / 2.0;
	const double sb = std::sqrt(half - 2.0);
	const double se = std::sqrt(half - 1.0);
	const double w = bridge_weight;

	Matrix<double> a(5, 5);
	// clang-format off
	a <<  0.0,  sb,         1.0,  0.0,  0.0,
	      sb,   half - 3.0, sb,   0.0,  0.0,
	      1.0,  sb,         0.0,  w,    0.0,
	      0.0,  0.0,        w,    0.0,  se,
	      0.0,  0.0,        0.0,  se,   half - 2.0;
	// clang-format on
	return a;
}

Matrix<double> ReducedBarbellModel::degree() const
{
	Matrix<double> d = Matrix<double>::Zero(5, 5);
	d(2, 2) = bridge_weight;
	d(3, 3) = bridge_weight;
	return d;
}

Matrix<double> ReducedBarbellModel::laplacian() const
{
	return adjacency() + (alpha - 1.0) * degree();
}

Operator ReducedBarbellModel::hamiltonian() const
{
	Matrix<double> h = -gamma * laplacian();
	h(0, 0) -= 1.0;
	return Operator(std::move(h), fmt::format("reduced barbell Hamiltonian (N = {}, alpha = {}, w = {})", n,
	                                          alpha, bridge_weight));
}

State ReducedBarbellModel::initial_state() const
{
	validate(BarbellSpec{n, bridge_weight});
	const double half = static_cast<double>(n) / 2.0;
	ComplexVector<double> psi(5);
	psi << 1.0, std::sqrt(half - 2.0), 1.0, 1.0, std::sqrt(half - 1.0);
	psi /= std::sqrt(static_cast<double>(n));
	return State(std::move(psi), labels());
}

const std::vector<std::string>& ReducedBarbellModel::labels()
{
	static const std::vector<std::string> names{"a", "b", "c", "d", "e"};
	return names;
}

double ClassProbabilities::total() const
{
	double sum = 0.0;
	for(double p : values)
	{
		sum += p;
	}
	return sum;
}

SearchProblem SearchProblem::critical(std::size_t n, double alpha, Engine engine)
{
	return SearchProblem{n, alpha, critical_gamma(n), engine};
}

Operator SearchProblem::hamiltonian(double bridge_weight) const
{
	if(engine == Engine::reduced)
	{
		return ReducedBarbellModel{n, alpha, bridge_weight, gamma}.hamiltonian();
	}
	const BarbellLayout layout{n};
	return search_hamiltonian(build_barbell({n, bridge_weight}), alpha, gamma, layout.marked());
}

State SearchProblem::initial_state() const
{
	return uniform_initial_state(*this);
}

ClassProbabilities SearchProblem::class_probabilities(const State& psi) const
{
	ClassProbabilities out;
	const Vector<double> p = probabilities(psi);
	if(engine == Engine::reduced)
	{
		if(p.size() != 5)
		{
			throw std::invalid_argument("reduced state must have 5 amplitudes");
		}
		for(std::size_t k = 0; k < vertex_class_count; ++k)
		{
			out.values[k] = p(static_cast<Eigen::Index>(k));
		}
		return out;
	}

	if(static_cast<std::size_t>(p.size()) != n)
	{
		throw std::invalid_argument("full state must have one amplitude per vertex");
	}
	const BarbellLayout layout{n};
	for(std::size_t v = 0; v < n; ++v)
	{
		out.values[static_cast<std::size_t>(layout.class_of(v))] += p(static_cast<Eigen::Index>(v));
	}
	return out;
}

State uniform_initial_state(const SearchProblem& problem)
{
	validate(BarbellSpec{problem.n, 1.0});
	if(problem.engine == Engine::reduced)
	{
		return ReducedBarbellModel{problem.n, problem.alpha, 1.0, problem.gamma}.initial_state();
	}
	const auto n = static_cast<Eigen::Index>(problem.n);
	ComplexVector<double> psi = ComplexVector<double>::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
	return State(std::move(psi));
}

Schedule Schedule::constant(double bridge_weight)
{
	return Schedule{{Segment{bridge_weight}}};
}

Schedule Schedule::two_stage(double first_weight, double switch_time, double second_weight)
{
	return Schedule{{Segment{first_weight, switch_time}, Segment{second_weight}}};
}

void Schedule::validate() const
{
	if(segments.empty())
	{
		throw std::invalid_argument("schedule needs at least one segment");
	}
	for(std::size_t k = 0; k < segments.size(); ++k)
	{
		const Segment& s = segments[k];
		if(std::isnan(s.duration) || s.duration < 0.0)
		{
			throw std::invalid_argument(fmt::format("segment {} has negative duration", k));
		}
		if(std::isinf(s.duration) && k + 1 != segments.size())
		{
			throw std::invalid_argument(fmt::format("only the last segment may be open-ended (segment {})", k));
		}
		if(!std::isfinite(s.bridge_weight))
		{
			throw std::invalid_argument(fmt::format("segment {} has a non-finite bridge weight", k));
		}
	}
}

ScheduleEvolution::ScheduleEvolution(const SearchProblem& problem, const Schedule& schedule)
{
	schedule.validate();

	std::map<double, Operator> hamiltonians;
	auto hamiltonian_for = [&](double w) -> const Operator& {
		auto it = hamiltonians.find(w);
		if(it == hamiltonians.end())
		{
			it = hamiltonians.emplace(w, problem.hamiltonian(w)).first;
		}
		return it->second;
	};

	State state = problem.initial_state();
	double start = 0.0;
	for(std::size_t k = 0; k < schedule.segments.size(); ++k)
	{
		const Segment& segment = schedule.segments[k];
		propagators_.emplace_back(hamiltonian_for(segment.bridge_weight), state);
		starts_.push_back(start);
		if(k + 1 < schedule.segments.size())
		{
			state = propagators_.back().at(segment.duration);
			start += segment.duration;
		}
	}
}

State ScheduleEvolution::at(double t) const
{
	if(t < 0.0)
	{
		throw std::invalid_argument("negative time");
	}
	// Last segment whose start is <= t; a sample exactly on a boundary uses
	// the later segment at zero elapsed time.
	const auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
	const auto k = static_cast<std::size_t>(std::distance(starts_.begin(), it)) - 1;
	return propagators_[k].at(t - starts_[k]);
}

std::vector<double> time_grid(double t_max, double dt)
{
	if(!(t_max > 0.0) || !(dt > 0.0) || !std::isfinite(t_max))
	{
		throw std::invalid_argument("time grid needs t_max > 0 and dt > 0");
	}
	const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
	std::vector<double> grid(steps + 1);
	for(std::size_t k = 0; k <= steps; ++k)
	{
		grid[k] = static_cast<double>(k) * dt;
	}
	return grid;
}

double default_time_step(std::size_t n)
{
	return std::sqrt(static_cast<double>(n)) / 2000.0;
}

ProbabilitySeries run_schedule(const SearchProblem& problem, const Schedule& schedule, std::span<const double> grid)
{
	if(grid.empty() || grid.front() != 0.0)
	{
		throw std::invalid_argument("time grid must start at 0");
	}
	for(std::size_t k = 1; k < grid.size(); ++k)
	{
		if(!(grid[k] > grid[k - 1]))
		{
			throw std::invalid_argument(fmt::format("time grid not strictly increasing at index {}", k));
		}
	}

	const ScheduleEvolution evolution(problem, schedule);

	ProbabilitySeries series;
	series.times.assign(grid.begin(), grid.end());
	for(auto& column : series.by_class)
	{
		column.reserve(grid.size());
	}
	series.abc.reserve(grid.size());
	series.ab.reserve(grid.size());

	for(double t : grid)
	{
		const ClassProbabilities p = problem.class_probabilities(evolution.at(t));
		if(std::abs(p.total() - 1.0) > tolerance())
		{
			throw NumericalError(fmt::format("probabilities sum to {:.12f} at t = {}", p.total(), t));
		}
		for(std::size_t k = 0; k < vertex_class_count; ++k)
		{
			series.by_class[k].push_back(p.values[k]);
		}
		series.abc.push_back(p.abc());
		series.ab.push_back(p.ab());
	}
	return series;
}

std::span<const double> observable(const ProbabilitySeries& series, Observable which)
{
	switch(which)
	{
	case Observable::p_a: return series[VertexClass::a];
	case Observable::p_ab: return series.ab;
	case Observable::p_abc: return series.abc;
	}
	throw std::invalid_argument("unknown observable");
}

Peak peak(const ProbabilitySeries& series, Observable which, Window window)
{
	const std::span<const double> values = observable(series, which);
	const auto& t = series.times;

	const auto first = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), window.lo) - t.begin());
	const auto last = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), window.hi) - t.begin());
	if(first >= last)
	{
		throw std::invalid_argument(fmt::format("no samples in window [{}, {}]", window.lo, window.hi));
	}

	std::size_t best = first;
	for(std::size_t k = first + 1; k < last; ++k)
	{
		if(values[k] > values[best])
		{
			best = k;
		}
	}

	Peak result{t[best], values[best]};
	if(best == first || best + 1 >= last)
	{
		return result;
	}

	// Parabola through (t0, y0), (t1, y1), (t2, y2).
	const double t0 = t[best - 1], t1 = t[best], t2 = t[best + 1];
	const double y0 = values[best - 1], y1 = values[best], y2 = values[best + 1];
	const double d01 = (y1 - y0) / (t1 - t0);
	const double d12 = (y2 - y1) / (t2 - t1);
	const double curvature = (d12 - d01) / (t2 - t0);
	if(!(curvature < 0.0))
	{
		return result;
	}
	const double slope_at_t1 = d01 + curvature * (t1 - t0);
	const double vertex = std::clamp(t1 - slope_at_t1 / (2.0 * curvature), t0, t2);
	const double dt = vertex - t1;
	result.time = vertex;
	result.value = y1 + slope_at_t1 * dt + curvature * dt * dt;
	return result;
}

} // namespace qwalk
