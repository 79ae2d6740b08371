#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/linalg.hpp"

namespace qwalk
{

/// -gamma L_alpha - |a><a| on an arbitrary graph; no oracle term when
/// `marked` is empty.
Operator search_hamiltonian(const SignedWeightedGraph& g, double alpha, double gamma,
                            std::optional<std::size_t> marked);

/// Critical jumping rate 2/N.
inline double critical_gamma(std::size_t n)
{
	return 2.0 / static_cast<double>(n);
}

/// The barbell walk restricted to the span of the uniform superpositions
/// over the vertex classes {a, b, c, d, e}. The (N/2 - 1) I part of the
/// degree matrix is dropped since it only contributes a global phase.
struct ReducedBarbellModel
{
	std::size_t n = 0;
	double alpha = 0.0;
	double bridge_weight = 1.0;
	double gamma = 0.0;

	[[nodiscard]] Matrix<double> adjacency() const;
	[[nodiscard]] Matrix<double> degree() const;
	[[nodiscard]] Matrix<double> laplacian() const;
	[[nodiscard]] Operator hamiltonian() const;
	[[nodiscard]] State initial_state() const;

	static const std::vector<std::string>& labels();
};

enum class Engine
{
	reduced, ///< 5-dimensional class space
	full     ///< all N vertices
};

/// Per-class probabilities, indexed by VertexClass. Classes b and e are
/// summed over all of their vertices.
struct ClassProbabilities
{
	std::array<double, vertex_class_count> values{};

	[[nodiscard]] double operator[](VertexClass cls) const { return values[static_cast<std::size_t>(cls)]; }
	[[nodiscard]] double ab() const { return (*this)[VertexClass::a] + (*this)[VertexClass::b]; }
	[[nodiscard]] double abc() const { return ab() + (*this)[VertexClass::c]; }
	[[nodiscard]] double total() const;
};

/// Search for the marked vertex of a barbell of n vertices. The bridge
/// weight is left open so one problem can serve every segment of a
/// schedule.
struct SearchProblem
{
	std::size_t n = 0;
	double alpha = 0.0;
	double gamma = 0.0;
	Engine engine = Engine::reduced;

	/// gamma = 2/N.
	static SearchProblem critical(std::size_t n, double alpha, Engine engine = Engine::reduced);

	[[nodiscard]] Operator hamiltonian(double bridge_weight) const;
	[[nodiscard]] State initial_state() const;
	[[nodiscard]] ClassProbabilities class_probabilities(const State& psi) const;
};

/// Uniform superposition over all vertices, in the engine's basis.
State uniform_initial_state(const SearchProblem& problem);

struct Segment
{
	double bridge_weight = 1.0;
	double duration = std::numeric_limits<double>::infinity();
};

/// Piecewise-constant bridge weights. The last segment keeps running until
/// the end of whatever time grid it is sampled on.
struct Schedule
{
	std::vector<Segment> segments;

	static Schedule constant(double bridge_weight);
	static Schedule two_stage(double first_weight, double switch_time, double second_weight);

	void validate() const;
};

/// Continuous piecewise evolution under a schedule. Segment propagators are
/// built once and reused for every sample.
class ScheduleEvolution
{
public:
	ScheduleEvolution(const SearchProblem& problem, const Schedule& schedule);

	[[nodiscard]] State at(double t) const;

	/// Times at which the bridge weight changes.
	[[nodiscard]] const std::vector<double>& boundaries() const { return starts_; }

private:
	std::vector<Propagator<double>> propagators_;
	std::vector<double> starts_;
};

struct ProbabilitySeries
{
	std::vector<double> times;
	std::array<std::vector<double>, vertex_class_count> by_class;
	std::vector<double> abc;
	std::vector<double> ab;

	[[nodiscard]] const std::vector<double>& operator[](VertexClass cls) const
	{
		return by_class[static_cast<std::size_t>(cls)];
	}
	[[nodiscard]] std::size_t size() const { return times.size(); }
};

/// Samples 0, dt, 2 dt, ... up to t_max inclusive.
std::vector<double> time_grid(double t_max, double dt);

/// sqrt(N) / 2000: at least 2000 samples per sqrt(N) time units.
double default_time_step(std::size_t n);

/// Throws std::invalid_argument unless the grid starts at 0 and is strictly
/// increasing.
ProbabilitySeries run_schedule(const SearchProblem& problem, const Schedule& schedule, std::span<const double> grid);

enum class Observable
{
	p_a,
	p_ab,
	p_abc
};

std::span<const double> observable(const ProbabilitySeries& series, Observable which);

struct Peak
{
	double time = 0.0;
	double value = 0.0;
};

struct Window
{
	double lo = 0.0;
	double hi = std::numeric_limits<double>::infinity();
};

/// Largest sample inside the window, refined by a parabola through it and
/// its two neighbours. Throws std::invalid_argument for an empty window.
Peak peak(const ProbabilitySeries& series, Observable which, Window window = {});

} // namespace qwalk
