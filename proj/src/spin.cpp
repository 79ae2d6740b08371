#include "qwalk/spin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "qwalk/search.hpp"

namespace qwalk
{

namespace
{

constexpr double block_tolerance = 1e-12;

std::size_t spin_mask(std::size_t n, std::size_t spin)
{
	return std::size_t{1} << (n - 1 - spin);
}

} // namespace

std::size_t single_excitation_index(std::size_t n, std::size_t excited)
{
	if(excited >= n)
	{
		throw std::out_of_range("excited spin outside the network");
	}
	const std::size_t all_down = (std::size_t{1} << n) - 1;
	return all_down & ~spin_mask(n, excited);
}

Operator heisenberg_hamiltonian(const SpinSystem& sys)
{
	if(sys.n == 0 || sys.n > max_spins)
	{
		throw std::invalid_argument(fmt::format("spin count {} outside 1..{}", sys.n, max_spins));
	}
	if(!sys.fields.empty() && sys.fields.size() != sys.n)
	{
		throw std::invalid_argument("need one field per spin");
	}

	const std::size_t dim = std::size_t{1} << sys.n;
	Matrix<double> h = Matrix<double>::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

	for(const Coupling& c : sys.couplings)
	{
		if(c.i >= sys.n || c.j >= sys.n || c.i == c.j)
		{
			throw std::invalid_argument(fmt::format("bad coupling ({}, {})", c.i, c.j));
		}
		const std::size_t mi = spin_mask(sys.n, c.i);
		const std::size_t mj = spin_mask(sys.n, c.j);
		for(std::size_t s = 0; s < dim; ++s)
		{
			const bool down_i = (s & mi) != 0;
			const bool down_j = (s & mj) != 0;
			const double zz = down_i == down_j ? 1.0 : -1.0;
			h(s, s) += -0.5 * c.jz * zz;

			// X X flips both spins with amplitude 1. Y Y flips them with
			// amplitude +1 on antiparallel pairs and -1 on parallel pairs.
			const std::size_t flipped = s ^ mi ^ mj;
			h(flipped, s) += -0.5 * (c.jx - c.jy * zz);
		}
	}

	for(std::size_t k = 0; k < sys.fields.size(); ++k)
	{
		const double field = sys.fields[k];
		if(field == 0.0)
		{
			continue;
		}
		const std::size_t mk = spin_mask(sys.n, k);
		for(std::size_t s = 0; s < dim; ++s)
		{
			h(s, s) += (s & mk) ? -field : field;
		}
	}

	return Operator(std::move(h), fmt::format("Heisenberg Hamiltonian ({} spins)", sys.n));
}

double excitation_leakage(const Operator& full, std::size_t n)
{
	const auto& h = full.matrix();
	if(h.rows() != (Eigen::Index{1} << n))
	{
		throw std::invalid_argument("operator dimension is not 2^n");
	}
	double worst = 0.0;
	for(Eigen::Index col = 0; col < h.cols(); ++col)
	{
		const int up_col = static_cast<int>(n) - std::popcount(static_cast<std::size_t>(col));
		for(Eigen::Index row = 0; row < h.rows(); ++row)
		{
			const int up_row = static_cast<int>(n) - std::popcount(static_cast<std::size_t>(row));
			if(up_row != up_col)
			{
				worst = std::max(worst, std::abs(h(row, col)));
			}
		}
	}
	return worst;
}

Operator project_single_excitation(const Operator& full, std::size_t n)
{
	const auto& h = full.matrix();
	if(n == 0 || n > max_spins || h.rows() != (Eigen::Index{1} << n))
	{
		throw std::invalid_argument("operator dimension is not 2^n");
	}

	std::vector<Eigen::Index> index(n);
	for(std::size_t k = 0; k < n; ++k)
	{
		index[k] = static_cast<Eigen::Index>(single_excitation_index(n, k));
	}

	double leak = 0.0;
	for(Eigen::Index col : index)
	{
		for(Eigen::Index row = 0; row < h.rows(); ++row)
		{
			if(std::popcount(static_cast<std::size_t>(row)) != static_cast<int>(n) - 1)
			{
				leak = std::max(leak, std::abs(h(row, col)));
			}
		}
	}
	if(leak > block_tolerance)
	{
		throw NumericalError(fmt::format("{}: single-excitation block couples to other sectors ({:.3e})",
		                                 full.name(), leak));
	}

	Matrix<double> block(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
	for(std::size_t k = 0; k < n; ++k)
	{
		for(std::size_t l = 0; l < n; ++l)
		{
			block(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = h(index[k], index[l]);
		}
	}
	return Operator(std::move(block), "single-excitation block");
}

SpinSystem walk_spin_system(const SignedWeightedGraph& g, double alpha, double gamma,
                            std::optional<std::size_t> marked, double perturbation)
{
	SpinSystem sys;
	sys.n = g.size();
	for(const Edge& e : g.edges())
	{
		const double j = gamma * e.weight;
		sys.couplings.push_back({e.u, e.v, j, j, (1.0 - alpha) * j});
	}
	if(perturbation != 0.0 && !sys.couplings.empty())
	{
		sys.couplings.front().jx += perturbation;
		sys.couplings.front().jy += perturbation;
	}
	if(marked)
	{
		if(*marked >= sys.n)
		{
			throw std::invalid_argument("marked vertex outside the graph");
		}
		sys.fields.assign(sys.n, 0.0);
		sys.fields[*marked] = -0.5;
	}
	return sys;
}

State embed_single_excitation(std::size_t n, const ComplexVector<double>& vertex_amplitudes)
{
	if(static_cast<std::size_t>(vertex_amplitudes.size()) != n)
	{
		throw std::invalid_argument("need one amplitude per vertex");
	}
	ComplexVector<double> full = ComplexVector<double>::Zero(Eigen::Index{1} << n);
	for(std::size_t k = 0; k < n; ++k)
	{
		full(static_cast<Eigen::Index>(single_excitation_index(n, k))) = vertex_amplitudes(static_cast<Eigen::Index>(k));
	}
	return State(std::move(full));
}

EquivalenceReport compare_modulo_identity(const Matrix<double>& projected, const Matrix<double>& target)
{
	if(projected.rows() != target.rows() || projected.cols() != target.cols())
	{
		throw std::invalid_argument("compared matrices differ in shape");
	}
	const Matrix<double> diff = projected - target;
	const auto diagonal = diff.diagonal();
	const double lo = diagonal.minCoeff();
	const double hi = diagonal.maxCoeff();

	EquivalenceReport report;
	report.identity_offset = 0.5 * (lo + hi);
	report.max_deviation = 0.5 * (hi - lo);
	for(Eigen::Index j = 0; j < diff.cols(); ++j)
	{
		for(Eigen::Index i = 0; i < diff.rows(); ++i)
		{
			if(i != j)
			{
				report.max_deviation = std::max(report.max_deviation, std::abs(diff(i, j)));
			}
		}
	}
	return report;
}

EquivalenceReport verify_walk_equivalence(const SignedWeightedGraph& g, double alpha, double gamma,
                                          std::optional<std::size_t> marked, double perturbation)
{
	const Operator full = heisenberg_hamiltonian(walk_spin_system(g, alpha, gamma, marked, perturbation));
	const Operator projected = project_single_excitation(full, g.size());
	const Operator target = search_hamiltonian(g, alpha, gamma, marked);
	return compare_modulo_identity(projected.matrix(), target.matrix());
}

double dynamics_deviation(const SignedWeightedGraph& g, double alpha, double gamma,
                          std::optional<std::size_t> marked, const ComplexVector<double>& vertex_amplitudes,
                          std::span<const double> times)
{
	const std::size_t n = g.size();
	const Operator full = heisenberg_hamiltonian(walk_spin_system(g, alpha, gamma, marked));
	const Operator walk = search_hamiltonian(g, alpha, gamma, marked);

	const Propagator<double> spin_evolution(full, embed_single_excitation(n, vertex_amplitudes));
	const Propagator<double> walk_evolution(walk, State(vertex_amplitudes));

	double worst = 0.0;
	for(double t : times)
	{
		const Vector<double> spin_probs = probabilities(spin_evolution.at(t));
		const Vector<double> walk_probs = probabilities(walk_evolution.at(t));
		for(std::size_t k = 0; k < n; ++k)
		{
			const auto idx = static_cast<Eigen::Index>(single_excitation_index(n, k));
			worst = std::max(worst, std::abs(spin_probs(idx) - walk_probs(static_cast<Eigen::Index>(k))));
		}
	}
	return worst;
}

} // namespace qwalk
