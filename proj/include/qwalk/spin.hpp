#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/linalg.hpp"

namespace qwalk
{

/// Largest spin count accepted by heisenberg_hamiltonian (2^14 = 16384
/// basis states, about 2 GiB as a dense double matrix).
constexpr std::size_t max_spins = 14;

struct Coupling
{
	std::size_t i;
	std::size_t j;
	double jx;
	double jy;
	double jz;
};

/// Heisenberg network
///   H = -1/2 sum_{edges} (Jx X_i X_j + Jy Y_i Y_j + Jz Z_i Z_j) + sum_i h_i Z_i.
struct SpinSystem
{
	std::size_t n = 0;
	std::vector<Coupling> couplings;
	std::vector<double> fields; ///< h_i, empty means all zero
};

/// Index of a product state in the 2^n basis. Spin 0 is the most
/// significant bit; a set bit is spin down, so index 0 is all spins up.
/// `excited` is the single spin that is up, all others down.
std::size_t single_excitation_index(std::size_t n, std::size_t excited);

/// Dense 2^n Hamiltonian in the Z product basis. Throws std::invalid_argument
/// when n exceeds max_spins or a coupling is out of range.
Operator heisenberg_hamiltonian(const SpinSystem& sys);

/// Largest |H(s, s')| between basis states with different numbers of up
/// spins. Zero when H conserves the excitation number.
double excitation_leakage(const Operator& full, std::size_t n);

/// n x n block of a 2^n operator on the single-excitation states, ordered by
/// excited vertex. Throws NumericalError when that block couples to the rest
/// of the space by more than 1e-12.
Operator project_single_excitation(const Operator& full, std::size_t n);

/// Couplings Jx = Jy = gamma e_ij, Jz = (1 - alpha) gamma e_ij, and the
/// oracle field h_marked = -1/2 when a marked vertex is given. A nonzero
/// `perturbation` is added to Jx and Jy of the first edge.
SpinSystem walk_spin_system(const SignedWeightedGraph& g, double alpha, double gamma,
                            std::optional<std::size_t> marked = std::nullopt, double perturbation = 0.0);

/// Embeds vertex amplitudes into the 2^n space on single-excitation states.
State embed_single_excitation(std::size_t n, const ComplexVector<double>& vertex_amplitudes);

struct EquivalenceReport
{
	double max_deviation = 0.0;   ///< max |P - T - sI| with the best identity offset s
	double identity_offset = 0.0; ///< s
};

/// Deviation of the projected spin Hamiltonian from the walk Hamiltonian
/// -gamma L_alpha (minus |a><a| when marked), modulo a multiple of the
/// identity.
EquivalenceReport compare_modulo_identity(const Matrix<double>& projected, const Matrix<double>& target);

EquivalenceReport verify_walk_equivalence(const SignedWeightedGraph& g, double alpha, double gamma,
                                          std::optional<std::size_t> marked = std::nullopt,
                                          double perturbation = 0.0);

/// Evolves the 2^n spin system and the n-vertex walk from the same vertex
/// amplitudes and returns the largest per-vertex probability difference over
/// the given times.
double dynamics_deviation(const SignedWeightedGraph& g, double alpha, double gamma,
                          std::optional<std::size_t> marked, const ComplexVector<double>& vertex_amplitudes,
                          std::span<const double> times);

} // namespace qwalk
