#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/linalg.hpp"
#include "qwalk/search.hpp"

namespace qwalk
{

// Analytic large-N predictions for search on the weighted barbell at the
// critical jumping rate 2/N. Unless stated otherwise, five-component
// vectors use the class basis {a, b, c, d, e} of ReducedBarbellModel and
// times are physical times t for a given N. Quantities that scale as
// sqrt(N) are reported as coefficients of sqrt(N) ("tau" below).

struct CriticalParams
{
	double gamma_c = 0.0;
	std::optional<double> w_plus;  ///< N / (2 alpha), absent at alpha = 0
	std::optional<double> w_minus; ///< N / (2 (alpha - 2)), absent at alpha = 2
};

CriticalParams critical_params(std::size_t n, double alpha);

enum class WeightClass
{
	noncritical,
	plus, ///< w = w_+, |cd+> joins the degenerate a, b, e block
	minus ///< w = w_-, |cd-> joins the degenerate a, b, e block
};

const char* to_string(WeightClass cls);

/// `plus` when w is within relative `rel_eps` of w_+, `minus` likewise for
/// w_-, otherwise `noncritical`.
WeightClass classify_weight(std::size_t n, double alpha, double w, double rel_eps = 1e-9);

struct EigenPair
{
	std::string label;
	Vector<double> vector; ///< unit norm, class basis
	double value = 0.0;
};

/// H0: the search Hamiltonian keeping only the oracle, the O(N) clique
/// diagonals and the bridge block.
Matrix<double> leading_order_hamiltonian(std::size_t n, double alpha, double w, double gamma);

/// H1: the O(sqrt N) clique couplings.
Matrix<double> first_order_correction(std::size_t n, double gamma);

/// Eigenpairs of H0 in the order |a>, |b>, |cd+>, |cd->, |e>.
std::vector<EigenPair> leading_order_eigensystem(std::size_t n, double alpha, double w, double gamma);

/// Number of H0 eigenvalues within `tol` of -1 at gamma = 2/N.
std::size_t degenerate_count(std::size_t n, double alpha, double w, double tol = 1e-12);

/// Perturbative eigenpairs at gamma = 2/N.
///
/// noncritical: (|a>+|b>)/sqrt2, |e>, (|a>-|b>)/sqrt2, |cd+>, |cd-> with
/// eigenvalues -1 - sqrt(2/N), -1, -1 + sqrt(2/N), -2 alpha w / N,
/// -2 (alpha - 2) w / N.
///
/// plus / minus: the four mixtures of |a>, |b>, |cd+->, |e> with eigenvalues
/// -1 -+ sqrt((2 +- sqrt2)/N), followed by the remaining bridge vector
/// |cd-+> with its H0 eigenvalue. `w` is ignored for the critical variants
/// (the weight is w_+ or w_- by definition).
std::vector<EigenPair> asymptotic_eigensystem(WeightClass variant, std::size_t n, double alpha, double w = 1.0);

/// p_a = sin^2(sqrt(2/N) t)/2, p_b = cos^2(sqrt(2/N) t)/2, p_c = p_d = 0,
/// p_e = 1/2.
ClassProbabilities noncritical_probabilities(std::size_t n, double t);

/// Closed-form class probabilities for w = w_-.
ClassProbabilities wminus_probabilities(std::size_t n, double t);

/// Closed-form state for w = w_- with the global phase e^{it} removed.
ComplexVector<double> wminus_amplitudes(std::size_t n, double t);

/// Asymptotic state at a critical weight, obtained by expanding
/// (|b> + |e>)/sqrt2 over the normalized critical eigenvectors and evolving
/// each with its eigenvalue. The common phase e^{it} is removed.
ComplexVector<double> critical_asymptotic_state(WeightClass variant, std::size_t n, double t);

/// p_a + p_b at w = w_+ in closed form.
double wplus_ab_probability(std::size_t n, double t);

/// k pi sqrt(N) / (sqrt(2+sqrt2) + sqrt(2-sqrt2)); k = 5 is the global
/// maximum of p_a for w = w_-, k = 1 and 3 the earlier local maxima.
double wminus_runtime(std::size_t n, int k = 5);

/// Second stage at a noncritical weight. p_a(t1 + dt) oscillates as
/// amplitude * sin^2(sqrt(2/N) dt + phase).
struct FocusStage
{
	std::array<std::complex<double>, 5> coefficients{}; ///< on the noncritical eigenvectors
	double amplitude = 0.0;
	double phase = 0.0;    ///< in [0, pi)
	double duration = 0.0; ///< tau of the first maximum after the switch, in (0, pi/sqrt2]
};

FocusStage focus_stage(const ComplexVector<double>& stage_one_state);

enum class PlanVariant
{
	wplus_two_stage, ///< w_+ until p_ab peaks, then a noncritical weight
	wminus_abc,      ///< w_- until the marked clique peaks
	wminus_ab        ///< w_- until p_a + p_b peaks
};

const char* to_string(PlanVariant v);

/// All times are tau = t / sqrt(N).
struct StagePlan
{
	PlanVariant variant{};
	double t1 = 0.0;
	double t2 = 0.0;
	double total = 0.0;
	double p_final = 0.0;
	double p_a_t1 = 0.0;
	double p_ab_t1 = 0.0;
	double p_abc_t1 = 0.0;
	FocusStage focus;
	ComplexVector<double> stage_one_state; ///< class basis, global phase removed
};

StagePlan two_stage_plan(PlanVariant variant);

inline StagePlan wminus_two_stage(bool maximize_marked_clique)
{
	return two_stage_plan(maximize_marked_clique ? PlanVariant::wminus_abc : PlanVariant::wminus_ab);
}

struct WPlusConstants
{
	double t_single = 0.0; ///< tau of the global p_a maximum, single stage
	double p_single = 0.0;
	double t1 = 0.0;
	double t2 = 0.0;
	double total = 0.0;
	double p_final = 0.0;
};

WPlusConstants wplus_constants();

/// Single-stage prediction (tau, probability) for each weight class.
struct SingleStagePrediction
{
	double tau = 0.0;
	double probability = 0.0;
};

SingleStagePrediction single_stage_prediction(WeightClass cls);

} // namespace qwalk
