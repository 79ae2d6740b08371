#include "qwalk/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

namespace qwalk
{

namespace
{

using std::numbers::pi;
using std::numbers::sqrt2;

const double upper = std::sqrt(2.0 + sqrt2); // sqrt(2 + sqrt2)
const double lower = std::sqrt(2.0 - sqrt2); // sqrt(2 - sqrt2)

/// Scan window for "the relevant maximum": every constant in play lies
/// below 8 sqrt(N).
constexpr double scan_end = 8.0;
constexpr double scan_step = 1e-3;

double root_n(std::size_t n)
{
	return std::sqrt(static_cast<double>(n));
}

template <typename F>
double scan_argmax(F&& f, double lo, double hi)
{
	double best_x = lo;
	double best_f = f(lo);
	const auto steps = static_cast<int>(std::ceil((hi - lo) / scan_step));
	for(int k = 1; k <= steps; ++k)
	{
		const double x = std::min(hi, lo + k * scan_step);
		const double v = f(x);
		if(v > best_f)
		{
			best_f = v;
			best_x = x;
		}
	}
	return best_x;
}

/// Brent's method (golden section with parabolic steps) around a scanned
/// maximum.
template <typename F>
std::pair<double, double> refine_max(F&& f, double center)
{
	const double lo = std::max(0.0, center - scan_step);
	const double hi = center + scan_step;
	std::uintmax_t iterations = 200;
	const auto [x, neg] = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, lo, hi,
	                                                            std::numeric_limits<double>::digits / 2 + 1,
	                                                            iterations);
	if(iterations >= 200)
	{
		throw NumericalError("maximization did not converge");
	}
	return {x, -neg};
}

template <typename F>
double bisect_root(F&& f, double lo, double hi)
{
	try
	{
		std::uintmax_t iterations = 200;
		const auto [a, b] = boost::math::tools::bisect(
		    f, lo, hi, [](double x, double y) { return std::abs(y - x) <= 1e-12; }, iterations);
		return 0.5 * (a + b);
	}
	catch(const boost::math::evaluation_error& e)
	{
		throw NumericalError(fmt::format("root bracket [{}, {}] failed: {}", lo, hi, e.what()));
	}
}

ClassProbabilities to_class_probabilities(const ComplexVector<double>& psi)
{
	ClassProbabilities p;
	for(std::size_t k = 0; k < vertex_class_count; ++k)
	{
		p.values[k] = std::norm(psi(static_cast<Eigen::Index>(k)));
	}
	return p;
}

Vector<double> class_vector(double a, double b, double c, double d, double e)
{
	Vector<double> v(5);
	v << a, b, c, d, e;
	return v;
}

// Closed-form w_- state in tau, global phase removed.
ComplexVector<double> wminus_state_tau(double tau)
{
	using namespace std::complex_literals;
	const double x = upper * tau;
	const double y = lower * tau;
	const double k = 1.0 / (2.0 * sqrt2);
	const std::complex<double> a = 1i * k * (lower * std::sin(x) + upper * std::sin(y));
	const std::complex<double> b = k * (std::cos(x) + std::cos(y));
	const std::complex<double> cd = 1i * k * (lower * std::sin(x) - upper * std::sin(y));
	const std::complex<double> e = 0.25 * ((sqrt2 - 2.0) * std::cos(x) + (2.0 + sqrt2) * std::cos(y));

	ComplexVector<double> psi(5);
	psi << a, b, cd / sqrt2, -cd / sqrt2, e;
	return psi;
}

ClassProbabilities wminus_probabilities_tau(double tau)
{
	const double x = upper * tau;
	const double y = lower * tau;
	auto sq = [](double v) { return v * v; };
	ClassProbabilities p;
	p.values = {
	    sq(lower * std::sin(x) + upper * std::sin(y)) / 8.0,
	    sq(std::cos(x) + std::cos(y)) / 8.0,
	    sq(lower * std::sin(x) - upper * std::sin(y)) / 16.0,
	    sq(lower * std::sin(x) - upper * std::sin(y)) / 16.0,
	    sq((sqrt2 - 2.0) * std::cos(x) + (2.0 + sqrt2) * std::cos(y)) / 16.0,
	};
	return p;
}

/// Critical eigenvectors over (a, b, cd, e), unnormalized, with their
/// eigenvalue offsets in units of 1/sqrt(N).
struct CriticalBasis
{
	std::array<std::array<double, 4>, 4> vectors;
	std::array<double, 4> offsets;
};

CriticalBasis critical_basis(double sign)
{
	CriticalBasis basis{};
	basis.vectors = {{
	    {upper, 1.0 + sqrt2, upper, sign},
	    {-lower, 1.0 - sqrt2, lower, sign},
	    {lower, 1.0 - sqrt2, -lower, sign},
	    {-upper, 1.0 + sqrt2, -upper, sign},
	}};
	basis.offsets = {-upper, -lower, lower, upper};
	for(auto& v : basis.vectors)
	{
		const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
		for(double& x : v)
		{
			x /= norm;
		}
	}
	return basis;
}

double bridge_sign(WeightClass variant)
{
	switch(variant)
	{
	case WeightClass::plus: return 1.0;
	case WeightClass::minus: return -1.0;
	default: throw std::invalid_argument("critical variant required");
	}
}

ComplexVector<double> critical_state_tau(WeightClass variant, double tau)
{
	const double sign = bridge_sign(variant);
	const CriticalBasis basis = critical_basis(sign);

	// (|b> + |e>)/sqrt2 in (a, b, cd, e) coordinates.
	const std::array<double, 4> start{0.0, 1.0 / sqrt2, 0.0, 1.0 / sqrt2};

	std::array<std::complex<double>, 4> amp{};
	for(std::size_t k = 0; k < 4; ++k)
	{
		double overlap = 0.0;
		for(std::size_t j = 0; j < 4; ++j)
		{
			overlap += basis.vectors[k][j] * start[j];
		}
		const std::complex<double> phase = std::polar(1.0, -basis.offsets[k] * tau);
		for(std::size_t j = 0; j < 4; ++j)
		{
			amp[j] += overlap * phase * basis.vectors[k][j];
		}
	}

	ComplexVector<double> psi(5);
	psi << amp[0], amp[1], amp[2] / sqrt2, sign * amp[2] / sqrt2, amp[3];
	return psi;
}

double wplus_ab_tau(double tau)
{
	const double x = upper * tau;
	const double y = lower * tau;
	const double s = upper * std::sin(x) - lower * std::sin(y);
	const double c = (1.0 + sqrt2) * std::cos(x) + (1.0 - sqrt2) * std::cos(y);
	return (s * s + c * c) / 8.0;
}

} // namespace

CriticalParams critical_params(std::size_t n, double alpha)
{
	const double big_n = static_cast<double>(n);
	CriticalParams p;
	p.gamma_c = critical_gamma(n);
	if(alpha != 0.0)
	{
		p.w_plus = big_n / (2.0 * alpha);
	}
	if(alpha != 2.0)
	{
		p.w_minus = big_n / (2.0 * (alpha - 2.0));
	}
	return p;
}

const char* to_string(WeightClass cls)
{
	switch(cls)
	{
	case WeightClass::noncritical: return "noncritical";
	case WeightClass::plus: return "plus";
	case WeightClass::minus: return "minus";
	}
	return "?";
}

WeightClass classify_weight(std::size_t n, double alpha, double w, double rel_eps)
{
	const CriticalParams p = critical_params(n, alpha);
	auto near = [&](const std::optional<double>& target) {
		return target && std::abs(w - *target) <= rel_eps * std::abs(*target);
	};
	if(near(p.w_plus))
	{
		return WeightClass::plus;
	}
	if(near(p.w_minus))
	{
		return WeightClass::minus;
	}
	return WeightClass::noncritical;
}

Matrix<double> leading_order_hamiltonian(std::size_t n, double alpha, double w, double gamma)
{
	const double half = static_cast<double>(n) / 2.0;
	Matrix<double> h = Matrix<double>::Zero(5, 5);
	h(0, 0) = -1.0;
	h(1, 1) = -gamma * half;
	h(2, 2) = -gamma * (alpha - 1.0) * w;
	h(2, 3) = -gamma * w;
	h(3, 2) = -gamma * w;
	h(3, 3) = -gamma * (alpha - 1.0) * w;
	h(4, 4) = -gamma * half;
	return h;
}

Matrix<double> first_order_correction(std::size_t n, double gamma)
{
	const double s = -gamma * std::sqrt(static_cast<double>(n) / 2.0);
	Matrix<double> h = Matrix<double>::Zero(5, 5);
	h(0, 1) = h(1, 0) = s;
	h(1, 2) = h(2, 1) = s;
	h(3, 4) = h(4, 3) = s;
	return h;
}

std::vector<EigenPair> leading_order_eigensystem(std::size_t n, double alpha, double w, double gamma)
{
	const double half = static_cast<double>(n) / 2.0;
	const double r = 1.0 / sqrt2;
	return {
	    {"a", class_vector(1, 0, 0, 0, 0), -1.0},
	    {"b", class_vector(0, 1, 0, 0, 0), -gamma * half},
	    {"cd+", class_vector(0, 0, r, r, 0), -alpha * gamma * w},
	    {"cd-", class_vector(0, 0, r, -r, 0), -(alpha - 2.0) * gamma * w},
	    {"e", class_vector(0, 0, 0, 0, 1), -gamma * half},
	};
}

std::size_t degenerate_count(std::size_t n, double alpha, double w, double tol)
{
	std::size_t count = 0;
	for(const EigenPair& p : leading_order_eigensystem(n, alpha, w, critical_gamma(n)))
	{
		if(std::abs(p.value + 1.0) <= tol)
		{
			++count;
		}
	}
	return count;
}

std::vector<EigenPair> asymptotic_eigensystem(WeightClass variant, std::size_t n, double alpha, double w)
{
	const double big_n = static_cast<double>(n);
	const double r = 1.0 / sqrt2;

	if(variant == WeightClass::noncritical)
	{
		const double split = std::sqrt(2.0 / big_n);
		return {
		    {"psi0", class_vector(r, r, 0, 0, 0), -1.0 - split},
		    {"psi1", class_vector(0, 0, 0, 0, 1), -1.0},
		    {"psi2", class_vector(r, -r, 0, 0, 0), -1.0 + split},
		    {"psi3", class_vector(0, 0, r, r, 0), -2.0 * alpha * w / big_n},
		    {"psi4", class_vector(0, 0, r, -r, 0), -2.0 * (alpha - 2.0) * w / big_n},
		};
	}

	const double sign = bridge_sign(variant);
	const CriticalBasis basis = critical_basis(sign);
	const std::string prefix = variant == WeightClass::plus ? "psi+," : "psi-,";

	std::vector<EigenPair> out;
	for(std::size_t k = 0; k < 4; ++k)
	{
		const auto& v = basis.vectors[k];
		out.push_back({prefix + std::to_string(k), class_vector(v[0], v[1], v[2] * r, sign * v[2] * r, v[3]),
		               -1.0 + basis.offsets[k] / std::sqrt(big_n)});
	}

	// The other bridge combination stays an H0 eigenvector.
	const CriticalParams params = critical_params(n, alpha);
	if(variant == WeightClass::plus)
	{
		if(!params.w_plus)
		{
			throw std::invalid_argument("w_+ does not exist for alpha = 0");
		}
		out.push_back({"cd-", class_vector(0, 0, r, -r, 0), -(alpha - 2.0) * critical_gamma(n) * *params.w_plus});
	}
	else
	{
		if(!params.w_minus)
		{
			throw std::invalid_argument("w_- does not exist for alpha = 2");
		}
		out.push_back({"cd+", class_vector(0, 0, r, r, 0), -alpha * critical_gamma(n) * *params.w_minus});
	}
	return out;
}

ClassProbabilities noncritical_probabilities(std::size_t n, double t)
{
	const double s = std::sin(std::sqrt(2.0 / static_cast<double>(n)) * t);
	ClassProbabilities p;
	p.values = {0.5 * s * s, 0.5 * (1.0 - s * s), 0.0, 0.0, 0.5};
	return p;
}

ClassProbabilities wminus_probabilities(std::size_t n, double t)
{
	return wminus_probabilities_tau(t / root_n(n));
}

ComplexVector<double> wminus_amplitudes(std::size_t n, double t)
{
	return wminus_state_tau(t / root_n(n));
}

ComplexVector<double> critical_asymptotic_state(WeightClass variant, std::size_t n, double t)
{
	return critical_state_tau(variant, t / root_n(n));
}

double wplus_ab_probability(std::size_t n, double t)
{
	return wplus_ab_tau(t / root_n(n));
}

double wminus_runtime(std::size_t n, int k)
{
	return k * pi * root_n(n) / (upper + lower);
}

FocusStage focus_stage(const ComplexVector<double>& psi)
{
	if(psi.size() != 5)
	{
		throw std::invalid_argument("focus_stage needs a class-basis state");
	}
	FocusStage out;
	// Noncritical eigenvector overlaps, in psi0..psi4 order.
	out.coefficients = {
	    (psi(0) + psi(1)) / sqrt2, psi(4), (psi(0) - psi(1)) / sqrt2, (psi(2) + psi(3)) / sqrt2,
	    (psi(2) - psi(3)) / sqrt2,
	};

	// Dropping the common e^{i dt}, the a amplitude is
	// (c0 e^{ix} + c2 e^{-ix}) / sqrt2 with x = sqrt(2/N) dt, so
	// p_a = (|c0|^2 + |c2|^2)/2 + Re(c0 conj(c2) e^{2ix}).
	const std::complex<double> c0 = out.coefficients[0];
	const std::complex<double> c2 = out.coefficients[2];
	const double beta = std::arg(c0 * std::conj(c2));
	const double m = std::abs(c0) + std::abs(c2);
	out.amplitude = 0.5 * m * m;
	out.phase = std::fmod(beta / 2.0 + pi / 2.0 + 2.0 * pi, pi);

	double x = std::fmod(-beta / 2.0 + 2.0 * pi, pi);
	if(x < 1e-9)
	{
		// Already at a maximum: the next one is a full period later.
		x = pi;
	}
	out.duration = x / sqrt2;
	return out;
}

const char* to_string(PlanVariant v)
{
	switch(v)
	{
	case PlanVariant::wplus_two_stage: return "wplus-two-stage";
	case PlanVariant::wminus_abc: return "wminus-abc";
	case PlanVariant::wminus_ab: return "wminus-ab";
	}
	return "?";
}

StagePlan two_stage_plan(PlanVariant variant)
{
	StagePlan plan;
	plan.variant = variant;

	switch(variant)
	{
	case PlanVariant::wplus_two_stage:
	{
		auto p_ab = [](double tau) { return to_class_probabilities(critical_state_tau(WeightClass::plus, tau)).ab(); };
		const double guess = scan_argmax(p_ab, 0.0, scan_end);
		// p_ab' vanishes where sqrt(2+sqrt2) sin(sqrt(2+sqrt2) tau) +
		// sqrt(2-sqrt2) sin(sqrt(2-sqrt2) tau) does.
		auto condition = [](double tau) { return upper * std::sin(upper * tau) + lower * std::sin(lower * tau); };
		plan.t1 = bisect_root(condition, guess - 2.0 * scan_step, guess + 2.0 * scan_step);
		plan.stage_one_state = critical_state_tau(WeightClass::plus, plan.t1);
		break;
	}
	case PlanVariant::wminus_abc:
	{
		auto p_abc = [](double tau) { return wminus_probabilities_tau(tau).abc(); };
		plan.t1 = refine_max(p_abc, scan_argmax(p_abc, 0.0, scan_end)).first;
		plan.stage_one_state = wminus_state_tau(plan.t1);
		break;
	}
	case PlanVariant::wminus_ab:
		plan.t1 = wminus_runtime(1);
		plan.stage_one_state = wminus_state_tau(plan.t1);
		break;
	}

	const ClassProbabilities p = to_class_probabilities(plan.stage_one_state);
	plan.p_a_t1 = p[VertexClass::a];
	plan.p_ab_t1 = p.ab();
	plan.p_abc_t1 = p.abc();
	plan.focus = focus_stage(plan.stage_one_state);
	plan.t2 = plan.focus.duration;
	plan.total = plan.t1 + plan.t2;
	plan.p_final = plan.focus.amplitude;
	return plan;
}

WPlusConstants wplus_constants()
{
	auto p_a = [](double tau) { return std::norm(critical_state_tau(WeightClass::plus, tau)(0)); };
	const auto [t_single, p_single] = refine_max(p_a, scan_argmax(p_a, 0.0, scan_end));
	const StagePlan plan = two_stage_plan(PlanVariant::wplus_two_stage);
	return {t_single, p_single, plan.t1, plan.t2, plan.total, plan.p_final};
}

SingleStagePrediction single_stage_prediction(WeightClass cls)
{
	switch(cls)
	{
	case WeightClass::noncritical: return {pi / (2.0 * sqrt2), 0.5};
	case WeightClass::plus:
	{
		const WPlusConstants c = wplus_constants();
		return {c.t_single, c.p_single};
	}
	case WeightClass::minus:
	{
		const double tau = wminus_runtime(1);
		return {tau, wminus_probabilities_tau(tau)[VertexClass::a]};
	}
	}
	throw std::invalid_argument("unknown weight class");
}

} // namespace qwalk
