#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/search.hpp"

namespace qwalk::cli
{

/// Exit codes.
constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

class ConfigError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

struct RunConfig
{
	std::size_t n = 1200;
	double alpha = 4.0;
	std::string weight = "1"; ///< number, "wplus" or "wminus"
	std::string gamma = "critical";
	std::optional<double> t_max; ///< default 9 sqrt(N)
	std::optional<double> dt;    ///< default sqrt(N) / 2000
	Engine engine = Engine::reduced;
	std::optional<std::string> stage2_weight;
	std::optional<std::string> stage2_rule; ///< abc-peak, ab-peak or at:<time>
	std::string format = "csv";
	std::string out; ///< empty: standard output
};

double parse_number(const std::string& text, const std::string& what);
double resolve_weight(const std::string& text, std::size_t n, double alpha);
double resolve_gamma(const std::string& text, std::size_t n);

struct Simulation
{
	ProbabilitySeries series;
	double weight = 0.0;
	double gamma = 0.0;
	double t_max = 0.0;
	double dt = 0.0;
	std::optional<double> stage2_weight;
	std::optional<double> switch_time;
	Peak peak; ///< p_a, after the switch when there is one
};

Simulation simulate(const RunConfig& config);

std::string series_csv(const ProbabilitySeries& series);
std::string series_json(const RunConfig& config, const Simulation& sim);
std::string summary_line(const Simulation& sim);

/// n / denominator as a reduced fraction when the denominator is an
/// integer, otherwise a decimal.
std::string exact_quotient(std::size_t n, double denominator);

std::string predict_report(std::size_t n, const std::vector<double>& alphas);

struct SweepRow
{
	std::size_t n = 0;
	double alpha = 0.0;
	double weight = 0.0;
	Peak peak;
};

/// Every combination of the lists, n outermost and weight innermost.
std::vector<SweepRow> sweep(const std::vector<std::size_t>& ns, const std::vector<double>& alphas,
                            const std::vector<std::string>& weights, const RunConfig& base,
                            unsigned workers = 0);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Writes through a temporary file in the same directory and renames it
/// into place.
void write_file_atomic(const std::string& path, const std::string& contents);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qwalk::cli
