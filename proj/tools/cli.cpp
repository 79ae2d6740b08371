#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "qwalk/analysis.hpp"
#include "qwalk/spin.hpp"
#include "qwalk/tolerance.hpp"

namespace qwalk::cli
{

namespace
{

constexpr double max_samples = 5e7;

std::vector<std::string> split(const std::string& text, char sep)
{
	std::vector<std::string> parts;
	std::size_t start = 0;
	while(true)
	{
		const std::size_t pos = text.find(sep, start);
		parts.push_back(text.substr(start, pos - start));
		if(pos == std::string::npos)
		{
			return parts;
		}
		start = pos + 1;
	}
}

void check_size(std::size_t n)
{
	try
	{
		validate(BarbellSpec{n, 1.0});
	}
	catch(const std::invalid_argument& e)
	{
		throw ConfigError(e.what());
	}
}

Engine parse_engine(const std::string& text)
{
	if(text == "reduced")
	{
		return Engine::reduced;
	}
	if(text == "full")
	{
		return Engine::full;
	}
	throw ConfigError(fmt::format("unknown engine '{}' (reduced or full)", text));
}

const char* to_string(Engine e)
{
	return e == Engine::reduced ? "reduced" : "full";
}

std::string fixed_width(const std::string& s, std::size_t width)
{
	return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

} // namespace

double parse_number(const std::string& text, const std::string& what)
{
	double value = 0.0;
	const char* first = text.data();
	const char* last = first + text.size();
	if(!text.empty() && *first == '+')
	{
		++first;
	}
	const auto [ptr, ec] = std::from_chars(first, last, value);
	if(text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value))
	{
		throw ConfigError(fmt::format("{}: '{}' is not a finite number", what, text));
	}
	return value;
}

double resolve_weight(const std::string& text, std::size_t n, double alpha)
{
	if(text == "wplus" || text == "wminus")
	{
		const CriticalParams p = critical_params(n, alpha);
		const auto& w = text == "wplus" ? p.w_plus : p.w_minus;
		if(!w)
		{
			throw ConfigError(fmt::format("{} is undefined for alpha = {}", text, alpha));
		}
		return *w;
	}
	const double w = parse_number(text, "weight");
	if(w == 0.0)
	{
		throw ConfigError("bridge weight must be nonzero");
	}
	return w;
}

double resolve_gamma(const std::string& text, std::size_t n)
{
	if(text == "critical")
	{
		return critical_gamma(n);
	}
	return parse_number(text, "gamma");
}

Simulation simulate(const RunConfig& config)
{
	check_size(config.n);
	if(config.stage2_weight.has_value() != config.stage2_rule.has_value())
	{
		throw ConfigError("--stage2-weight and --stage2-rule go together");
	}

	Simulation sim;
	const double root = std::sqrt(static_cast<double>(config.n));
	sim.weight = resolve_weight(config.weight, config.n, config.alpha);
	sim.gamma = resolve_gamma(config.gamma, config.n);
	sim.t_max = config.t_max.value_or(9.0 * root);
	sim.dt = config.dt.value_or(default_time_step(config.n));
	if(!(sim.t_max > 0.0) || !(sim.dt > 0.0))
	{
		throw ConfigError("t_max and dt must be positive");
	}
	if(sim.t_max / sim.dt > max_samples)
	{
		throw ConfigError(fmt::format("t_max / dt exceeds {} samples", max_samples));
	}

	const SearchProblem problem{config.n, config.alpha, sim.gamma, config.engine};
	const std::vector<double> grid = time_grid(sim.t_max, sim.dt);

	Schedule schedule = Schedule::constant(sim.weight);
	if(config.stage2_weight)
	{
		sim.stage2_weight = resolve_weight(*config.stage2_weight, config.n, config.alpha);
		const std::string& rule = *config.stage2_rule;
		if(rule == "abc-peak" || rule == "ab-peak")
		{
			const ProbabilitySeries first = run_schedule(problem, schedule, grid);
			sim.switch_time = peak(first, rule == "abc-peak" ? Observable::p_abc : Observable::p_ab).time;
		}
		else if(rule.starts_with("at:"))
		{
			sim.switch_time = parse_number(rule.substr(3), "switch time");
			if(*sim.switch_time < 0.0)
			{
				throw ConfigError("switch time must be nonnegative");
			}
		}
		else
		{
			throw ConfigError(fmt::format("unknown stage-2 rule '{}' (abc-peak, ab-peak or at:<time>)", rule));
		}
		schedule = Schedule::two_stage(sim.weight, *sim.switch_time, *sim.stage2_weight);
	}

	sim.series = run_schedule(problem, schedule, grid);
	sim.peak = peak(sim.series, Observable::p_a, Window{sim.switch_time.value_or(0.0)});
	return sim;
}

std::string series_csv(const ProbabilitySeries& series)
{
	std::string text = "time,p_a,p_b,p_c,p_d,p_e,p_abc,p_ab\n";
	auto out = std::back_inserter(text);
	for(std::size_t k = 0; k < series.size(); ++k)
	{
		fmt::format_to(out, "{:.17g}", series.times[k]);
		for(const auto& column : series.by_class)
		{
			fmt::format_to(out, ",{:.17g}", column[k]);
		}
		fmt::format_to(out, ",{:.17g},{:.17g}\n", series.abc[k], series.ab[k]);
	}
	return text;
}

std::string series_json(const RunConfig& config, const Simulation& sim)
{
	nlohmann::ordered_json doc;
	doc["time"] = sim.series.times;
	for(std::size_t k = 0; k < vertex_class_count; ++k)
	{
		doc[fmt::format("p_{}", to_string(static_cast<VertexClass>(k)))] = sim.series.by_class[k];
	}
	doc["p_abc"] = sim.series.abc;
	doc["p_ab"] = sim.series.ab;

	nlohmann::ordered_json cfg;
	cfg["n"] = config.n;
	cfg["alpha"] = config.alpha;
	cfg["weight"] = config.weight;
	cfg["weight_value"] = sim.weight;
	cfg["gamma"] = config.gamma;
	cfg["gamma_value"] = sim.gamma;
	cfg["t_max"] = sim.t_max;
	cfg["dt"] = sim.dt;
	cfg["engine"] = to_string(config.engine);
	if(sim.stage2_weight)
	{
		cfg["stage2_weight"] = *config.stage2_weight;
		cfg["stage2_weight_value"] = *sim.stage2_weight;
		cfg["stage2_rule"] = *config.stage2_rule;
		cfg["switch_time"] = *sim.switch_time;
	}

	doc["metadata"]["config"] = cfg;
	doc["metadata"]["peak"] = {{"observable", "p_a"}, {"time", sim.peak.time}, {"value", sim.peak.value}};
	return doc.dump(1) + "\n";
}

std::string summary_line(const Simulation& sim)
{
	std::string line = fmt::format("peak p_a = {:.6f} at t = {:.4f}", sim.peak.value, sim.peak.time);
	if(sim.switch_time)
	{
		line += fmt::format(" (switch to w = {} at t = {:.4f})", *sim.stage2_weight, *sim.switch_time);
	}
	return line;
}

std::string exact_quotient(std::size_t n, double denominator)
{
	if(denominator == 0.0)
	{
		return "undefined";
	}
	if(denominator == std::round(denominator) && std::abs(denominator) < 1e15)
	{
		auto num = static_cast<long long>(n);
		auto den = std::llround(denominator);
		const long long g = std::gcd(num, den);
		num /= g;
		den /= g;
		if(den < 0)
		{
			num = -num;
			den = -den;
		}
		return den == 1 ? std::to_string(num) : fmt::format("{}/{}", num, den);
	}
	return fmt::format("{:.17g}", static_cast<double>(n) / denominator);
}

std::string predict_report(std::size_t n, const std::vector<double>& alphas)
{
	check_size(n);
	const double root = std::sqrt(static_cast<double>(n));
	std::string text;
	auto out = std::back_inserter(text);

	fmt::format_to(out, "N = {}\ngamma_c = {}\n\n", n, exact_quotient(2, static_cast<double>(n)));

	fmt::format_to(out, "{}{}{}\n", fixed_width("alpha", 8), fixed_width("w_plus", 12), "w_minus");
	for(double alpha : alphas)
	{
		fmt::format_to(out, "{}{}{}\n", fixed_width(fmt::format("{:g}", alpha), 8),
		               fixed_width(exact_quotient(n, 2.0 * alpha), 12), exact_quotient(n, 2.0 * (alpha - 2.0)));
	}

	fmt::format_to(out, "\nsingle stage (t = tau sqrt(N))\n");
	fmt::format_to(out, "{}{}{}{}\n", fixed_width("weight", 13), fixed_width("tau", 11), fixed_width("t", 11), "p_a");
	for(WeightClass cls : {WeightClass::noncritical, WeightClass::plus, WeightClass::minus})
	{
		const SingleStagePrediction p = single_stage_prediction(cls);
		fmt::format_to(out, "{}{}{}{:.6f}\n", fixed_width(to_string(cls), 13), fixed_width(fmt::format("{:.6f}", p.tau), 11),
		               fixed_width(fmt::format("{:.4f}", p.tau * root), 11), p.probability);
	}

	fmt::format_to(out, "\ntwo stage (tau)\n");
	fmt::format_to(out, "{}{}{}{}{}{}{}{}\n", fixed_width("plan", 17), fixed_width("t1", 10), fixed_width("t2", 10),
	               fixed_width("total", 10), fixed_width("p_a(t1)", 10), fixed_width("p_ab(t1)", 10),
	               fixed_width("p_abc(t1)", 11), "p_final");
	for(PlanVariant v : {PlanVariant::wplus_two_stage, PlanVariant::wminus_abc, PlanVariant::wminus_ab})
	{
		const StagePlan p = two_stage_plan(v);
		auto num = [](double x) { return fixed_width(fmt::format("{:.6f}", x), 10); };
		fmt::format_to(out, "{}{}{}{}{}{}{} {:.6f}\n", fixed_width(to_string(v), 17), num(p.t1), num(p.t2), num(p.total),
		               num(p.p_a_t1), num(p.p_ab_t1), num(p.p_abc_t1), p.p_final);
	}
	return text;
}

std::vector<SweepRow> sweep(const std::vector<std::size_t>& ns, const std::vector<double>& alphas,
                            const std::vector<std::string>& weights, const RunConfig& base, unsigned workers)
{
	if(ns.empty() || alphas.empty() || weights.empty())
	{
		throw ConfigError("sweep grid is empty");
	}

	std::vector<RunConfig> points;
	std::vector<SweepRow> rows;
	for(std::size_t n : ns)
	{
		for(double alpha : alphas)
		{
			for(const std::string& w : weights)
			{
				RunConfig cfg = base;
				cfg.n = n;
				cfg.alpha = alpha;
				cfg.weight = w;
				cfg.stage2_weight.reset();
				cfg.stage2_rule.reset();
				check_size(n);
				rows.push_back({n, alpha, resolve_weight(w, n, alpha), {}});
				points.push_back(std::move(cfg));
			}
		}
	}

	std::vector<std::exception_ptr> errors(points.size());
	std::atomic<std::size_t> next{0};
	auto work = [&] {
		for(std::size_t k = next++; k < points.size(); k = next++)
		{
			try
			{
				rows[k].peak = simulate(points[k]).peak;
			}
			catch(...)
			{
				errors[k] = std::current_exception();
			}
		}
	};

	if(workers == 0)
	{
		workers = std::max(1u, std::thread::hardware_concurrency());
	}
	workers = static_cast<unsigned>(std::min<std::size_t>(workers, points.size()));
	{
		std::vector<std::jthread> pool;
		for(unsigned k = 1; k < workers; ++k)
		{
			pool.emplace_back(work);
		}
		work();
	}

	for(const auto& e : errors)
	{
		if(e)
		{
			std::rethrow_exception(e);
		}
	}
	return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
	std::string text = "n,alpha,weight,peak_time,peak_p_a\n";
	for(const SweepRow& r : rows)
	{
		text += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.n, r.alpha, r.weight, r.peak.time, r.peak.value);
	}
	return text;
}

void write_file_atomic(const std::string& path, const std::string& contents)
{
	namespace fs = std::filesystem;
	const fs::path target(path);
	fs::path temp = target;
	temp += ".partial";
	{
		std::ofstream os(temp, std::ios::binary | std::ios::trunc);
		if(!os)
		{
			throw ConfigError(fmt::format("cannot write {}", path));
		}
		os << contents;
		os.close();
		if(!os)
		{
			std::error_code ignored;
			fs::remove(temp, ignored);
			throw ConfigError(fmt::format("cannot write {}", path));
		}
	}
	std::error_code ec;
	fs::rename(temp, target, ec);
	if(ec)
	{
		fs::remove(temp, ec);
		throw ConfigError(fmt::format("cannot move output into place at {}", path));
	}
}

namespace
{

struct SpinOptions
{
	std::string graph;
	std::string builtin;
	double alpha = 0.0;
	std::string gamma = "1";
	std::optional<std::size_t> marked;
	double perturb = 0.0;
	std::uint64_t seed = 1;
	std::vector<double> weights;
};

std::array<double, 4> random_signed_weights(std::uint64_t seed)
{
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> magnitude(0.2, 2.0);
	std::bernoulli_distribution negative(0.5);
	std::array<double, 4> w{};
	for(double& x : w)
	{
		x = magnitude(rng);
		if(negative(rng))
		{
			x = -x;
		}
	}
	return w;
}

SignedWeightedGraph spin_graph(const SpinOptions& o)
{
	if(o.graph.empty() == o.builtin.empty())
	{
		throw ConfigError("give exactly one of --graph and --builtin");
	}
	try
	{
		if(!o.graph.empty())
		{
			return read_graph_file(o.graph);
		}
		if(o.builtin == "paw" || o.builtin == "fig2")
		{
			std::array<double, 4> w = random_signed_weights(o.seed);
			if(!o.weights.empty())
			{
				if(o.weights.size() != 4)
				{
					throw ConfigError("--weights needs four values");
				}
				std::copy(o.weights.begin(), o.weights.end(), w.begin());
			}
			return paw_graph(w);
		}
		if(o.builtin.starts_with("barbell:"))
		{
			const auto parts = split(o.builtin.substr(8), ',');
			if(parts.size() != 2)
			{
				throw ConfigError("barbell builtin is barbell:<n>,<w>");
			}
			const double n = parse_number(parts[0], "barbell size");
			if(n < 0.0 || n != std::floor(n))
			{
				throw ConfigError("barbell size must be a nonnegative integer");
			}
			return build_barbell({static_cast<std::size_t>(n), parse_number(parts[1], "barbell weight")});
		}
	}
	catch(const std::invalid_argument& e)
	{
		throw ConfigError(e.what());
	}
	throw ConfigError(fmt::format("unknown builtin graph '{}'", o.builtin));
}

int verify_spin(const SpinOptions& o, std::ostream& out)
{
	const SignedWeightedGraph g = spin_graph(o);
	if(g.size() > max_spins)
	{
		throw ConfigError(fmt::format("{} spins exceed the dense limit of {}", g.size(), max_spins));
	}
	if(o.marked && *o.marked >= g.size())
	{
		throw ConfigError("marked vertex outside the graph");
	}
	const double gamma = resolve_gamma(o.gamma, g.size());
	const EquivalenceReport r = verify_walk_equivalence(g, o.alpha, gamma, o.marked, o.perturb);
	constexpr double threshold = 1e-12;
	const bool pass = r.max_deviation <= threshold;
	out << fmt::format("spins: {}\nedges: {}\nmax deviation: {:.3e}\nidentity offset: {:.17g}\nresult: {} (threshold {:g})\n",
	                   g.size(), g.edges().size(), r.max_deviation, r.identity_offset, pass ? "PASS" : "FAIL",
	                   threshold);
	return pass ? exit_ok : exit_numerical;
}

void add_run_options(CLI::App& cmd, RunConfig& cfg, std::string& engine, double& t_max, double& dt,
                     std::string& stage2_weight, std::string& stage2_rule)
{
	cmd.add_option("--alpha", cfg.alpha, "Laplacian parameter alpha")->capture_default_str();
	cmd.add_option("--gamma", cfg.gamma, "jumping rate: number or 'critical'")->capture_default_str();
	cmd.add_option("--t-max", t_max, "final time (default 9 sqrt(N))");
	cmd.add_option("--dt", dt, "time step (default sqrt(N)/2000)");
	cmd.add_option("--engine", engine, "reduced or full")->capture_default_str();
	cmd.add_option("--stage2-weight", stage2_weight, "bridge weight after the switch");
	cmd.add_option("--stage2-rule", stage2_rule, "abc-peak, ab-peak or at:<time>");
	cmd.add_option("--out", cfg.out, "output file (default standard output)");
}

bool given(const CLI::App& cmd, const std::string& name)
{
	const CLI::Option* opt = cmd.get_option_no_throw(name);
	return opt != nullptr && opt->count() > 0;
}

void finish_run_config(const CLI::App& cmd, RunConfig& cfg, const std::string& engine, double t_max, double dt,
                       const std::string& stage2_weight, const std::string& stage2_rule)
{
	cfg.engine = parse_engine(engine);
	if(given(cmd, "--t-max"))
	{
		cfg.t_max = t_max;
	}
	if(given(cmd, "--dt"))
	{
		cfg.dt = dt;
	}
	if(given(cmd, "--stage2-weight"))
	{
		cfg.stage2_weight = stage2_weight;
	}
	if(given(cmd, "--stage2-rule"))
	{
		cfg.stage2_rule = stage2_rule;
	}
}

void emit(const std::string& path, const std::string& text, std::ostream& out)
{
	if(path.empty())
	{
		out << text;
	}
	else
	{
		write_file_atomic(path, text);
	}
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Quantum walk search on weighted barbell graphs"};
	app.name("qwalk");
	app.require_subcommand(1);

	RunConfig sim_cfg;
	std::string engine = "reduced";
	double t_max = 0.0;
	double dt = 0.0;
	std::string stage2_weight;
	std::string stage2_rule;
	auto* simulate_cmd = app.add_subcommand("simulate", "evolve and write p_a ... p_ab over time");
	simulate_cmd->add_option("--n", sim_cfg.n, "number of vertices")->capture_default_str();
	simulate_cmd->add_option("--weight", sim_cfg.weight, "bridge weight: number, wplus or wminus")->capture_default_str();
	add_run_options(*simulate_cmd, sim_cfg, engine, t_max, dt, stage2_weight, stage2_rule);
	simulate_cmd->add_option("--format", sim_cfg.format, "csv or json")
	    ->check(CLI::IsMember({"csv", "json"}))
	    ->capture_default_str();

	std::size_t predict_n = 1200;
	std::vector<double> predict_alphas{-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5};
	auto* predict_cmd = app.add_subcommand("predict", "critical weights and analytic predictions");
	predict_cmd->add_option("--n", predict_n, "number of vertices")->capture_default_str();
	predict_cmd->add_option("--alpha", predict_alphas, "alpha values")->delimiter(',');

	SpinOptions spin;
	std::size_t marked = 0;
	auto* spin_cmd = app.add_subcommand("verify-spin", "check the spin network against the walk Hamiltonian");
	spin_cmd->add_option("--graph", spin.graph, "graph file");
	spin_cmd->add_option("--builtin", spin.builtin, "paw, fig2 or barbell:<n>,<w>");
	spin_cmd->add_option("--alpha", spin.alpha)->capture_default_str();
	spin_cmd->add_option("--gamma", spin.gamma, "number or 'critical'")->capture_default_str();
	spin_cmd->add_option("--marked", marked, "vertex carrying the oracle field");
	spin_cmd->add_option("--perturb", spin.perturb, "added to J_x and J_y of the first edge");
	spin_cmd->add_option("--seed", spin.seed, "seed for random paw weights")->capture_default_str();
	spin_cmd->add_option("--weights", spin.weights, "paw weights e01,e12,e13,e23")->delimiter(',');

	RunConfig sweep_cfg;
	std::string sweep_engine = "reduced";
	double sweep_t_max = 0.0;
	double sweep_dt = 0.0;
	std::string unused_weight;
	std::string unused_rule;
	std::vector<std::size_t> sweep_ns{1200};
	std::vector<double> sweep_alphas{4};
	std::vector<std::string> sweep_weights{"1"};
	unsigned threads = 0;
	auto* sweep_cmd = app.add_subcommand("sweep", "peak p_a over a grid of n, alpha and weight");
	sweep_cmd->add_option("--n", sweep_ns, "vertex counts")->delimiter(',');
	sweep_cmd->add_option("--alpha", sweep_alphas, "alpha values")->delimiter(',');
	sweep_cmd->add_option("--weight", sweep_weights, "bridge weights")->delimiter(',');
	sweep_cmd->add_option("--gamma", sweep_cfg.gamma, "jumping rate: number or 'critical'")->capture_default_str();
	sweep_cmd->add_option("--t-max", sweep_t_max, "final time (default 9 sqrt(N))");
	sweep_cmd->add_option("--dt", sweep_dt, "time step (default sqrt(N)/2000)");
	sweep_cmd->add_option("--engine", sweep_engine, "reduced or full")->capture_default_str();
	sweep_cmd->add_option("--out", sweep_cfg.out, "output file (default standard output)");
	sweep_cmd->add_option("--threads", threads, "worker threads (default: all cores)");

	try
	{
		app.parse(argc, argv);
	}
	catch(const CLI::ParseError& e)
	{
		const int code = app.exit(e, out, err);
		return code == 0 ? exit_ok : exit_config;
	}

	try
	{
		if(*simulate_cmd)
		{
			finish_run_config(*simulate_cmd, sim_cfg, engine, t_max, dt, stage2_weight, stage2_rule);
			const Simulation sim = simulate(sim_cfg);
			const std::string text = sim_cfg.format == "json" ? series_json(sim_cfg, sim) : series_csv(sim.series);
			emit(sim_cfg.out, text, out);
			(sim_cfg.out.empty() ? err : out) << summary_line(sim) << '\n';
		}
		else if(*predict_cmd)
		{
			out << predict_report(predict_n, predict_alphas);
		}
		else if(*spin_cmd)
		{
			if(spin_cmd->count("--marked"))
			{
				spin.marked = marked;
			}
			return verify_spin(spin, out);
		}
		else if(*sweep_cmd)
		{
			finish_run_config(*sweep_cmd, sweep_cfg, sweep_engine, sweep_t_max, sweep_dt, unused_weight, unused_rule);
			emit(sweep_cfg.out, sweep_csv(sweep(sweep_ns, sweep_alphas, sweep_weights, sweep_cfg, threads)), out);
		}
	}
	catch(const NumericalError& e)
	{
		err << "numerical failure: " << e.what() << '\n';
		return exit_numerical;
	}
	catch(const std::exception& e)
	{
		err << "error: " << e.what() << '\n';
		return exit_config;
	}
	return exit_ok;
}

} // namespace qwalk::cli
