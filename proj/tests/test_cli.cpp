#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "qwalk/graph.hpp"

using namespace qwalk;

namespace
{

struct Result
{
	int code;
	std::string out;
	std::string err;
};

Result run_cli(std::vector<std::string> args)
{
	args.insert(args.begin(), "qwalk");
	std::vector<const char*> argv;
	for(const auto& a : args)
	{
		argv.push_back(a.c_str());
	}
	std::ostringstream out, err;
	const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
	return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir()
{
	const auto dir = std::filesystem::temp_directory_path() / "qwalk_cli_test";
	std::filesystem::create_directories(dir);
	return dir;
}

std::string slurp(const std::filesystem::path& p)
{
	std::ifstream is(p);
	return {std::istreambuf_iterator<char>(is), {}};
}

std::vector<std::vector<double>> parse_csv(const std::string& text)
{
	std::istringstream is(text);
	std::string line;
	std::getline(is, line);
	std::vector<std::vector<double>> rows;
	while(std::getline(is, line))
	{
		std::vector<double> row;
		std::istringstream ls(line);
		std::string cell;
		while(std::getline(ls, cell, ','))
		{
			row.push_back(std::stod(cell));
		}
		rows.push_back(row);
	}
	return rows;
}

} // namespace

TEST_CASE("exact quotients")
{
	CHECK(cli::exact_quotient(1200, -14.0) == "-600/7");
	CHECK(cli::exact_quotient(1200, 8.0) == "150");
	CHECK(cli::exact_quotient(1200, -2.0) == "-600");
	CHECK(cli::exact_quotient(1200, 0.0) == "undefined");
	CHECK(cli::exact_quotient(2, 1200.0) == "1/600");
	CHECK(cli::exact_quotient(1200, 1.0) == "1200");
}

TEST_CASE("predict prints the critical weight table")
{
	const Result r = run_cli({"predict", "--n", "1200"});
	CHECK(r.code == 0);
	CHECK(r.out.find("gamma_c = 1/600") != std::string::npos);
	CHECK(r.out.find("-5      -120        -600/7") != std::string::npos);
	CHECK(r.out.find("0       undefined   -300") != std::string::npos);
	CHECK(r.out.find("1       600         -600") != std::string::npos);
	CHECK(r.out.find("2       300         undefined") != std::string::npos);
	CHECK(r.out.find("wminus-abc") != std::string::npos);
}

TEST_CASE("weights and gamma resolve symbolically")
{
	CHECK(cli::resolve_weight("wplus", 1200, 4.0) == 150.0);
	CHECK(cli::resolve_weight("wminus", 1200, -3.0) == -120.0);
	CHECK(cli::resolve_weight("-2.5", 1200, 4.0) == -2.5);
	CHECK_THROWS_AS(cli::resolve_weight("wplus", 1200, 0.0), cli::ConfigError);
	CHECK_THROWS_AS(cli::resolve_weight("12x", 1200, 0.0), cli::ConfigError);
	CHECK_THROWS_AS(cli::resolve_weight("0", 1200, 0.0), cli::ConfigError);
	CHECK(cli::resolve_gamma("critical", 1200) == 2.0 / 1200.0);
}

TEST_CASE("simulate writes the CSV series")
{
	const auto path = scratch_dir() / "series.csv";
	std::filesystem::remove(path);
	const Result r = run_cli({"simulate", "--n", "12", "--alpha", "2", "--weight", "3", "--t-max", "5", "--dt",
	                          "0.5", "--out", path.string()});
	CHECK(r.code == 0);
	CHECK(r.out.find("peak p_a") != std::string::npos);
	const std::string text = slurp(path);
	CHECK(text.rfind("time,p_a,p_b,p_c,p_d,p_e,p_abc,p_ab\n", 0) == 0);
	const auto rows = parse_csv(text);
	REQUIRE(rows.size() == 11);
	CHECK(rows[0][1] == doctest::Approx(1.0 / 12.0));
	for(const auto& row : rows)
	{
		REQUIRE(row.size() == 8);
		CHECK(row[1] + row[2] + row[3] + row[4] + row[5] == doctest::Approx(1.0));
		CHECK(row[6] == doctest::Approx(row[1] + row[2] + row[3]));
	}
}

TEST_CASE("output is deterministic")
{
	const std::vector<std::string> args{"simulate", "--n", "20", "--weight", "wminus", "--t-max", "30"};
	const Result a = run_cli(args);
	const Result b = run_cli(args);
	CHECK(a.code == 0);
	CHECK(a.out == b.out);
}

TEST_CASE("full and reduced engines give the same series")
{
	const std::vector<std::string> base{"simulate", "--n", "12", "--alpha", "-1", "--weight", "-4", "--t-max", "20",
	                                    "--dt", "0.1"};
	auto full = base;
	full.insert(full.end(), {"--engine", "full"});
	const auto a = parse_csv(run_cli(base).out);
	const auto b = parse_csv(run_cli(full).out);
	REQUIRE(a.size() == b.size());
	double worst = 0.0;
	for(std::size_t i = 0; i < a.size(); ++i)
	{
		for(std::size_t j = 0; j < 8; ++j)
		{
			worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
		}
	}
	CHECK(worst < 1e-8);
}

TEST_CASE("JSON output carries columns and metadata")
{
	const Result r = run_cli({"simulate", "--n", "12", "--weight", "2", "--t-max", "2", "--dt", "0.5", "--format",
	                          "json", "--stage2-weight", "1", "--stage2-rule", "at:1"});
	REQUIRE(r.code == 0);
	const auto doc = nlohmann::json::parse(r.out);
	CHECK(doc["time"].size() == 5);
	CHECK(doc["p_ab"].size() == 5);
	CHECK(doc["metadata"]["config"]["n"] == 12);
	CHECK(doc["metadata"]["config"]["switch_time"] == 1.0);
	CHECK(doc["metadata"]["peak"]["observable"] == "p_a");
}

TEST_CASE("two-stage rule switches at the stage-one peak")
{
	cli::RunConfig cfg;
	cfg.n = 1200;
	cfg.alpha = 4.0;
	cfg.weight = "wplus";
	cfg.stage2_weight = "1";
	cfg.stage2_rule = "ab-peak";
	const cli::Simulation sim = cli::simulate(cfg);
	REQUIRE(sim.switch_time);
	CHECK(*sim.switch_time / std::sqrt(1200.0) == doctest::Approx(3.265).epsilon(0.01));
	CHECK(sim.peak.value == doctest::Approx(0.996).epsilon(0.005));
}

TEST_CASE("configuration errors exit with 2 and leave no file")
{
	const auto path = scratch_dir() / "bad.csv";
	std::filesystem::remove(path);
	CHECK(run_cli({"simulate", "--n", "7", "--out", path.string()}).code == 2);
	CHECK(run_cli({"simulate", "--n", "12", "--dt", "-1", "--out", path.string()}).code == 2);
	CHECK(run_cli({"simulate", "--n", "12", "--weight", "wplus", "--alpha", "0", "--out", path.string()}).code == 2);
	CHECK(run_cli({"simulate", "--n", "12", "--stage2-weight", "1", "--out", path.string()}).code == 2);
	CHECK(run_cli({"simulate", "--n", "12", "--stage2-weight", "1", "--stage2-rule", "later"}).code == 2);
	CHECK(run_cli({"simulate", "--engine", "quantum"}).code == 2);
	CHECK(run_cli({"simulate", "--format", "xml"}).code == 2);
	CHECK(run_cli({"nonsense"}).code == 2);
	CHECK(run_cli({}).code == 2);
	CHECK_FALSE(std::filesystem::exists(path));
	CHECK(run_cli({"simulate", "--n", "12", "--t-max", "1", "--out", "/nonexistent/dir/x.csv"}).code == 2);
}

TEST_CASE("help exits cleanly")
{
	const Result r = run_cli({"--help"});
	CHECK(r.code == 0);
	CHECK(r.out.find("simulate") != std::string::npos);
}

TEST_CASE("numerical failure exits with 3")
{
	// Far beyond machine precision, so the conservation checks must fail.
	set_tolerance(1e-30);
	const Result r = run_cli({"simulate", "--n", "60", "--weight", "5", "--t-max", "50"});
	set_tolerance(1e-9);
	CHECK(r.code == 3);
}

TEST_CASE("verify-spin")
{
	Result r = run_cli({"verify-spin", "--builtin", "fig2", "--alpha", "0.5", "--seed", "7"});
	CHECK(r.code == 0);
	CHECK(r.out.find("result: PASS") != std::string::npos);

	r = run_cli({"verify-spin", "--builtin", "barbell:8,-2", "--alpha", "2", "--marked", "0", "--gamma", "critical"});
	CHECK(r.code == 0);

	r = run_cli({"verify-spin", "--builtin", "paw", "--alpha", "0.5", "--perturb", "1e-4"});
	CHECK(r.code == 3);
	CHECK(r.out.find("max deviation: 1.000e-04") != std::string::npos);

	CHECK(run_cli({"verify-spin", "--builtin", "barbell:16,1"}).code == 2);
	CHECK(run_cli({"verify-spin", "--builtin", "triangle"}).code == 2);
	CHECK(run_cli({"verify-spin"}).code == 2);
	CHECK(run_cli({"verify-spin", "--builtin", "paw", "--weights", "1,2"}).code == 2);
}

TEST_CASE("verify-spin reads graph files")
{
	const auto path = scratch_dir() / "paw.txt";
	{
		std::ofstream os(path);
		write_graph(os, paw_graph({0.3, -1.0, 2.0, 0.7}));
	}
	const Result r = run_cli({"verify-spin", "--graph", path.string(), "--alpha", "-1.5", "--marked", "3"});
	CHECK(r.code == 0);
	CHECK(r.out.find("spins: 4") != std::string::npos);
}

TEST_CASE("sweep")
{
	const Result single = run_cli({"sweep", "--n", "12", "--alpha", "1", "--weight", "2", "--t-max", "10"});
	CHECK(single.code == 0);
	CHECK(parse_csv(single.out).size() == 1);
	CHECK(single.out.rfind("n,alpha,weight,peak_time,peak_p_a\n", 0) == 0);

	const auto rows = cli::sweep({1200}, {4.0}, {"120", "150", "200", "300", "600", "1200"}, cli::RunConfig{}, 3);
	REQUIRE(rows.size() == 6);
	for(const auto& row : rows)
	{
		const bool boosted = row.weight == 150.0 || row.weight == 300.0;
		CHECK_MESSAGE((row.peak.value > 0.7) == boosted, "w = ", row.weight, " peak ", row.peak.value);
	}

	const auto negative =
	    cli::sweep({1200}, {-3.0}, {"-120", "-150", "-200", "-300", "-600", "-1200"}, cli::RunConfig{}, 2);
	for(const auto& row : negative)
	{
		const bool boosted = row.weight == -120.0 || row.weight == -200.0;
		CHECK_MESSAGE((row.peak.value > 0.7) == boosted, "w = ", row.weight, " peak ", row.peak.value);
	}
}

TEST_CASE("sweep rows do not depend on the worker count")
{
	const cli::RunConfig base;
	const auto a = cli::sweep({12, 20}, {1.0, -2.0}, {"3", "wminus"}, base, 1);
	const auto b = cli::sweep({12, 20}, {1.0, -2.0}, {"3", "wminus"}, base, 4);
	CHECK(cli::sweep_csv(a) == cli::sweep_csv(b));
	CHECK(a.size() == 8);
	CHECK(a[0].n == 12);
	CHECK(a[7].n == 20);
}
