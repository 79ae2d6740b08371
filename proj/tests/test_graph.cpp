#include <doctest.h>

#include <random>
#include <sstream>

#include "qwalk/graph.hpp"

using namespace qwalk;

TEST_CASE("barbell of 12 vertices")
{
	const SignedWeightedGraph g = build_barbell({12, 1.0});
	const BarbellLayout layout{12};
	CHECK(g.edges().size() == 31);
	CHECK(g.degree(layout.marked()) == 5.0);
	CHECK(g.degree(layout.c_vertex()) == 6.0);
	CHECK(g.degree(layout.d_vertex()) == 6.0);
	CHECK(g.total_weight() == 31.0);
}

TEST_CASE("barbell layout classes")
{
	const BarbellLayout layout{10};
	CHECK(layout.class_of(0) == VertexClass::a);
	CHECK(layout.class_of(1) == VertexClass::b);
	CHECK(layout.class_of(4) == VertexClass::c);
	CHECK(layout.class_of(5) == VertexClass::d);
	CHECK(layout.class_of(9) == VertexClass::e);
	CHECK(layout.multiplicity(VertexClass::b) == 3);
	CHECK(layout.multiplicity(VertexClass::e) == 4);

	std::array<std::size_t, vertex_class_count> counts{};
	for(std::size_t v = 0; v < 10; ++v)
	{
		++counts[static_cast<std::size_t>(layout.class_of(v))];
	}
	for(std::size_t k = 0; k < vertex_class_count; ++k)
	{
		CHECK(counts[k] == layout.multiplicity(static_cast<VertexClass>(k)));
	}
	CHECK_THROWS_AS((void)layout.class_of(10), std::out_of_range);
}

TEST_CASE("barbell size validation")
{
	CHECK_THROWS_AS(build_barbell({7, 1.0}), std::invalid_argument);
	CHECK_THROWS_AS(build_barbell({4, 1.0}), std::invalid_argument);
	CHECK_THROWS_AS(build_barbell({8, 0.0}), std::invalid_argument);
	CHECK_NOTHROW(build_barbell({6, -3.5}));
}

TEST_CASE("edge insertion rules")
{
	SignedWeightedGraph g(3);
	g.add_edge(2, 0, -1.5);
	CHECK(g.edges().front() == Edge{0, 2, -1.5});
	CHECK_THROWS_AS(g.add_edge(0, 2, 1.0), std::invalid_argument);
	CHECK_THROWS_AS(g.add_edge(1, 1, 1.0), std::invalid_argument);
	CHECK_THROWS_AS(g.add_edge(0, 3, 1.0), std::invalid_argument);
	CHECK_THROWS_AS(g.add_edge(0, 1, 0.0), std::invalid_argument);
	CHECK_THROWS_AS(g.add_edge(0, 1, std::nan("")), std::invalid_argument);
	CHECK(g.degree(0) == -1.5);
	CHECK(g.degree(1) == 0.0);
}

TEST_CASE("paw graph matrices")
{
	const double e01 = 0.7, e12 = -1.3, e13 = 2.1, e23 = -0.4;
	const SignedWeightedGraph g = paw_graph({e01, e12, e13, e23});
	const Matrix<double> a = adjacency_matrix(g).matrix();
	CHECK(a(1, 0) == e01);
	CHECK(a(1, 1) == 0.0);
	CHECK(a(1, 2) == e12);
	CHECK(a(1, 3) == e13);
	CHECK(a(0, 2) == 0.0);
	CHECK(degree_matrix(g).matrix()(1, 1) == doctest::Approx(e01 + e12 + e13));
	CHECK(g.total_weight() == doctest::Approx(e01 + e12 + e13 + e23));
}

TEST_CASE("generalized Laplacian special cases")
{
	const SignedWeightedGraph g = build_barbell({8, -2.0});
	const Matrix<double> a = adjacency_matrix(g).matrix();
	const Matrix<double> d = degree_matrix(g).matrix();
	CHECK(generalized_laplacian(g, 0.0).matrix() == a - d);
	CHECK(generalized_laplacian(g, 1.0).matrix() == a);
	CHECK(generalized_laplacian(g, 2.0).matrix() == a + d);
	CHECK((generalized_laplacian(g, 0.3).matrix() - (a - d + 0.3 * d)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("standard Laplacian rows sum to zero")
{
	const SignedWeightedGraph g = paw_graph({1.0, -2.0, 0.5, 3.0});
	CHECK(generalized_laplacian(g, 0.0).matrix().rowwise().sum().cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("text format round trip is bit exact")
{
	std::mt19937_64 rng(42);
	std::uniform_real_distribution<double> u(-10.0, 10.0);
	SignedWeightedGraph g(9);
	for(std::size_t i = 0; i < 9; ++i)
	{
		for(std::size_t j = i + 1; j < 9; j += 2)
		{
			g.add_edge(i, j, u(rng) * std::pow(10.0, static_cast<double>(i) - 4.0));
		}
	}
	std::stringstream ss;
	write_graph(ss, g);
	const SignedWeightedGraph back = read_graph(ss);
	CHECK(back == g);
}

TEST_CASE("text format parsing")
{
	std::istringstream ok("# paw\n4 4\n0 1 1\n1 2 -2.5\n\n1 3 1e-3\n2 3 4\n");
	const SignedWeightedGraph g = read_graph(ok);
	CHECK(g.size() == 4);
	CHECK(g.edges().size() == 4);
	CHECK(g.degree(1) == doctest::Approx(1.0 - 2.5 + 1e-3));

	std::istringstream short_file("3 2\n0 1 1\n");
	CHECK_THROWS_AS(read_graph(short_file), std::invalid_argument);
	std::istringstream bad_weight("3 1\n0 1 x\n");
	CHECK_THROWS_AS(read_graph(bad_weight), std::invalid_argument);
	std::istringstream bad_vertex("3 1\n0 5 1\n");
	CHECK_THROWS_AS(read_graph(bad_vertex), std::invalid_argument);
	CHECK_THROWS_AS(read_graph_file("/nonexistent/graph.txt"), std::invalid_argument);
}
