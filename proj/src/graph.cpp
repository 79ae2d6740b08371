#include "qwalk/graph.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace qwalk
{

SignedWeightedGraph::SignedWeightedGraph(std::size_t n)
	: n_{n}
	, degree_(n, 0.0)
{
	if(n == 0)
	{
		throw std::invalid_argument("graph needs at least one vertex");
	}
}

void SignedWeightedGraph::add_edge(std::size_t i, std::size_t j, double weight)
{
	if(i >= n_ || j >= n_)
	{
		throw std::invalid_argument(fmt::format("edge ({}, {}) out of range for {} vertices", i, j, n_));
	}
	if(i == j)
	{
		throw std::invalid_argument(fmt::format("self-loop at vertex {}", i));
	}
	if(weight == 0.0 || !std::isfinite(weight))
	{
		throw std::invalid_argument(fmt::format("edge ({}, {}) has invalid weight {}", i, j, weight));
	}
	if(i > j)
	{
		std::swap(i, j);
	}
	if(!pairs_.emplace(i, j).second)
	{
		throw std::invalid_argument(fmt::format("duplicate edge ({}, {})", i, j));
	}
	edges_.push_back({i, j, weight});
	degree_[i] += weight;
	degree_[j] += weight;
}

double SignedWeightedGraph::degree(std::size_t k) const
{
	return degree_.at(k);
}

double SignedWeightedGraph::total_weight() const
{
	double sum = 0.0;
	for(const Edge& e : edges_)
	{
		sum += e.weight;
	}
	return sum;
}

const char* to_string(VertexClass cls)
{
	switch(cls)
	{
	case VertexClass::a: return "a";
	case VertexClass::b: return "b";
	case VertexClass::c: return "c";
	case VertexClass::d: return "d";
	case VertexClass::e: return "e";
	}
	return "?";
}

VertexClass BarbellLayout::class_of(std::size_t vertex) const
{
	if(vertex >= n)
	{
		throw std::out_of_range("vertex outside barbell");
	}
	if(vertex == marked())
	{
		return VertexClass::a;
	}
	if(vertex < c_vertex())
	{
		return VertexClass::b;
	}
	if(vertex == c_vertex())
	{
		return VertexClass::c;
	}
	if(vertex == d_vertex())
	{
		return VertexClass::d;
	}
	return VertexClass::e;
}

std::size_t BarbellLayout::multiplicity(VertexClass cls) const
{
	switch(cls)
	{
	case VertexClass::b: return half() - 2;
	case VertexClass::e: return half() - 1;
	default: return 1;
	}
}

void validate(const BarbellSpec& spec)
{
	if(spec.n < 6 || spec.n % 2 != 0)
	{
		throw std::invalid_argument(fmt::format("barbell size must be even and at least 6, got {}", spec.n));
	}
}

SignedWeightedGraph build_barbell(const BarbellSpec& spec)
{
	validate(spec);
	const BarbellLayout layout{spec.n};
	const std::size_t h = layout.half();

	SignedWeightedGraph g(spec.n);
	for(std::size_t offset : {std::size_t{0}, h})
	{
		for(std::size_t i = 0; i < h; ++i)
		{
			for(std::size_t j = i + 1; j < h; ++j)
			{
				g.add_edge(offset + i, offset + j, 1.0);
			}
		}
	}
	g.add_edge(layout.c_vertex(), layout.d_vertex(), spec.bridge_weight);
	return g;
}

SignedWeightedGraph paw_graph(const std::array<double, 4>& weights)
{
	SignedWeightedGraph g(4);
	g.add_edge(0, 1, weights[0]);
	g.add_edge(1, 2, weights[1]);
	g.add_edge(1, 3, weights[2]);
	g.add_edge(2, 3, weights[3]);
	return g;
}

Operator adjacency_matrix(const SignedWeightedGraph& g)
{
	const auto n = static_cast<Eigen::Index>(g.size());
	Matrix<double> a = Matrix<double>::Zero(n, n);
	for(const Edge& e : g.edges())
	{
		a(e.u, e.v) = e.weight;
		a(e.v, e.u) = e.weight;
	}
	return Operator(std::move(a), "adjacency");
}

Operator degree_matrix(const SignedWeightedGraph& g)
{
	const auto n = static_cast<Eigen::Index>(g.size());
	Matrix<double> d = Matrix<double>::Zero(n, n);
	for(Eigen::Index k = 0; k < n; ++k)
	{
		d(k, k) = g.degree(static_cast<std::size_t>(k));
	}
	return Operator(std::move(d), "degree");
}

Operator generalized_laplacian(const SignedWeightedGraph& g, double alpha)
{
	Matrix<double> l = adjacency_matrix(g).matrix();
	for(Eigen::Index k = 0; k < l.rows(); ++k)
	{
		l(k, k) += (alpha - 1.0) * g.degree(static_cast<std::size_t>(k));
	}
	return Operator(std::move(l), fmt::format("generalized Laplacian (alpha = {})", alpha));
}

void write_graph(std::ostream& os, const SignedWeightedGraph& g)
{
	fmt::print(os, "{} {}\n", g.size(), g.edges().size());
	for(const Edge& e : g.edges())
	{
		fmt::print(os, "{} {} {:.17g}\n", e.u, e.v, e.weight);
	}
}

SignedWeightedGraph read_graph(std::istream& is)
{
	std::string line;
	auto next_line = [&](const char* what) {
		while(std::getline(is, line))
		{
			const auto first = line.find_first_not_of(" \t\r");
			if(first != std::string::npos && line[first] != '#')
			{
				return;
			}
		}
		throw std::invalid_argument(fmt::format("graph file: missing {}", what));
	};

	next_line("header");
	std::istringstream header(line);
	long long n = -1;
	long long m = -1;
	if(!(header >> n >> m) || n <= 0 || m < 0)
	{
		throw std::invalid_argument(fmt::format("graph file: bad header '{}'", line));
	}

	SignedWeightedGraph g(static_cast<std::size_t>(n));
	for(long long k = 0; k < m; ++k)
	{
		next_line("edge line");
		std::istringstream row(line);
		long long i = -1;
		long long j = -1;
		std::string weight_text;
		if(!(row >> i >> j >> weight_text) || i < 0 || j < 0)
		{
			throw std::invalid_argument(fmt::format("graph file: bad edge line '{}'", line));
		}
		std::size_t used = 0;
		double weight = 0.0;
		try
		{
			weight = std::stod(weight_text, &used);
		}
		catch(const std::exception&)
		{
			used = 0;
		}
		if(used != weight_text.size())
		{
			throw std::invalid_argument(fmt::format("graph file: bad weight '{}'", weight_text));
		}
		g.add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j), weight);
	}
	return g;
}

SignedWeightedGraph read_graph_file(const std::string& path)
{
	std::ifstream in(path);
	if(!in)
	{
		throw std::invalid_argument(fmt::format("cannot open graph file '{}'", path));
	}
	return read_graph(in);
}

} // namespace qwalk
