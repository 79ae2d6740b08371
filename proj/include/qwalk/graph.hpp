#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <set>
#include <utility>
#include <string>
#include <vector>

#include "qwalk/linalg.hpp"

namespace qwalk
{

struct Edge
{
	std::size_t u; ///< smaller endpoint
	std::size_t v; ///< larger endpoint
	double weight;

	friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected graph with real, possibly negative, edge weights. One record
/// per unordered pair; zero weights are rejected since they mean "no edge".
class SignedWeightedGraph
{
public:
	explicit SignedWeightedGraph(std::size_t n);

	/// Throws std::invalid_argument on self-loops, out-of-range endpoints,
	/// duplicate pairs, zero or non-finite weights.
	void add_edge(std::size_t i, std::size_t j, double weight);

	[[nodiscard]] std::size_t size() const { return n_; }
	[[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }

	/// deg(k): sum of weights of the edges incident to k.
	[[nodiscard]] double degree(std::size_t k) const;

	/// |E|: sum of all edge weights.
	[[nodiscard]] double total_weight() const;

	friend bool operator==(const SignedWeightedGraph&, const SignedWeightedGraph&) = default;

private:
	std::size_t n_;
	std::vector<Edge> edges_;
	std::set<std::pair<std::size_t, std::size_t>> pairs_;
	std::vector<double> degree_;
};

/// Vertex classes of the barbell with a marked vertex. a is the marked
/// vertex, b the rest of its clique except c, c the bridge endpoint in the
/// marked clique, d the bridge endpoint in the other clique and e the rest
/// of the other clique.
enum class VertexClass
{
	a,
	b,
	c,
	d,
	e
};

constexpr std::size_t vertex_class_count = 5;

const char* to_string(VertexClass cls);

struct BarbellSpec
{
	std::size_t n = 0;          ///< total vertex count, even, >= 6
	double bridge_weight = 1.0; ///< w
};

/// Vertex ordering [a, b..., c, d, e...] used everywhere in the library.
struct BarbellLayout
{
	std::size_t n = 0;

	[[nodiscard]] std::size_t half() const { return n / 2; }
	[[nodiscard]] std::size_t marked() const { return 0; }
	[[nodiscard]] std::size_t c_vertex() const { return half() - 1; }
	[[nodiscard]] std::size_t d_vertex() const { return half(); }
	[[nodiscard]] VertexClass class_of(std::size_t vertex) const;
	/// Number of vertices in each class: 1, n/2-2, 1, 1, n/2-1.
	[[nodiscard]] std::size_t multiplicity(VertexClass cls) const;
};

void validate(const BarbellSpec& spec);

SignedWeightedGraph build_barbell(const BarbellSpec& spec);

/// Triangle 1-2-3 with a pendant vertex 0 on vertex 1. Weights are for the
/// edges (0,1), (1,2), (1,3), (2,3) in that order.
SignedWeightedGraph paw_graph(const std::array<double, 4>& weights);

Operator adjacency_matrix(const SignedWeightedGraph& g);
Operator degree_matrix(const SignedWeightedGraph& g);

/// L_alpha = A - D + alpha D = A + (alpha - 1) D.
Operator generalized_laplacian(const SignedWeightedGraph& g, double alpha);

/// Text format: a header line "n m" followed by m lines "i j weight" with
/// 0-based vertex indices. Weights are written with 17 significant digits so
/// that reading back reproduces them bit for bit.
void write_graph(std::ostream& os, const SignedWeightedGraph& g);
SignedWeightedGraph read_graph(std::istream& is);
SignedWeightedGraph read_graph_file(const std::string& path);

} // namespace qwalk
