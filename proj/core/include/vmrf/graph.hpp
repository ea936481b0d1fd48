#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vmrf {

using Vertex = std::int64_t;
using VertexSet = std::set<Vertex>;

// Finite undirected simple graph with ordered vertex and neighbour lists.
class Graph {
public:
    Graph() = default;

    void add_vertex(Vertex v);
    // Adds both endpoints; throws on self-loops. Duplicate edges are ignored.
    void add_edge(Vertex u, Vertex v);

    bool has_vertex(Vertex v) const { return adjacency_.count(v) != 0; }
    bool has_edge(Vertex u, Vertex v) const;
    const std::vector<Vertex>& neighbors(Vertex v) const;
    std::vector<Vertex> vertices() const;
    std::size_t vertex_count() const { return adjacency_.size(); }
    std::size_t edge_count() const;
    std::size_t max_degree() const;
    std::vector<std::pair<Vertex, Vertex>> edges() const;

private:
    std::map<Vertex, std::vector<Vertex>> adjacency_;
};

// Locally finite, possibly infinite graph presented by a root and a neighbour function.
class GraphGenerator {
public:
    using NeighborFn = std::function<std::vector<Vertex>(Vertex)>;

    GraphGenerator(std::string name, Vertex root, NeighborFn neighbors, bool finite);
    static GraphGenerator from_graph(std::string name, Graph graph, Vertex root);

    const std::string& name() const noexcept { return name_; }
    Vertex root() const noexcept { return root_; }
    bool is_finite() const noexcept { return finite_; }
    std::vector<Vertex> neighbors(Vertex v) const;

    // Graph distance from `center` for every vertex within `radius`.
    std::map<Vertex, int> ball(Vertex center, int radius) const;
    // The whole graph; throws for infinite generators.
    Graph materialize() const;

private:
    std::string name_;
    Vertex root_;
    NeighborFn neighbors_;
    bool finite_;
};

Graph path_graph(int k);           // 0 - 1 - ... - (k-1)
Graph cycle_graph(int k);          // path plus the edge (k-1, 0); k >= 3
Graph tree_graph(int branching, int depth);  // root 0, vertices numbered breadth-first
GraphGenerator zline_generator();  // the integer line, root 0

// One "u v" pair per line; blank lines and lines starting with '#' are skipped.
Graph parse_edge_list(std::string_view text);
Graph read_edge_list(const std::string& path);

// "path:k", "cycle:k", "zline", "tree:b:d", or "file:<path>".
GraphGenerator parse_graph_spec(std::string_view spec);

VertexSet boundary(const Graph& g, const VertexSet& A);
// d2 A = dA u d(A u dA), straight from the definition.
VertexSet boundary2(const Graph& g, const VertexSet& A);
// Vertices at graph distance 1 or 2 from A, by breadth-first search.
VertexSet boundary2_bfs(const Graph& g, const VertexSet& A);

// Maximal vertex sets of pairwise graph distance <= 2, together with every closed
// neighbourhood {u} u N_u; sorted and without duplicates.
std::vector<VertexSet> two_cliques(const Graph& g);

// Radius-n ball around the root with the outer shell U_n = V_n \ V_{n-2} completed
// into a clique.
struct TruncatedGraph {
    Vertex root = 0;
    int n = 0;
    Graph graph;
    VertexSet ball;   // V_n
    VertexSet shell;  // U_n
    VertexSet inner;  // V_{n-2}
    std::map<Vertex, int> distance;
};

TruncatedGraph truncate(const GraphGenerator& g, Vertex root, int n);

std::string format_vertex_set(const VertexSet& s);
// Parses "0,1,2" (also accepts "{0,1,2}" and whitespace).
VertexSet parse_vertex_set(std::string_view text);

}  // namespace vmrf
