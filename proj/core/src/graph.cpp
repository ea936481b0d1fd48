#include "vmrf/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "vmrf/error.hpp"

namespace vmrf {

void Graph::add_vertex(Vertex v) { adjacency_.try_emplace(v); }

void Graph::add_edge(Vertex u, Vertex v) {
    require(u != v, "Graph: self-loops are not allowed (vertex " + std::to_string(u) + ")");
    auto& nu = adjacency_[u];
    auto& nv = adjacency_[v];
    const auto it = std::lower_bound(nu.begin(), nu.end(), v);
    if (it != nu.end() && *it == v) return;
    nu.insert(it, v);
    nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    const auto it = adjacency_.find(u);
    return it != adjacency_.end() && std::binary_search(it->second.begin(), it->second.end(), v);
}

const std::vector<Vertex>& Graph::neighbors(Vertex v) const {
    const auto it = adjacency_.find(v);
    if (it == adjacency_.end()) fail(ErrorCode::invalid_argument, "Graph: unknown vertex " + std::to_string(v));
    return it->second;
}

std::vector<Vertex> Graph::vertices() const {
    std::vector<Vertex> out;
    out.reserve(adjacency_.size());
    for (const auto& [v, _] : adjacency_) out.push_back(v);
    return out;
}

std::size_t Graph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& [_, nb] : adjacency_) twice += nb.size();
    return twice / 2;
}

std::size_t Graph::max_degree() const {
    std::size_t d = 0;
    for (const auto& [_, nb] : adjacency_) d = std::max(d, nb.size());
    return d;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (const auto& [u, nb] : adjacency_)
        for (Vertex v : nb)
            if (u < v) out.emplace_back(u, v);
    return out;
}

GraphGenerator::GraphGenerator(std::string name, Vertex root, NeighborFn neighbors, bool finite)
    : name_(std::move(name)), root_(root), neighbors_(std::move(neighbors)), finite_(finite) {}

GraphGenerator GraphGenerator::from_graph(std::string name, Graph graph, Vertex root) {
    require(graph.has_vertex(root), "GraphGenerator: root is not a vertex of the graph");
    auto shared = std::make_shared<const Graph>(std::move(graph));
    return GraphGenerator(std::move(name), root, [shared](Vertex v) { return shared->neighbors(v); }, true);
}

std::vector<Vertex> GraphGenerator::neighbors(Vertex v) const {
    std::vector<Vertex> nb = neighbors_(v);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    return nb;
}

std::map<Vertex, int> GraphGenerator::ball(Vertex center, int radius) const {
    std::map<Vertex, int> dist{{center, 0}};
    std::deque<Vertex> queue{center};
    while (!queue.empty()) {
        const Vertex u = queue.front();
        queue.pop_front();
        const int d = dist[u];
        if (d == radius) continue;
        for (Vertex v : neighbors(u))
            if (dist.emplace(v, d + 1).second) queue.push_back(v);
    }
    return dist;
}

Graph GraphGenerator::materialize() const {
    if (!finite_) fail(ErrorCode::invalid_argument, "graph '" + name_ + "' is infinite; truncate it first");
    Graph g;
    const auto reach = ball(root_, std::numeric_limits<int>::max());
    for (const auto& [u, _] : reach) {
        g.add_vertex(u);
        for (Vertex v : neighbors(u)) g.add_edge(u, v);
    }
    return g;
}

Graph path_graph(int k) {
    require(k >= 1, "path graph needs at least one vertex");
    Graph g;
    g.add_vertex(0);
    for (int i = 1; i < k; ++i) g.add_edge(i - 1, i);
    return g;
}

Graph cycle_graph(int k) {
    require(k >= 3, "cycle graph needs at least three vertices");
    Graph g = path_graph(k);
    g.add_edge(k - 1, 0);
    return g;
}

Graph tree_graph(int branching, int depth) {
    require(branching >= 1 && depth >= 0, "tree graph needs branching >= 1 and depth >= 0");
    Graph g;
    g.add_vertex(0);
    Vertex next = 1;
    std::vector<Vertex> level{0};
    for (int d = 0; d < depth; ++d) {
        std::vector<Vertex> children;
        for (Vertex parent : level)
            for (int b = 0; b < branching; ++b) {
                g.add_edge(parent, next);
                children.push_back(next++);
            }
        level = std::move(children);
    }
    return g;
}

GraphGenerator zline_generator() {
    return GraphGenerator("zline", 0, [](Vertex v) { return std::vector<Vertex>{v - 1, v + 1}; }, false);
}

namespace {

Vertex parse_vertex(std::string_view token, std::string_view context) {
    Vertex v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        fail(ErrorCode::invalid_argument, "bad vertex '" + std::string(token) + "' in '" + std::string(context) + "'");
    return v;
}

int parse_int(std::string_view token, std::string_view context) {
    const Vertex v = parse_vertex(token, context);
    require(v >= 0 && v <= 1'000'000, "graph parameter out of range in '" + std::string(context) + "'");
    return static_cast<int>(v);
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
    Graph g;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a >> b) || (ls >> extra))
            fail(ErrorCode::invalid_argument, "edge list line " + std::to_string(lineno) + ": expected 'u v'");
        g.add_edge(parse_vertex(a, line), parse_vertex(b, line));
    }
    require(g.vertex_count() > 0, "edge list is empty");
    return g;
}

Graph read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io_error, "cannot open edge list " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_edge_list(buf.str());
}

GraphGenerator parse_graph_spec(std::string_view spec) {
    const std::string s(spec);
    if (s == "zline") return zline_generator();
    if (s.rfind("file:", 0) == 0) {
        Graph g = read_edge_list(s.substr(5));
        const Vertex root = g.vertices().front();
        return GraphGenerator::from_graph(s, std::move(g), root);
    }
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    if (parts[0] == "path" && parts.size() == 2) return GraphGenerator::from_graph(s, path_graph(parse_int(parts[1], spec)), 0);
    if (parts[0] == "cycle" && parts.size() == 2)
        return GraphGenerator::from_graph(s, cycle_graph(parse_int(parts[1], spec)), 0);
    if (parts[0] == "tree" && parts.size() == 3)
        return GraphGenerator::from_graph(s, tree_graph(parse_int(parts[1], spec), parse_int(parts[2], spec)), 0);
    fail(ErrorCode::invalid_argument, "unknown graph spec '" + s + "' (expected path:k, cycle:k, zline, tree:b:d or file:<path>)");
}

VertexSet boundary(const Graph& g, const VertexSet& A) {
    VertexSet out;
    for (Vertex v : A)
        for (Vertex u : g.neighbors(v))
            if (!A.count(u)) out.insert(u);
    return out;
}

VertexSet boundary2(const Graph& g, const VertexSet& A) {
    const VertexSet first = boundary(g, A);
    VertexSet closure = A;
    closure.insert(first.begin(), first.end());
    VertexSet out = first;
    const VertexSet second = boundary(g, closure);
    out.insert(second.begin(), second.end());
    return out;
}

VertexSet boundary2_bfs(const Graph& g, const VertexSet& A) {
    std::map<Vertex, int> dist;
    std::deque<Vertex> queue;
    for (Vertex v : A) {
        dist[v] = 0;
        queue.push_back(v);
    }
    while (!queue.empty()) {
        const Vertex u = queue.front();
        queue.pop_front();
        if (dist[u] == 2) continue;
        for (Vertex v : g.neighbors(u))
            if (dist.emplace(v, dist[u] + 1).second) queue.push_back(v);
    }
    VertexSet out;
    for (const auto& [v, d] : dist)
        if (d >= 1) out.insert(v);
    return out;
}

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitGraph {
    std::size_t n = 0;
    std::size_t words = 0;
    std::vector<Bits> adj;

    bool test(const Bits& b, std::size_t i) const { return (b[i / 64] >> (i % 64)) & 1U; }
    static void set(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
    static void reset(Bits& b, std::size_t i) { b[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    static bool empty(const Bits& b) {
        return std::all_of(b.begin(), b.end(), [](std::uint64_t w) { return w == 0; });
    }
    static std::size_t count(const Bits& b) {
        std::size_t c = 0;
        for (auto w : b) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }
    Bits intersect(const Bits& a, const Bits& b) const {
        Bits out(words);
        for (std::size_t i = 0; i < words; ++i) out[i] = a[i] & b[i];
        return out;
    }
};

// Bron-Kerbosch with Tomita pivoting.
void bron_kerbosch(const BitGraph& g, Bits& R, Bits P, Bits X, std::vector<Bits>& out) {
    if (BitGraph::empty(P) && BitGraph::empty(X)) {
        out.push_back(R);
        return;
    }
    std::size_t pivot = 0, best = 0;
    bool have_pivot = false;
    for (std::size_t u = 0; u < g.n; ++u) {
        if (!g.test(P, u) && !g.test(X, u)) continue;
        const std::size_t c = BitGraph::count(g.intersect(P, g.adj[u]));
        if (!have_pivot || c > best) {
            pivot = u;
            best = c;
            have_pivot = true;
        }
    }
    for (std::size_t v = 0; v < g.n; ++v) {
        if (!g.test(P, v) || g.test(g.adj[pivot], v)) continue;
        BitGraph::set(R, v);
        bron_kerbosch(g, R, g.intersect(P, g.adj[v]), g.intersect(X, g.adj[v]), out);
        BitGraph::reset(R, v);
        BitGraph::reset(P, v);
        BitGraph::set(X, v);
    }
}

}  // namespace

std::vector<VertexSet> two_cliques(const Graph& g) {
    const std::vector<Vertex> verts = g.vertices();
    std::map<Vertex, std::size_t> index;
    for (std::size_t i = 0; i < verts.size(); ++i) index[verts[i]] = i;

    BitGraph sq;
    sq.n = verts.size();
    sq.words = (sq.n + 63) / 64;
    sq.adj.assign(sq.n, Bits(sq.words, 0));
    for (std::size_t i = 0; i < sq.n; ++i) {
        for (Vertex u : g.neighbors(verts[i])) {
            const std::size_t j = index[u];
            BitGraph::set(sq.adj[i], j);
            for (Vertex w : g.neighbors(u))
                if (w != verts[i]) BitGraph::set(sq.adj[i], index[w]);
        }
    }
    std::vector<Bits> raw;
    Bits R(sq.words, 0), P(sq.words, 0), X(sq.words, 0);
    for (std::size_t i = 0; i < sq.n; ++i) BitGraph::set(P, i);
    bron_kerbosch(sq, R, P, X, raw);

    std::set<VertexSet> unique;
    for (const Bits& b : raw) {
        VertexSet s;
        for (std::size_t i = 0; i < sq.n; ++i)
            if (sq.test(b, i)) s.insert(verts[i]);
        unique.insert(std::move(s));
    }
    for (Vertex v : verts) {
        VertexSet closed{v};
        for (Vertex u : g.neighbors(v)) closed.insert(u);
        unique.insert(std::move(closed));
    }
    return {unique.begin(), unique.end()};
}

TruncatedGraph truncate(const GraphGenerator& g, Vertex root, int n) {
    require(n >= 4, "truncate: n must be >= 4");
    TruncatedGraph out;
    out.root = root;
    out.n = n;
    out.distance = g.ball(root, n);
    for (const auto& [v, d] : out.distance) {
        out.ball.insert(v);
        if (d <= n - 2) out.inner.insert(v);
        else out.shell.insert(v);
    }
    for (Vertex v : out.ball) {
        out.graph.add_vertex(v);
        for (Vertex u : g.neighbors(v))
            if (out.ball.count(u)) out.graph.add_edge(v, u);
    }
    for (auto a = out.shell.begin(); a != out.shell.end(); ++a)
        for (auto b = std::next(a); b != out.shell.end(); ++b) out.graph.add_edge(*a, *b);
    return out;
}

std::string format_vertex_set(const VertexSet& s) {
    std::string out = "{";
    bool first = true;
    for (Vertex v : s) {
        if (!first) out += ',';
        out += std::to_string(v);
        first = false;
    }
    return out + "}";
}

VertexSet parse_vertex_set(std::string_view text) {
    std::string cleaned;
    for (char c : text)
        if (c != '{' && c != '}' && c != ' ' && c != '\t') cleaned += c;
    VertexSet out;
    if (cleaned.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = cleaned.find(',', start);
        const std::string token = cleaned.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.insert(parse_vertex(token, text));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace vmrf
