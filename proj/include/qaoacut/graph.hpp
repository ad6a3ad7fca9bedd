#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace qaoacut {

using Vertex = std::uint32_t;

/// Undirected edge stored with the lower index first.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Edge() = default;
    Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend auto operator<=>(const Edge &, const Edge &) = default;
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Simple undirected graph on dense 0-based vertices. Neighbor lists are
/// kept sorted; no self-loops or parallel edges are accepted.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n) : adjacency_(n) {}

    static Graph from_edges(std::size_t n, std::span<const Edge> edges);

    void add_edge(Vertex a, Vertex b);

    std::size_t num_vertices() const { return adjacency_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<Edge> &edges() const { return edges_; }
    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
    std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
    bool has_edge(Vertex a, Vertex b) const;

    /// Induced subgraph on `keep` (relabelled in the given order).
    Graph induced(std::span<const Vertex> keep) const;

    friend bool operator==(const Graph &a, const Graph &b) { return a.edges_ == b.edges_ && a.adjacency_.size() == b.adjacency_.size(); }

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<Edge> edges_;
};

/// A simple d-regular graph: every vertex has exactly d neighbors and
/// |E| = n d / 2.
class RegularGraph {
public:
    RegularGraph(Graph graph, int degree);

    const Graph &graph() const { return graph_; }
    operator const Graph &() const { return graph_; }

    std::size_t num_vertices() const { return graph_.num_vertices(); }
    std::size_t num_edges() const { return graph_.num_edges(); }
    int degree() const { return degree_; }
    const std::vector<Edge> &edges() const { return graph_.edges(); }

    friend bool operator==(const RegularGraph &, const RegularGraph &) = default;

private:
    Graph graph_;
    int degree_;
};

/// Uniform simple d-regular graph by configuration-model pairing with full
/// restart on self-loops or multi-edges. Deterministic in `seed`.
RegularGraph generate_regular(std::size_t n, int d, std::uint64_t seed);

RegularGraph complete_graph(std::size_t n);
RegularGraph cycle_graph(std::size_t n);
RegularGraph petersen_graph();

/// Shortest-path distances from the nearest of `sources`; vertices farther
/// than `max_depth` (or unreachable) get kUnreachable.
std::vector<int> bfs_distances(const Graph &g, std::span<const Vertex> sources,
                               int max_depth = kUnreachable);

/// Length of the shortest cycle, nullopt for forests.
std::optional<int> girth(const Graph &g);

/// Exact simple-cycle counts for lengths 3..max_len by DFS from each
/// cycle's smallest vertex.
std::map<int, std::uint64_t> count_cycles(const Graph &g, int max_len, int length_cap = 12);

/// Edge-list text format: "n d" header, then one "u v" per line with u < v.
void write_edge_list(std::ostream &out, const RegularGraph &g);
RegularGraph read_edge_list(std::istream &in);

} // namespace qaoacut
