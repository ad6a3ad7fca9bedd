#include "qaoacut/subgraph.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "qaoacut/errors.hpp"

namespace qaoacut {

AnchoredSubgraph pair_neighborhood(const Graph &g, Vertex a, Vertex b, int radius) {
    if (radius < 0) {
        throw ParameterError("radius must be non-negative");
    }
    if (a >= g.num_vertices() || b >= g.num_vertices() || a == b) {
        throw InputError("anchor vertices must be distinct vertices of the graph");
    }
    const Vertex anchors[] = {a, b};
    const std::vector<int> dist = bfs_distances(g, anchors, radius);
    std::vector<Vertex> keep{a, b};
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (v != a && v != b && dist[v] <= radius) {
            rest.push_back(v);
        }
    }
    std::stable_sort(rest.begin(), rest.end(), [&](Vertex x, Vertex y) { return dist[x] < dist[y]; });
    keep.insert(keep.end(), rest.begin(), rest.end());
    AnchoredSubgraph s;
    s.graph = g.induced(keep);
    s.a = 0;
    s.b = 1;
    s.radius = radius;
    s.origin = std::move(keep);
    return s;
}

AnchoredSubgraph edge_neighborhood(const Graph &g, Edge edge, int radius) {
    if (!g.has_edge(edge.u, edge.v)) {
        throw InputError("edge (" + std::to_string(edge.u) + "," + std::to_string(edge.v) + ") is not in the graph");
    }
    return pair_neighborhood(g, edge.u, edge.v, radius);
}

AnchoredSubgraph lightcone_subgraph(const AnchoredSubgraph &s) {
    const Vertex anchors[] = {s.a, s.b};
    const std::vector<int> dist = bfs_distances(s.graph, anchors);
    std::vector<Edge> kept;
    for (const Edge &e : s.graph.edges()) {
        const bool anchor_edge = (e.u == s.a && e.v == s.b) || (e.u == s.b && e.v == s.a);
        if (anchor_edge || dist[e.u] < s.radius || dist[e.v] < s.radius) {
            kept.push_back(e);
        }
    }
    AnchoredSubgraph out = s;
    out.graph = Graph::from_edges(s.graph.num_vertices(), kept);
    return out;
}

namespace {

// Builds a graph from `seed` plus branches hanging off listed vertices.
// Each branch request is (attach vertex, remaining depth); a new vertex is
// created and given d-1 further branches until depth runs out.
Graph with_branches(std::size_t seed_vertices, const std::vector<Edge> &seed_edges,
                    std::vector<std::pair<Vertex, int>> requests, int d) {
    std::vector<Edge> edges = seed_edges;
    std::size_t n = seed_vertices;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const auto [parent, depth] = requests[i];
        const auto child = static_cast<Vertex>(n++);
        edges.emplace_back(parent, child);
        if (depth > 1) {
            for (int c = 0; c < d - 1; ++c) {
                requests.emplace_back(child, depth - 1);
            }
        }
    }
    return Graph::from_edges(n, edges);
}

} // namespace

AnchoredSubgraph tree_subgraph(int d, int p) {
    if (d < 1 || p < 0) {
        throw ParameterError("tree_subgraph needs d >= 1 and p >= 0");
    }
    std::vector<std::pair<Vertex, int>> requests;
    for (Vertex root : {0u, 1u}) {
        for (int c = 0; c < d - 1 && p > 0; ++c) {
            requests.emplace_back(root, p);
        }
    }
    const Graph g = with_branches(2, {Edge(0, 1)}, std::move(requests), d);
    return edge_neighborhood(g, Edge(0, 1), p);
}

AnchoredSubgraph single_cycle_subgraph(int d, int p, int cycle_len) {
    if (cycle_len < 3 || d < 2 || p < 0) {
        throw ParameterError("single_cycle_subgraph needs cycle length >= 3 and d >= 2");
    }
    std::vector<Edge> edges;
    for (int i = 0; i < cycle_len; ++i) {
        edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % cycle_len));
    }
    std::vector<std::pair<Vertex, int>> requests;
    for (int i = 0; i < cycle_len; ++i) {
        for (int c = 0; c < d - 2 && p > 0; ++c) {
            requests.emplace_back(static_cast<Vertex>(i), p);
        }
    }
    const Graph g = with_branches(static_cast<std::size_t>(cycle_len), edges, std::move(requests), d);
    return edge_neighborhood(g, Edge(0, 1), p);
}

AnchoredSubgraph bethe_pair_subgraph(int d, int distance, int radius) {
    if (distance < 1 || d < 2 || radius < 0) {
        throw ParameterError("bethe_pair_subgraph needs distance >= 1 and d >= 2");
    }
    // Path 0..distance, then full branching off every path vertex.
    std::vector<Edge> edges;
    for (int i = 0; i < distance; ++i) {
        edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
    }
    std::vector<std::pair<Vertex, int>> requests;
    for (int i = 0; i <= distance; ++i) {
        const int path_degree = (i == 0 || i == distance) ? 1 : 2;
        for (int c = 0; c < d - path_degree && radius > 0; ++c) {
            requests.emplace_back(static_cast<Vertex>(i), radius);
        }
    }
    const Graph g = with_branches(static_cast<std::size_t>(distance + 1), edges, std::move(requests), d);
    return pair_neighborhood(g, 0, static_cast<Vertex>(distance), radius);
}

std::string to_hex(const std::string &bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(kDigits[c >> 4]);
        out.push_back(kDigits[c & 15]);
    }
    return out;
}

std::string from_hex(const std::string &hex) {
    if (hex.size() % 2 != 0) {
        throw InputError("hex string of odd length");
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw InputError(std::string("bad hex digit '") + c + "'");
    };
    std::string out(hex.size() / 2, '\0');
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<char>(nibble(hex[2 * i]) * 16 + nibble(hex[2 * i + 1]));
    }
    return out;
}

namespace {

// Ordered partition stored as a colour per vertex; colours are 0..k-1 and
// the cells are ordered by colour.
using Coloring = std::vector<int>;

int num_cells(const Coloring &c) {
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

// Ranks vertices by an arbitrary comparable signature; equal signatures share
// a colour. Only signature comparisons are used, so the result is invariant
// under relabelling.
template <typename Sig> Coloring rank_by(const std::vector<Sig> &sig) {
    std::vector<int> order(sig.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return sig[x] < sig[y]; });
    Coloring c(sig.size());
    int colour = -1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || sig[order[i - 1]] < sig[order[i]]) {
            ++colour;
        }
        c[order[i]] = colour;
    }
    return c;
}

// Colour refinement to the coarsest equitable partition finer than `c`.
Coloring refine(const Graph &g, Coloring c) {
    const std::size_t n = g.num_vertices();
    int cells = num_cells(c);
    std::vector<std::pair<int, std::vector<int>>> sig(n);
    while (true) {
        for (Vertex v = 0; v < n; ++v) {
            sig[v].first = c[v];
            auto &nb = sig[v].second;
            nb.clear();
            for (Vertex w : g.neighbors(v)) {
                nb.push_back(c[w]);
            }
            std::sort(nb.begin(), nb.end());
        }
        Coloring next = rank_by(sig);
        const int next_cells = num_cells(next);
        c = std::move(next);
        if (next_cells == cells) {
            return c;
        }
        cells = next_cells;
    }
}

Coloring individualize(const Coloring &c, Vertex v) {
    std::vector<std::pair<int, int>> sig(c.size());
    for (std::size_t u = 0; u < c.size(); ++u) {
        sig[u] = {c[u], u == v ? 0 : 1};
    }
    return rank_by(sig);
}

void put_u16(std::string &out, std::size_t x) {
    out.push_back(static_cast<char>((x >> 8) & 0xff));
    out.push_back(static_cast<char>(x & 0xff));
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int x, int y) { parent[find(x)] = find(y); }
};

// Individualisation-refinement search for the lexicographically smallest
// certificate, pruned by automorphisms discovered at equivalent leaves.
class CanonicalSearch {
public:
    CanonicalSearch(const Graph &g, Vertex a, Vertex b) : g_(g), a_(a), b_(b) {}

    std::string run(const Coloring &initial) {
        std::vector<Vertex> prefix;
        search(refine(g_, initial), prefix);
        return best_cert_;
    }

private:
    static constexpr int kNoJump = -1;

    std::string certificate(const Coloring &c) const {
        std::string cert;
        put_u16(cert, g_.num_vertices());
        const int la = c[a_];
        const int lb = c[b_];
        put_u16(cert, std::min(la, lb));
        put_u16(cert, std::max(la, lb));
        std::vector<std::pair<int, int>> edges;
        edges.reserve(g_.num_edges());
        for (const Edge &e : g_.edges()) {
            const int x = c[e.u];
            const int y = c[e.v];
            edges.emplace_back(std::min(x, y), std::max(x, y));
        }
        std::sort(edges.begin(), edges.end());
        for (auto [x, y] : edges) {
            put_u16(cert, x);
            put_u16(cert, y);
        }
        return cert;
    }

    static std::vector<Vertex> vertex_order(const Coloring &c) {
        std::vector<Vertex> order(c.size());
        for (std::size_t v = 0; v < c.size(); ++v) {
            order[c[v]] = static_cast<Vertex>(v);
        }
        return order;
    }

    static std::size_t common_prefix(const std::vector<Vertex> &x, const std::vector<Vertex> &y) {
        std::size_t i = 0;
        while (i < x.size() && i < y.size() && x[i] == y[i]) {
            ++i;
        }
        return i;
    }

    void add_automorphism(const std::vector<Vertex> &from, const std::vector<Vertex> &to) {
        std::vector<Vertex> perm(from.size());
        for (std::size_t i = 0; i < from.size(); ++i) {
            perm[from[i]] = to[i];
        }
        generators_.push_back(std::move(perm));
    }

    int leaf(const Coloring &c, const std::vector<Vertex> &prefix) {
        std::string cert = certificate(c);
        std::vector<Vertex> order = vertex_order(c);
        if (first_order_.empty()) {
            first_cert_ = cert;
            first_order_ = order;
            first_path_ = prefix;
            best_cert_ = std::move(cert);
            best_order_ = std::move(order);
            best_path_ = prefix;
            return kNoJump;
        }
        if (cert == first_cert_) {
            add_automorphism(first_order_, order);
            return static_cast<int>(common_prefix(prefix, first_path_));
        }
        if (cert == best_cert_) {
            add_automorphism(best_order_, order);
            return static_cast<int>(common_prefix(prefix, best_path_));
        }
        if (cert < best_cert_) {
            best_cert_ = std::move(cert);
            best_order_ = std::move(order);
            best_path_ = prefix;
        }
        return kNoJump;
    }

    int search(const Coloring &c, std::vector<Vertex> &prefix) {
        const int cells = num_cells(c);
        if (cells == static_cast<int>(c.size())) {
            return leaf(c, prefix);
        }
        // Target: the first smallest non-singleton cell.
        std::vector<int> size(cells, 0);
        for (int col : c) {
            ++size[col];
        }
        int target = -1;
        for (int k = 0; k < cells; ++k) {
            if (size[k] > 1 && (target < 0 || size[k] < size[target])) {
                target = k;
            }
        }
        std::vector<Vertex> members;
        for (std::size_t v = 0; v < c.size(); ++v) {
            if (c[v] == target) {
                members.push_back(static_cast<Vertex>(v));
            }
        }
        const int depth = static_cast<int>(prefix.size());
        std::vector<Vertex> explored;
        for (Vertex v : members) {
            if (!explored.empty() && in_explored_orbit(v, explored, prefix)) {
                continue;
            }
            explored.push_back(v);
            prefix.push_back(v);
            const int jump = search(refine(g_, individualize(c, v)), prefix);
            prefix.pop_back();
            if (jump != kNoJump && jump < depth) {
                return jump;
            }
        }
        return kNoJump;
    }

    bool in_explored_orbit(Vertex v, const std::vector<Vertex> &explored, const std::vector<Vertex> &prefix) const {
        UnionFind orbits(g_.num_vertices());
        bool any = false;
        for (const auto &perm : generators_) {
            const bool fixes_prefix =
                std::all_of(prefix.begin(), prefix.end(), [&](Vertex x) { return perm[x] == x; });
            if (!fixes_prefix) {
                continue;
            }
            any = true;
            for (std::size_t x = 0; x < perm.size(); ++x) {
                orbits.unite(static_cast<int>(x), static_cast<int>(perm[x]));
            }
        }
        if (!any) {
            return false;
        }
        const int root = orbits.find(static_cast<int>(v));
        return std::any_of(explored.begin(), explored.end(),
                           [&](Vertex u) { return orbits.find(static_cast<int>(u)) == root; });
    }

    const Graph &g_;
    Vertex a_;
    Vertex b_;
    std::vector<std::vector<Vertex>> generators_;
    std::string first_cert_;
    std::vector<Vertex> first_order_;
    std::vector<Vertex> first_path_;
    std::string best_cert_;
    std::vector<Vertex> best_order_;
    std::vector<Vertex> best_path_;
};

} // namespace

CanonicalKey canonical_key(const AnchoredSubgraph &s, std::size_t max_vertices) {
    const std::size_t n = s.graph.num_vertices();
    if (n > max_vertices) {
        throw CapacityError("subgraph has " + std::to_string(n) + " vertices, canonical_key cap is " +
                            std::to_string(max_vertices));
    }
    if (n > 0xffff) {
        throw CapacityError("canonical_key supports at most 65535 vertices");
    }
    // Anchor endpoints share a colour so the search covers both orientations.
    const Vertex a_src[] = {s.a};
    const Vertex b_src[] = {s.b};
    const std::vector<int> da = bfs_distances(s.graph, a_src);
    const std::vector<int> db = bfs_distances(s.graph, b_src);
    std::vector<std::pair<int, int>> sig(n);
    for (std::size_t v = 0; v < n; ++v) {
        sig[v] = {std::min(da[v], db[v]), std::max(da[v], db[v])};
    }
    CanonicalSearch search(s.graph, s.a, s.b);
    return search.run(rank_by(sig));
}

SubgraphTally tally_subgraphs(const Graph &g, int p, std::size_t max_vertices) {
    if (p < 0) {
        throw ParameterError("p must be non-negative");
    }
    SubgraphTally tally;
    for (const Edge &e : g.edges()) {
        AnchoredSubgraph s = lightcone_subgraph(edge_neighborhood(g, e, p));
        CanonicalKey key = canonical_key(s, max_vertices);
        auto it = tally.entries.find(key);
        if (it == tally.entries.end()) {
            tally.entries.emplace(std::move(key), SubgraphTally::Entry{std::move(s), 1});
        } else {
            ++it->second.count;
        }
        ++tally.total;
    }
    return tally;
}

} // namespace qaoacut
