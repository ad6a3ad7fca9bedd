#include "qaoacut/graph.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qaoacut/errors.hpp"
#include "qaoacut/rng.hpp"

namespace qaoacut {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    Graph g(n);
    for (const Edge &e : edges) {
        g.add_edge(e.u, e.v);
    }
    return g;
}

void Graph::add_edge(Vertex a, Vertex b) {
    if (a >= adjacency_.size() || b >= adjacency_.size()) {
        throw InputError("edge endpoint out of range: " + std::to_string(a) + " " + std::to_string(b));
    }
    if (a == b) {
        throw InputError("self-loop at vertex " + std::to_string(a));
    }
    if (has_edge(a, b)) {
        throw InputError("parallel edge " + std::to_string(a) + " " + std::to_string(b));
    }
    auto &na = adjacency_[a];
    na.insert(std::upper_bound(na.begin(), na.end(), b), b);
    auto &nb = adjacency_[b];
    nb.insert(std::upper_bound(nb.begin(), nb.end(), a), a);
    const Edge e(a, b);
    edges_.insert(std::upper_bound(edges_.begin(), edges_.end(), e), e);
}

bool Graph::has_edge(Vertex a, Vertex b) const {
    if (a >= adjacency_.size() || b >= adjacency_.size()) {
        return false;
    }
    const auto &na = adjacency_[a];
    return std::binary_search(na.begin(), na.end(), b);
}

Graph Graph::induced(std::span<const Vertex> keep) const {
    std::vector<Vertex> relabel(num_vertices(), kUnreachable);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        relabel[keep[i]] = static_cast<Vertex>(i);
    }
    Graph sub(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        for (Vertex w : adjacency_[keep[i]]) {
            const Vertex j = relabel[w];
            if (j != static_cast<Vertex>(kUnreachable) && i < j) {
                sub.add_edge(static_cast<Vertex>(i), j);
            }
        }
    }
    return sub;
}

RegularGraph::RegularGraph(Graph graph, int degree) : graph_(std::move(graph)), degree_(degree) {
    const std::size_t n = graph_.num_vertices();
    if (degree < 0) {
        throw ParameterError("negative degree");
    }
    for (Vertex v = 0; v < n; ++v) {
        if (graph_.degree(v) != static_cast<std::size_t>(degree)) {
            throw InputError("vertex " + std::to_string(v) + " has degree " + std::to_string(graph_.degree(v)) +
                             ", expected " + std::to_string(degree));
        }
    }
    if (graph_.num_edges() * 2 != n * static_cast<std::size_t>(degree)) {
        throw InputError("edge count does not equal n d / 2");
    }
}

RegularGraph generate_regular(std::size_t n, int d, std::uint64_t seed) {
    if (n == 0 || d <= 0) {
        throw ParameterError("n and d must be positive");
    }
    if ((n * static_cast<std::size_t>(d)) % 2 != 0) {
        throw ParameterError("n*d must be even (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
    }
    if (static_cast<std::size_t>(d) >= n) {
        throw ParameterError("degree must be smaller than n");
    }
    CounterRng rng(seed, 0x6e4a);
    std::vector<Vertex> points(n * d);
    constexpr int kMaxAttempts = 1'000'000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            points[i] = static_cast<Vertex>(i / d);
        }
        rng.shuffle(points);
        Graph g(n);
        bool simple = true;
        for (std::size_t i = 0; i < points.size() && simple; i += 2) {
            const Vertex a = points[i];
            const Vertex b = points[i + 1];
            if (a == b || g.has_edge(a, b)) {
                simple = false;
            } else {
                g.add_edge(a, b);
            }
        }
        if (simple) {
            return RegularGraph(std::move(g), d);
        }
    }
    throw CapacityError("configuration model failed to produce a simple graph");
}

RegularGraph complete_graph(std::size_t n) {
    Graph g(n);
    for (Vertex a = 0; a < n; ++a) {
        for (Vertex b = a + 1; b < n; ++b) {
            g.add_edge(a, b);
        }
    }
    return RegularGraph(std::move(g), static_cast<int>(n) - 1);
}

RegularGraph cycle_graph(std::size_t n) {
    if (n < 3) {
        throw ParameterError("cycle needs at least 3 vertices");
    }
    Graph g(n);
    for (Vertex a = 0; a < n; ++a) {
        g.add_edge(a, static_cast<Vertex>((a + 1) % n));
    }
    return RegularGraph(std::move(g), 2);
}

RegularGraph petersen_graph() {
    Graph g(10);
    for (Vertex i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);         // outer pentagon
        g.add_edge(i, i + 5);               // spokes
        g.add_edge(i + 5, (i + 2) % 5 + 5); // inner pentagram
    }
    return RegularGraph(std::move(g), 3);
}

std::vector<int> bfs_distances(const Graph &g, std::span<const Vertex> sources, int max_depth) {
    std::vector<int> dist(g.num_vertices(), kUnreachable);
    std::deque<Vertex> queue;
    for (Vertex s : sources) {
        if (dist[s] != 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        if (dist[v] >= max_depth) {
            continue;
        }
        for (Vertex w : g.neighbors(v)) {
            if (dist[w] == kUnreachable) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

std::optional<int> girth(const Graph &g) {
    int best = kUnreachable;
    const std::size_t n = g.num_vertices();
    std::vector<int> dist(n);
    std::vector<Vertex> parent(n);
    for (Vertex s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), kUnreachable);
        dist[s] = 0;
        parent[s] = s;
        std::deque<Vertex> queue{s};
        while (!queue.empty()) {
            const Vertex v = queue.front();
            queue.pop_front();
            if (2 * dist[v] + 1 >= best) {
                break;
            }
            for (Vertex w : g.neighbors(v)) {
                if (dist[w] == kUnreachable) {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                } else if (parent[v] != w) {
                    best = std::min(best, dist[v] + dist[w] + 1);
                }
            }
        }
    }
    if (best == kUnreachable) {
        return std::nullopt;
    }
    return best;
}

namespace {

struct CycleCounter {
    const Graph &g;
    int max_len;
    std::vector<std::uint64_t> counts;
    std::vector<char> on_path;
    std::vector<Vertex> path;

    void extend(Vertex start) {
        const Vertex tip = path.back();
        const int len = static_cast<int>(path.size());
        for (Vertex w : g.neighbors(tip)) {
            if (w == start) {
                // Each cycle is seen in both directions; keep the one whose
                // second vertex is smaller than its last.
                if (len >= 3 && path[1] < tip) {
                    ++counts[len];
                }
            } else if (w > start && !on_path[w] && len < max_len) {
                on_path[w] = 1;
                path.push_back(w);
                extend(start);
                path.pop_back();
                on_path[w] = 0;
            }
        }
    }
};

} // namespace

std::map<int, std::uint64_t> count_cycles(const Graph &g, int max_len, int length_cap) {
    if (max_len > length_cap) {
        throw CapacityError("cycle length " + std::to_string(max_len) + " exceeds cap " + std::to_string(length_cap));
    }
    CycleCounter counter{g, max_len, std::vector<std::uint64_t>(std::max(max_len, 3) + 1, 0),
                         std::vector<char>(g.num_vertices(), 0), {}};
    for (Vertex s = 0; s < g.num_vertices(); ++s) {
        counter.path = {s};
        counter.on_path[s] = 1;
        counter.extend(s);
        counter.on_path[s] = 0;
    }
    std::map<int, std::uint64_t> result;
    for (int l = 3; l <= max_len; ++l) {
        result[l] = counter.counts[l];
    }
    return result;
}

void write_edge_list(std::ostream &out, const RegularGraph &g) {
    out << g.num_vertices() << ' ' << g.degree() << '\n';
    for (const Edge &e : g.edges()) {
        out << e.u << ' ' << e.v << '\n';
    }
}

RegularGraph read_edge_list(std::istream &in) {
    std::string line;
    std::size_t n = 0;
    int d = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            break;
        }
    }
    {
        std::istringstream header(line);
        if (!(header >> n >> d)) {
            throw InputError("edge list header must be \"n d\"");
        }
    }
    Graph g(n);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        long long u = -1;
        long long v = -1;
        if (!(row >> u >> v) || u < 0 || v < 0) {
            throw InputError("bad edge on line " + std::to_string(line_no) + ": " + line);
        }
        g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    return RegularGraph(std::move(g), d);
}

} // namespace qaoacut
