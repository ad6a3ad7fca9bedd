#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qaoacut/graph.hpp"

namespace qaoacut {

/// Local structure around an anchor vertex pair. Boundary vertices may have
/// degree below d. Vertices are relabelled so the anchor is (0, 1).
struct AnchoredSubgraph {
    Graph graph;
    Vertex a = 0;
    Vertex b = 1;
    int radius = 0;
    /// Vertex in the source graph for each local vertex (empty for
    /// synthetic constructions).
    std::vector<Vertex> origin;

    bool anchor_is_edge() const { return graph.has_edge(a, b); }
};

/// Induced subgraph on everything within `radius` hops of either endpoint.
AnchoredSubgraph edge_neighborhood(const Graph &g, Edge edge, int radius);

/// Same extraction for an arbitrary vertex pair (used for correlations).
AnchoredSubgraph pair_neighborhood(const Graph &g, Vertex a, Vertex b, int radius);

/// Drops edges joining two vertices at distance exactly `radius` from the
/// anchor pair (outside the anchor's depth-`radius` lightcone).
AnchoredSubgraph lightcone_subgraph(const AnchoredSubgraph &s);

/// The cycle-free p-neighborhood of an edge in a d-regular graph.
AnchoredSubgraph tree_subgraph(int d, int p);

/// p-neighborhood of an edge lying on exactly one cycle of length `cycle_len`,
/// tree-like everywhere else.
AnchoredSubgraph single_cycle_subgraph(int d, int p, int cycle_len);

/// Two vertices at distance `distance` on the d-regular Bethe lattice,
/// together with everything within `radius` of either one.
AnchoredSubgraph bethe_pair_subgraph(int d, int distance, int radius);

/// Opaque byte string; equal iff an isomorphism maps one anchored subgraph
/// onto the other with anchor endpoints mapped to anchor endpoints (either
/// order).
using CanonicalKey = std::string;

inline constexpr std::size_t kDefaultCanonicalCap = 64;

CanonicalKey canonical_key(const AnchoredSubgraph &s, std::size_t max_vertices = kDefaultCanonicalCap);

std::string to_hex(const std::string &bytes);
std::string from_hex(const std::string &hex);

/// Decomposition of a graph's edges into anchored subgraph classes, keyed on
/// the lightcone subgraph of each edge's p-neighborhood.
struct SubgraphTally {
    struct Entry {
        AnchoredSubgraph representative;
        std::uint64_t count = 0;
    };
    std::map<CanonicalKey, Entry> entries;
    std::uint64_t total = 0;
};

SubgraphTally tally_subgraphs(const Graph &g, int p, std::size_t max_vertices = kDefaultCanonicalCap);

} // namespace qaoacut
