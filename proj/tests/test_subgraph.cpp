#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "qaoacut/errors.hpp"
#include "qaoacut/graph.hpp"
#include "qaoacut/rng.hpp"
#include "qaoacut/subgraph.hpp"

using namespace qaoacut;

namespace {

AnchoredSubgraph relabel(const AnchoredSubgraph &s, std::uint64_t seed) {
    std::vector<Vertex> perm(s.graph.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng rng(seed);
    rng.shuffle(perm);
    Graph g(perm.size());
    for (const Edge &e : s.graph.edges()) {
        g.add_edge(perm[e.u], perm[e.v]);
    }
    AnchoredSubgraph out;
    out.graph = g;
    out.a = perm[s.a];
    out.b = perm[s.b];
    out.radius = s.radius;
    return out;
}

} // namespace

TEST(CanonicalKey, InvariantUnderRelabelling) {
    const RegularGraph g = generate_regular(40, 3, 3);
    for (std::size_t i = 0; i < 10; ++i) {
        const AnchoredSubgraph s = edge_neighborhood(g, g.edges()[i], 2);
        const CanonicalKey k = canonical_key(s);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            EXPECT_EQ(canonical_key(relabel(s, seed)), k);
        }
    }
}

TEST(CanonicalKey, InvariantUnderAnchorSwap) {
    const RegularGraph g = generate_regular(30, 3, 8);
    for (const Edge &e : g.edges()) {
        AnchoredSubgraph s = edge_neighborhood(g, e, 2);
        const CanonicalKey k = canonical_key(s);
        std::swap(s.a, s.b);
        EXPECT_EQ(canonical_key(s), k);
    }
}

TEST(CanonicalKey, DistinguishesClasses) {
    const CanonicalKey tree = canonical_key(tree_subgraph(3, 2));
    EXPECT_NE(tree, canonical_key(single_cycle_subgraph(3, 2, 3)));
    EXPECT_NE(tree, canonical_key(single_cycle_subgraph(3, 2, 4)));
    EXPECT_NE(canonical_key(single_cycle_subgraph(3, 2, 4)), canonical_key(single_cycle_subgraph(3, 2, 5)));
    EXPECT_NE(tree, canonical_key(tree_subgraph(3, 1)));
}

TEST(CanonicalKey, AnchorPositionMatters) {
    // Middle edge vs end edge of the path 0-1-2-3.
    Graph path(4);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    path.add_edge(2, 3);
    AnchoredSubgraph middle{path, 1, 2, 1, {}};
    AnchoredSubgraph end{path, 0, 1, 1, {}};
    EXPECT_NE(canonical_key(middle), canonical_key(end));
}

TEST(CanonicalKey, CapacityError) {
    EXPECT_THROW(canonical_key(tree_subgraph(3, 5), 32), CapacityError);
}

TEST(CanonicalKey, HexRoundTrip) {
    const CanonicalKey k = canonical_key(tree_subgraph(3, 2));
    EXPECT_EQ(from_hex(to_hex(k)), k);
    EXPECT_THROW(from_hex("abc"), InputError);
}

TEST(TreeSubgraph, Size) {
    for (int p = 1; p <= 4; ++p) {
        const AnchoredSubgraph t = tree_subgraph(3, p);
        std::size_t expected = 0;
        for (int k = 0; k <= p; ++k) {
            expected += 2 * static_cast<std::size_t>(std::pow(2, k));
        }
        EXPECT_EQ(t.graph.num_vertices(), expected);
        EXPECT_EQ(t.graph.num_edges(), expected - 1);
        EXPECT_TRUE(t.anchor_is_edge());
    }
}

TEST(SingleCycle, ContainsOneCycle) {
    for (int l = 3; l <= 5; ++l) {
        const AnchoredSubgraph s = single_cycle_subgraph(3, 2, l);
        EXPECT_EQ(girth(s.graph), l);
        EXPECT_EQ(s.graph.num_edges(), s.graph.num_vertices());
    }
}

TEST(EdgeNeighborhood, TreeLikeInLargeGirthGraph) {
    const RegularGraph g = generate_regular(2000, 3, 1);
    const CanonicalKey tree = canonical_key(tree_subgraph(3, 1));
    std::size_t matches = 0;
    for (const Edge &e : g.edges()) {
        if (canonical_key(edge_neighborhood(g, e, 1)) == tree) {
            ++matches;
        }
    }
    EXPECT_GT(matches, g.num_edges() * 9 / 10);
}

TEST(Tally, PetersenAtDepthTwo) {
    const RegularGraph pg = petersen_graph();
    const SubgraphTally t = tally_subgraphs(pg, 2);
    EXPECT_EQ(t.total, 15u);
    ASSERT_EQ(t.entries.size(), 1u);
    EXPECT_EQ(t.entries.begin()->second.count, 15u);
    const SubgraphTally t1 = tally_subgraphs(pg, 1);
    ASSERT_EQ(t1.entries.size(), 1u);
    EXPECT_EQ(t1.entries.begin()->first, canonical_key(tree_subgraph(3, 1)));
}

TEST(Tally, CountsSumToEdges) {
    const RegularGraph g = generate_regular(60, 3, 21);
    const SubgraphTally t = tally_subgraphs(g, 2);
    std::uint64_t sum = 0;
    for (const auto &[key, entry] : t.entries) {
        sum += entry.count;
        EXPECT_EQ(canonical_key(entry.representative), key);
    }
    EXPECT_EQ(sum, g.num_edges());
    EXPECT_EQ(t.total, g.num_edges());
}

TEST(Tally, K4SingleClass) {
    const SubgraphTally t = tally_subgraphs(complete_graph(4), 1);
    ASSERT_EQ(t.entries.size(), 1u);
    EXPECT_EQ(t.entries.begin()->second.count, 6u);
}

TEST(BethePair, Distance) {
    const AnchoredSubgraph s = bethe_pair_subgraph(3, 3, 1);
    const Vertex src[] = {s.a};
    EXPECT_EQ(bfs_distances(s.graph, src)[s.b], 3);
    EXPECT_FALSE(girth(s.graph).has_value());
}

TEST(EdgeNeighborhood, K4AtDepthOne) {
    const RegularGraph k4 = complete_graph(4);
    const AnchoredSubgraph s = edge_neighborhood(k4, Edge(1, 3), 1);
    EXPECT_EQ(s.graph.num_vertices(), 4u);
    EXPECT_EQ(s.graph.num_edges(), 6u);
    EXPECT_TRUE(s.anchor_is_edge());
    EXPECT_NE(canonical_key(s), canonical_key(tree_subgraph(3, 1)));
}

TEST(EdgeNeighborhood, PetersenAtDepthTwoCoversGraph) {
    const RegularGraph pg = petersen_graph();
    for (const Edge &e : pg.edges()) {
        const AnchoredSubgraph s = edge_neighborhood(pg, e, 2);
        EXPECT_EQ(s.graph.num_vertices(), 10u);
        EXPECT_EQ(s.graph.num_edges(), 15u);
        EXPECT_EQ(s.origin[s.a], e.u);
        EXPECT_EQ(s.origin[s.b], e.v);
        EXPECT_EQ(girth(s.graph), 5);
    }
}

TEST(EdgeNeighborhood, PetersenAtDepthOneIsTree) {
    const RegularGraph pg = petersen_graph();
    const CanonicalKey tree = canonical_key(tree_subgraph(3, 1));
    for (const Edge &e : pg.edges()) {
        EXPECT_EQ(canonical_key(edge_neighborhood(pg, e, 1)), tree);
    }
}

TEST(EdgeNeighborhood, MissingEdge) {
    EXPECT_THROW(edge_neighborhood(petersen_graph(), Edge(0, 9), 1), InputError);
}

TEST(Tally, PetersenHasNoTreeClassAtDepthTwo) {
    const SubgraphTally t = tally_subgraphs(petersen_graph(), 2);
    EXPECT_EQ(t.entries.count(canonical_key(tree_subgraph(3, 2))), 0u);
}

TEST(Lightcone, LargeGirthNeighborhoodIsTree) {
    const CanonicalKey tree = canonical_key(tree_subgraph(3, 2));
    const RegularGraph g = generate_regular(400, 3, 2);
    std::size_t checked = 0;
    for (const Edge &e : g.edges()) {
        const AnchoredSubgraph s = edge_neighborhood(g, e, 2);
        const AnchoredSubgraph t = lightcone_subgraph(s);
        EXPECT_EQ(t.graph.num_vertices(), s.graph.num_vertices());
        EXPECT_LE(t.graph.num_edges(), s.graph.num_edges());
        EXPECT_TRUE(t.anchor_is_edge());
        if (!girth(t.graph).has_value()) {
            EXPECT_EQ(canonical_key(t), tree);
            ++checked;
        }
    }
    EXPECT_GT(checked, g.num_edges() / 2);
}

TEST(Lightcone, DropsOnlyOuterEdges) {
    // Six-cycle through the anchor edge: its middle edge joins two vertices
    // at distance 2 and is dropped at radius 2 but kept at radius 3.
    const RegularGraph c6 = cycle_graph(6);
    const AnchoredSubgraph s2 = lightcone_subgraph(edge_neighborhood(c6, Edge(0, 1), 2));
    EXPECT_EQ(s2.graph.num_edges(), 5u);
    EXPECT_FALSE(girth(s2.graph).has_value());
    const AnchoredSubgraph s3 = lightcone_subgraph(edge_neighborhood(c6, Edge(0, 1), 3));
    EXPECT_EQ(s3.graph.num_edges(), 6u);
}
