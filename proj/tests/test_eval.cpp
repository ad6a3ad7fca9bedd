#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qaoacut/errors.hpp"
#include "qaoacut/graph.hpp"
#include "qaoacut/qaoa_eval.hpp"
#include "qaoacut/qaoa_network.hpp"
#include "qaoacut/rng.hpp"
#include "qaoacut/statevector.hpp"
#include "qaoacut/subgraph.hpp"

using namespace qaoacut;

namespace {

QaoaAngles random_angles(int p, std::uint64_t seed) {
    CounterRng rng(seed, 29);
    std::vector<double> g(p), b(p);
    for (int i = 0; i < p; ++i) {
        g[i] = (rng.uniform() - 0.5) * std::numbers::pi;
        b[i] = (rng.uniform() - 0.5) * std::numbers::pi / 2;
    }
    return QaoaAngles(g, b);
}

const FixedAngleSet &derived(int p) {
    static std::map<int, FixedAngleSet> cache;
    auto it = cache.find(p);
    if (it == cache.end()) {
        AngleSearchOptions opt;
        opt.seed = 1;
        it = cache.emplace(p, derive_fixed_angles(p, opt)).first;
    }
    return it->second;
}

// First random 3-regular graph with no cycle of length <= 5.
RegularGraph large_girth_graph() {
    for (std::uint64_t seed = 0;; ++seed) {
        RegularGraph g = generate_regular(200, 3, seed);
        const auto gth = girth(g);
        if (gth && *gth > 5) {
            return g;
        }
    }
}

} // namespace

TEST(FixedAngles, TreeValuesMatchTable) {
    EXPECT_NEAR(derived(1).tree_value, 0.6925, 1e-3);
    EXPECT_NEAR(derived(2).tree_value, 0.7559, 1e-3);
    EXPECT_NEAR(derived(3).tree_value, 0.7924, 1e-3);
    EXPECT_LE(derived(1).tree_value, derived(2).tree_value);
    EXPECT_LE(derived(2).tree_value, derived(3).tree_value);
}

TEST(FixedAngles, ProvenanceRecorded) {
    const FixedAngleSet &s = derived(2);
    EXPECT_EQ(s.p, 2);
    EXPECT_EQ(s.angles.p(), 2);
    EXPECT_EQ(s.derivation.restarts, 32);
    EXPECT_EQ(s.derivation.seed, 1u);
    EXPECT_GT(s.derivation.evaluations, 0);
    EXPECT_GE(s.derivation.best_restart, 0);
    EXPECT_TRUE(s.derivation.converged);
    EXPECT_GE(s.angles.gammas()[0], 0.0);
    EXPECT_NEAR(edge_expectation(tree_subgraph(3, 2), s.angles), s.tree_value, 1e-12);
}

TEST(FixedAngles, DeterministicAndValidated) {
    AngleSearchOptions opt;
    opt.seed = 4;
    opt.restarts = 3;
    const FixedAngleSet a = derive_fixed_angles(1, opt);
    const FixedAngleSet b = derive_fixed_angles(1, opt);
    EXPECT_EQ(a.angles, b.angles);
    EXPECT_THROW(derive_fixed_angles(0, opt), ParameterError);
}

TEST(FixedAngles, InterpolateKeepsEndpoints) {
    const QaoaAngles a({0.2, 0.4}, {0.3, 0.1});
    const QaoaAngles next = interpolate_angles(a);
    ASSERT_EQ(next.p(), 3);
    EXPECT_NEAR(next.gammas()[0], 0.2, 1e-15);
    EXPECT_NEAR(next.gammas()[2], 0.4, 1e-15);
    EXPECT_NEAR(next.gammas()[1], 0.3, 1e-15);
    EXPECT_NEAR(next.betas()[0], 0.3, 1e-15);
    EXPECT_NEAR(next.betas()[2], 0.1, 1e-15);
}

TEST(SubgraphTable, CycleValues) {
    ExpectationTable table;
    const auto classes = standard_classes(3, 2);
    ASSERT_EQ(classes.size(), 4u);
    EXPECT_EQ(classes[0].name, "tree");
    EXPECT_EQ(classes[3].name, "cycle5");
    std::vector<AnchoredSubgraph> subs;
    for (const auto &c : classes) {
        subs.push_back(c.subgraph);
    }
    const QaoaAngles &a = derived(2).angles;
    EXPECT_TRUE(subgraph_table(a, subs, table).empty());
    EXPECT_EQ(table.size(), 4u);
    auto f = [&](std::size_t i) { return table.find(canonical_key(subs[i], 256), a.digest())->f; };
    EXPECT_NEAR(f(0), 0.7559, 1e-3);
    EXPECT_NEAR(f(1), 0.6457, 1e-3);
    EXPECT_NEAR(f(2), 0.7905, 1e-3);
    EXPECT_NEAR(f(3), 0.7503, 1e-3);
}

TEST(SubgraphTable, CycleSixAtP3) {
    ExpectationTable table;
    const AnchoredSubgraph c6 = single_cycle_subgraph(3, 3, 6);
    EXPECT_TRUE(subgraph_table(derived(3).angles, {c6}, table).empty());
    EXPECT_NEAR(table.find(canonical_key(c6, 256), derived(3).angles.digest())->f, 0.7971, 1e-3);
}

TEST(SubgraphTable, FailuresAreReportedPerEntry) {
    ExpectationTable table;
    EngineConfig cfg;
    cfg.limits.width_cap = 1;
    const auto failures =
        subgraph_table(random_angles(1, 0), {tree_subgraph(3, 1), single_cycle_subgraph(3, 1, 3)}, table, cfg);
    EXPECT_EQ(failures.size(), 2u);
    EXPECT_EQ(failures[1].index, 1u);
}

TEST(ExpectationTable, CsvRoundTrip) {
    ExpectationTable table;
    const QaoaAngles a = random_angles(1, 3);
    subgraph_table(a, {tree_subgraph(3, 1), single_cycle_subgraph(3, 1, 3)}, table);
    std::stringstream ss;
    table.write_csv(ss, a);
    EXPECT_EQ(ss.str().substr(0, 14), "key,p,f,width\n");
    ExpectationTable back;
    back.read_csv(ss, a);
    EXPECT_EQ(back.size(), 2u);
    const auto key = canonical_key(tree_subgraph(3, 1), 256);
    EXPECT_NEAR(back.find(key, a.digest())->f, table.find(key, a.digest())->f, 1e-12);
    std::stringstream again;
    table.write_csv(again, a);
    ExpectationTable other;
    EXPECT_THROW(other.read_csv(again, random_angles(2, 0)), InputError);
    std::stringstream bad("nope\n");
    EXPECT_THROW(other.read_csv(bad, a), InputError);
}

TEST(ExpectationTable, RejectsOutOfRange) {
    ExpectationTable table;
    EXPECT_THROW(table.insert("k", "d", TableEntry{1.5, 1, 0}), ContractViolation);
    EXPECT_TRUE(table.insert("k", "d", TableEntry{0.5, 1, 0}));
    EXPECT_FALSE(table.insert("k", "d", TableEntry{0.6, 1, 0}));
    EXPECT_DOUBLE_EQ(table.find("k", "d")->f, 0.5);
}

TEST(GraphExpectation, LargeGirthGivesTreeValue) {
    const RegularGraph g = large_girth_graph();
    ExpectationTable table;
    const QaoaAngles &a = derived(2).angles;
    const GraphExpectation r = graph_expectation(g, a, table);
    EXPECT_EQ(r.classes, 1u);
    EXPECT_EQ(r.tree_count, g.num_edges());
    EXPECT_NEAR(r.cut_fraction, derived(2).tree_value, 1e-12);
}

TEST(GraphExpectation, MatchesStatevector) {
    for (int inst = 0; inst < 4; ++inst) {
        const int p = 1 + inst % 2;
        const RegularGraph g = generate_regular(12, 3, 900 + inst);
        const QaoaAngles a = random_angles(p, inst);
        ExpectationTable table;
        const GraphExpectation r = graph_expectation(g, a, table);
        const CostMoments exact = exact_expectation(simulate_state(g, a), g);
        EXPECT_NEAR(r.expectation, exact.mean, 1e-8);
        EXPECT_NEAR(r.cut_fraction, exact.mean / g.num_edges(), 1e-8);
    }
}

TEST(GraphExpectation, DecompositionEqualsDirectSum) {
    const RegularGraph g = generate_regular(30, 3, 12);
    const QaoaAngles a = random_angles(2, 5);
    ExpectationTable table;
    const GraphExpectation r = graph_expectation(g, a, table);
    EXPECT_EQ(r.contracted, r.classes);
    double direct = 0.0;
    for (const Edge &e : g.edges()) {
        direct += edge_expectation(edge_neighborhood(g, e, 2), a);
    }
    EXPECT_NEAR(r.expectation, direct, 1e-9);
    EXPECT_NEAR(r.expectation, cost_expectation(g, a), 1e-9);
}

TEST(GraphExpectation, ZeroAnglesGiveHalf) {
    const RegularGraph g = generate_regular(20, 3, 1);
    ExpectationTable table;
    EXPECT_NEAR(graph_expectation(g, QaoaAngles::zeros(2), table).cut_fraction, 0.5, 1e-12);
}

TEST(GraphExpectation, CoverageErrorListsMissing) {
    const RegularGraph g = generate_regular(20, 3, 1);
    ExpectationTable table;
    try {
        graph_expectation(g, random_angles(1, 1), table, false);
        FAIL() << "expected CoverageError";
    } catch (const CoverageError &e) {
        EXPECT_FALSE(e.missing().empty());
        for (const auto &k : e.missing()) {
            EXPECT_EQ(from_hex(k).size() * 2, k.size());
        }
    }
    graph_expectation(g, random_angles(1, 1), table, true);
    EXPECT_NO_THROW(graph_expectation(g, random_angles(1, 1), table, false));
}

TEST(Ensemble, K4Singleton) {
    ExpectationTable table;
    const QaoaAngles a = random_angles(1, 2);
    const auto stats = ensemble_median(a, {4}, 3, 0, table);
    ASSERT_EQ(stats.size(), 1u);
    ExpectationTable t2;
    const double k4 = graph_expectation(complete_graph(4), a, t2).cut_fraction;
    EXPECT_NEAR(stats[0].median, k4, 1e-12);
    EXPECT_NEAR(stats[0].min, k4, 1e-12);
    EXPECT_NEAR(stats[0].max, k4, 1e-12);
}

TEST(Ensemble, DeterministicAndWorkerIndependent) {
    const QaoaAngles &a = derived(1).angles;
    ExpectationTable t1, t2;
    const auto s1 = ensemble_median(a, {32, 64}, 6, 5, t1, 1);
    const auto s2 = ensemble_median(a, {32, 64}, 6, 5, t2, 3);
    ASSERT_EQ(s1.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(s1[i].cut_fractions, s2[i].cut_fractions);
        EXPECT_EQ(s1[i].graphs, 6u);
    }
}

TEST(Ensemble, VarianceShrinksWithSize) {
    const QaoaAngles &a = derived(1).angles;
    ExpectationTable table;
    const auto s = ensemble_median(a, {64, 128, 256}, 40, 17, table);
    EXPECT_GT(s[0].variance, s[1].variance);
    EXPECT_GT(s[1].variance, s[2].variance);
}

TEST(Gamma, DegenerateSingleEdge) {
    EXPECT_NEAR(gamma_from_moments(2, 1, 0.7, 0.7), std::sqrt(2.0) * std::sqrt(0.7 - 0.49), 1e-15);
    EXPECT_DOUBLE_EQ(gamma_from_moments(4, 6, 3.0, 9.0), 0.0);
}

TEST(Gamma, RoutesAgree) {
    const QaoaAngles &a = derived(1).angles;
    const GammaEstimate t = estimate_gamma(a, {12}, 3, 2, GammaRoute::Tensor);
    const GammaEstimate s = estimate_gamma(a, {12}, 3, 2, GammaRoute::Statevector);
    ASSERT_EQ(t.sizes[0].per_graph.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(t.sizes[0].per_graph[i], s.sizes[0].per_graph[i], 1e-8);
    }
}

TEST(MedianOf, EvenAndOdd) {
    EXPECT_DOUBLE_EQ(median_of({3, 1, 2}), 2.0);
    EXPECT_DOUBLE_EQ(median_of({4, 1, 2, 3}), 2.5);
}
