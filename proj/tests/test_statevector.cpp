#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qaoacut/errors.hpp"
#include "qaoacut/graph.hpp"
#include "qaoacut/rng.hpp"
#include "qaoacut/statevector.hpp"

using namespace qaoacut;

namespace {

QaoaAngles random_angles(int p, std::uint64_t seed) {
    CounterRng rng(seed, 23);
    std::vector<double> g(p), b(p);
    for (int i = 0; i < p; ++i) {
        g[i] = (rng.uniform() - 0.5) * std::numbers::pi;
        b[i] = (rng.uniform() - 0.5) * std::numbers::pi / 2;
    }
    return QaoaAngles(g, b);
}

} // namespace

TEST(Simulate, DepthZeroIsUniform) {
    const RegularGraph g = generate_regular(10, 3, 1);
    const StateVector sv = simulate_state(g, QaoaAngles{});
    const double a = std::pow(2.0, -5.0);
    for (Eigen::Index i = 0; i < sv.amplitudes.size(); ++i) {
        EXPECT_NEAR(std::abs(sv.amplitudes[i] - std::complex<double>(a, 0)), 0.0, 1e-14);
    }
}

TEST(Simulate, ZeroGammaKeepsUniformDistribution) {
    const RegularGraph g = generate_regular(8, 3, 2);
    const StateVector sv = simulate_state(g, QaoaAngles({0.0, 0.0}, {0.3, -0.7}));
    for (Eigen::Index i = 0; i < sv.amplitudes.size(); ++i) {
        EXPECT_NEAR(std::norm(sv.amplitudes[i]), 1.0 / 256, 1e-14);
    }
}

TEST(Simulate, NormPreserved) {
    const RegularGraph g = generate_regular(12, 3, 3);
    EXPECT_NEAR(simulate_state(g, random_angles(2, 1)).norm(), 1.0, 1e-10);
    EXPECT_NEAR(simulate_state(g, random_angles(5, 2)).norm(), 1.0, 1e-10);
}

TEST(Simulate, CapacityError) {
    EXPECT_THROW(simulate_state(generate_regular(26, 3, 0), random_angles(1, 0)), CapacityError);
    EXPECT_THROW(simulate_state(generate_regular(14, 3, 0), random_angles(1, 0), 12), CapacityError);
}

TEST(Simulate, SpinFlipSymmetry) {
    const RegularGraph g = generate_regular(10, 3, 4);
    const StateVector sv = simulate_state(g, random_angles(3, 5));
    const std::uint64_t all = (1u << 10) - 1;
    for (std::uint64_t z = 0; z < (1u << 10); ++z) {
        EXPECT_NEAR(std::abs(sv.amplitudes[z]), std::abs(sv.amplitudes[z ^ all]), 1e-12);
    }
    for (int q = 0; q < 10; ++q) {
        EXPECT_LT(std::abs(z_product_expectation(sv, BitMask{1} << q)), 1e-9);
    }
}

TEST(ExactExpectation, UniformState) {
    const RegularGraph g = generate_regular(10, 3, 5);
    const CostMoments m = exact_expectation(simulate_state(g, QaoaAngles{}), g);
    EXPECT_NEAR(m.mean, 7.5, 1e-12);
}

TEST(ExactExpectation, UniformK4SecondMoment) {
    const RegularGraph k4 = complete_graph(4);
    double sum = 0.0;
    for (int z = 0; z < 16; ++z) {
        int cut = 0;
        for (int u = 0; u < 4; ++u) {
            for (int v = u + 1; v < 4; ++v) {
                cut += ((z >> u) & 1) != ((z >> v) & 1);
            }
        }
        sum += cut * cut;
    }
    EXPECT_DOUBLE_EQ(sum / 16, 10.5);
    const CostMoments m = exact_expectation(simulate_state(k4, QaoaAngles{}), k4);
    EXPECT_NEAR(m.second, sum / 16, 1e-12);
    EXPECT_NEAR(m.mean, 3.0, 1e-12);
}

TEST(ExactExpectation, VarianceNonNegativeAndSizeChecked) {
    const RegularGraph g = generate_regular(12, 3, 6);
    const CostMoments m = exact_expectation(simulate_state(g, random_angles(2, 7)), g);
    EXPECT_GE(m.variance(), -1e-12);
    EXPECT_THROW(exact_expectation(simulate_state(g, random_angles(1, 0)), generate_regular(10, 3, 0)), InputError);
}

TEST(CostOf, Basics) {
    const RegularGraph k4 = complete_graph(4);
    EXPECT_EQ(cost_of(BitMask{0}, k4), 0);
    EXPECT_EQ(cost_of(BitMask{0b1100}, k4), 4);
    const std::vector<std::uint8_t> bits = {0, 0, 1, 1};
    EXPECT_EQ(cost_of(std::span<const std::uint8_t>(bits), k4), 4);
    const RegularGraph c8 = cycle_graph(8);
    EXPECT_EQ(cost_of(BitMask{0b01010101}, c8), 8);
    const std::vector<std::uint8_t> short_bits = {0, 1};
    EXPECT_THROW(cost_of(std::span<const std::uint8_t>(short_bits), k4), InputError);
}

TEST(Sample, UniformMarginals) {
    const RegularGraph g = generate_regular(10, 3, 8);
    const StateVector sv = simulate_state(g, QaoaAngles{});
    const std::size_t k = 20000;
    const auto samples = sample_bitstrings(sv, k, 3);
    ASSERT_EQ(samples.size(), k);
    const double sd = std::sqrt(0.25 / k);
    for (int q = 0; q < 10; ++q) {
        std::size_t ones = 0;
        for (BitMask z : samples) {
            ones += (z >> q) & 1;
        }
        EXPECT_NEAR(static_cast<double>(ones) / k, 0.5, 3 * sd + 1e-3);
    }
}

TEST(Sample, BasisStateAlwaysSampled) {
    StateVector sv;
    sv.n = 5;
    sv.amplitudes = Eigen::VectorXcd::Zero(32);
    sv.amplitudes[19] = 1.0;
    for (BitMask z : sample_bitstrings(sv, 500, 1)) {
        EXPECT_EQ(z, 19u);
    }
}

TEST(Sample, DeterministicInSeed) {
    const RegularGraph g = generate_regular(10, 3, 8);
    const StateVector sv = simulate_state(g, random_angles(1, 1));
    EXPECT_EQ(sample_bitstrings(sv, 100, 5), sample_bitstrings(sv, 100, 5));
    EXPECT_NE(sample_bitstrings(sv, 100, 5), sample_bitstrings(sv, 100, 6));
}

TEST(Sample, MeanCutMatchesExactAtN16) {
    const RegularGraph g = generate_regular(16, 3, 9);
    const StateVector sv = simulate_state(g, QaoaAngles({0.6154797087}, {std::numbers::pi / 8}));
    const CostMoments exact = exact_expectation(sv, g);
    const std::size_t k = 20000;
    double sum = 0.0;
    for (BitMask z : sample_bitstrings(sv, k, 11)) {
        sum += cost_of(z, g);
    }
    const double se = std::sqrt(exact.variance() / k);
    EXPECT_NEAR(sum / k, exact.mean, 3 * se);
}

TEST(Sample, WriteBitstrings) {
    std::ostringstream out;
    const std::vector<BitMask> samples = {0b0011, 0b1000};
    write_bitstrings(out, samples, 4);
    EXPECT_EQ(out.str(), "1100\n0001\n");
}

TEST(ZProduct, MatchesDirectSum) {
    const RegularGraph g = generate_regular(8, 3, 10);
    const StateVector sv = simulate_state(g, random_angles(2, 3));
    const BitMask mask = 0b10010010;
    double direct = 0.0;
    for (std::uint64_t z = 0; z < 256; ++z) {
        direct += std::norm(sv.amplitudes[z]) * ((std::popcount(z & mask) % 2) ? -1.0 : 1.0);
    }
    EXPECT_NEAR(z_product_expectation(sv, mask), direct, 1e-13);
}
