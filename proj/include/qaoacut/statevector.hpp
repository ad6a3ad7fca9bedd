#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qaoacut/angles.hpp"
#include "qaoacut/graph.hpp"

namespace qaoacut {

inline constexpr int kDefaultStatevectorCap = 24;

/// Dense QAOA state; bit i of a basis index is vertex i's spin.
struct StateVector {
    int n = 0;
    Eigen::VectorXcd amplitudes;

    double norm() const { return amplitudes.norm(); }
};

/// Basis state as a bitmask (n <= 64).
using BitMask = std::uint64_t;

StateVector simulate_state(const Graph &g, const QaoaAngles &angles, int cap = kDefaultStatevectorCap);

struct CostMoments {
    double mean = 0.0;   // <C>
    double second = 0.0; // <C^2>

    double variance() const { return second - mean * mean; }
};

CostMoments exact_expectation(const StateVector &sv, const Graph &g);

/// <prod_{i in mask} Z_i>.
double z_product_expectation(const StateVector &sv, BitMask mask);

/// Independent draws from |amplitude|^2 via inverse-CDF lookup.
std::vector<BitMask> sample_bitstrings(const StateVector &sv, std::size_t k, std::uint64_t seed);

int cost_of(BitMask z, const Graph &g);
/// Bits as 0/1 bytes, one per vertex.
int cost_of(std::span<const std::uint8_t> z, const Graph &g);

/// Text export: one 0/1 string per line, character i is vertex i.
void write_bitstrings(std::ostream &out, std::span<const BitMask> samples, int n);

} // namespace qaoacut
