#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "qaoacut/angles.hpp"
#include "qaoacut/graph.hpp"
#include "qaoacut/qaoa_network.hpp"
#include "qaoacut/subgraph.hpp"

namespace qaoacut {

// ---------------------------------------------------------------------------
// Fixed angles

struct AngleSearchOptions {
    int restarts = 32;
    std::uint64_t seed = 0;
    /// Step schedule pi/8 * 2^-k for k = 0..stages.
    int stages = 3;
    /// Keep halving the step on the best restart down to `polish_step`.
    bool polish = true;
    double polish_step = 1e-6;
    /// Extra restart seeded from these angles (e.g. interpolated from p-1).
    std::optional<QaoaAngles> warm_start;
    EngineConfig engine{};
};

struct AngleDerivation {
    int restarts = 0;
    std::uint64_t seed = 0;
    long evaluations = 0;
    int best_restart = -1;
    /// Restarts whose local optimum matches the best within 1e-5.
    int agreeing_restarts = 0;
    /// True when at least two restarts reached the best value.
    bool converged = false;
    int width = 0;
};

struct FixedAngleSet {
    int p = 0;
    QaoaAngles angles;
    double tree_value = 0.0;
    AngleDerivation derivation;
};

/// Multi-start coordinate descent on the d-regular p-tree edge expectation
/// over gamma in [-pi/2, pi/2], beta in [-pi/4, pi/4].
FixedAngleSet derive_fixed_angles(int p, const AngleSearchOptions &options = {}, int d = 3);

/// Linear interpolation of depth-p angles to depth p+1 (endpoints padded
/// with zeros); the usual warm start for the next depth.
QaoaAngles interpolate_angles(const QaoaAngles &angles);

// ---------------------------------------------------------------------------
// Expectation table

struct TableEntry {
    double f = 0.0;
    int width = 0;
    double seconds = 0.0;
};

/// f values keyed by (canonical class key, angle digest). Reads are
/// concurrent, inserts are serialised and keep the first value stored.
class ExpectationTable {
public:
    std::optional<TableEntry> find(const CanonicalKey &key, const std::string &digest) const;
    /// Returns false if the entry already existed.
    bool insert(const CanonicalKey &key, const std::string &digest, const TableEntry &entry);
    std::size_t size() const;

    /// CSV rows "key,p,f,width" (key hex-encoded) for one angle set.
    void write_csv(std::ostream &out, const QaoaAngles &angles) const;
    /// Loads rows written by write_csv for the same angle set.
    void read_csv(std::istream &in, const QaoaAngles &angles);

private:
    mutable std::shared_mutex mutex_;
    std::map<std::pair<CanonicalKey, std::string>, TableEntry> entries_;
};

struct NamedClass {
    std::string name; // "tree" or "cycle<L>"
    AnchoredSubgraph subgraph;
};

/// The p-tree plus single-cycle classes of length 3..2p+1.
std::vector<NamedClass> standard_classes(int d, int p);

struct ClassFailure {
    std::size_t index = 0;
    std::string message;
};

/// Contracts each class into `table`; a failing class is reported and the
/// rest still run.
std::vector<ClassFailure> subgraph_table(const QaoaAngles &angles, const std::vector<AnchoredSubgraph> &classes,
                                         ExpectationTable &table, const EngineConfig &config = {},
                                         std::size_t canonical_cap = 256);

// ---------------------------------------------------------------------------
// Whole-graph expectation

struct GraphExpectation {
    double expectation = 0.0;  // <C>
    double cut_fraction = 0.0; // <C>/M
    std::size_t classes = 0;
    std::uint64_t tree_count = 0;
    std::size_t contracted = 0; // classes filled in on the fly
};

/// <C> = sum over classes of M_lambda f_lambda. Missing classes are contracted
/// when `fallback` is set, otherwise a CoverageError lists them.
GraphExpectation graph_expectation(const RegularGraph &g, const QaoaAngles &angles, ExpectationTable &table,
                                   bool fallback = true, const EngineConfig &config = {},
                                   std::size_t canonical_cap = 256);

struct EnsembleStats {
    std::size_t n = 0;
    std::size_t graphs = 0;
    double median = 0.0;
    double variance = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<double> cut_fractions;
};

/// Instance i of size n uses seed CounterRng::derive(seed, n, i).
std::vector<EnsembleStats> ensemble_median(const QaoaAngles &angles, const std::vector<std::size_t> &sizes,
                                           std::size_t graphs_per_size, std::uint64_t seed,
                                           ExpectationTable &table, int workers = 1, int d = 3,
                                           const EngineConfig &config = {});

double median_of(std::vector<double> values);

// ---------------------------------------------------------------------------
// Scaling constant gamma_p

enum class GammaRoute { Tensor, Statevector };

/// sqrt(n) * sqrt(<C^2> - <C>^2) / M for one instance.
double gamma_from_moments(std::size_t n, std::size_t m, double mean, double second);

struct GammaSize {
    std::size_t n = 0;
    std::size_t graphs = 0;
    double gamma = 0.0; // sqrt(n) * RMS of per-graph DeltaC / M
    std::vector<double> per_graph;
};

struct GammaEstimate {
    std::vector<GammaSize> sizes;
    double pooled = 0.0; // mean of per-size values
    double max_relative_spread = 0.0;
};

GammaEstimate estimate_gamma(const QaoaAngles &angles, const std::vector<std::size_t> &sizes,
                             std::size_t graphs_per_size, std::uint64_t seed, GammaRoute route,
                             int workers = 1, int d = 3, const EngineConfig &config = {});

} // namespace qaoacut
