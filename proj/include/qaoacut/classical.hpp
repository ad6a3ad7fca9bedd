#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qaoacut/graph.hpp"

namespace qaoacut {

using Bits = std::vector<std::uint8_t>;

struct FlipResult {
    Bits bits;
    int cut = 0;
    int sweeps = 0;
};

/// One FLIP descent: random bipartition, then sweeps over a freshly shuffled
/// vertex order flipping on strict gain, until a sweep makes no flip.
FlipResult flip_solve(const Graph &g, std::uint64_t seed);

/// True if no single-vertex flip increases the cut.
bool is_flip_local_optimum(const Graph &g, std::span<const std::uint8_t> bits);

int cut_value(const Graph &g, std::span<const std::uint8_t> bits);

struct ProfilePoint {
    double elapsed = 0.0; // seconds since the solver started
    int cut = 0;
};

enum class ProfileStatus { Ok, Empty, Invalid };

/// Best-so-far trace of an anytime solver. Time strictly increases and the
/// cut never decreases; record() enforces both.
class PerformanceProfile {
public:
    PerformanceProfile() = default;
    PerformanceProfile(std::string instance, std::uint64_t seed, std::size_t edges);

    void record(double elapsed, int cut);

    const std::vector<ProfilePoint> &trace() const { return trace_; }
    bool empty() const { return trace_.empty(); }
    std::optional<double> t0() const;
    std::optional<double> zero_time_quality() const;
    std::optional<int> final_cut() const;
    /// Best cut at or before `t`, if any point exists by then.
    std::optional<int> cut_at(double t) const;

    const std::string &instance() const { return instance_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t edges() const { return edges_; }

    ProfileStatus status() const;
    void mark_invalid(std::string why);
    void note(std::string message) { diagnostics_.push_back(std::move(message)); }
    const std::vector<std::string> &diagnostics() const { return diagnostics_; }

private:
    std::string instance_;
    std::uint64_t seed_ = 0;
    std::size_t edges_ = 0;
    std::vector<ProfilePoint> trace_;
    bool invalid_ = false;
    std::vector<std::string> diagnostics_;
};

using Clock = std::chrono::steady_clock;

struct Improvement {
    double elapsed = 0.0;
    int cut = 0;
    const Bits *bits = nullptr;
};

/// Repeated flip_solve with seeds derived from `seed`, keeping the incumbent,
/// until `budget_seconds` have passed since `start` (at least one descent
/// always runs). `on_improve` sees every new incumbent as it is found.
PerformanceProfile flip_multistart(const RegularGraph &g, double budget_seconds, std::uint64_t seed,
                                   std::string instance = {}, std::optional<Clock::time_point> start = {},
                                   const std::function<void(const Improvement &)> &on_improve = {});

struct ExactCut {
    int cut = 0;
    Bits bits;
};

inline constexpr int kDefaultExactCap = 24;
inline constexpr int kMaxExactCap = 30;

/// Exhaustive search over the 2^(n-1) bipartitions with vertex 0 fixed.
ExactCut exact_maxcut(const Graph &g, int cap = kDefaultExactCap);

struct ExternalOptions {
    double kill_grace_seconds = 2.0;
    std::string shell = "/bin/sh";
};

/// Runs `command_template` (with "{seed}" substituted) through the shell with
/// "--budget <seconds>" appended, feeds the edge list on stdin and parses
///   IMPROVED <elapsed_seconds> <cut_value> [<bitstring>]
/// lines from stdout. The process gets SIGTERM at the budget and SIGKILL after
/// the grace period. Protocol violations mark the profile invalid.
PerformanceProfile run_external(const std::string &command_template, const RegularGraph &g, double budget_seconds,
                                std::uint64_t seed, std::string instance = {}, const ExternalOptions &options = {});

} // namespace qaoacut
