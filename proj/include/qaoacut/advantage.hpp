#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qaoacut/classical.hpp"

namespace qaoacut {

// ---------------------------------------------------------------------------
// Cycle statistics of random regular graphs

/// Expected number of length-l cycles, (d-1)^l / (2l).
double cycle_mean(int d, int l);

struct CycleStats {
    int d = 0;
    std::map<int, double> lambda_by_length;
    std::map<int, double> m_by_length;
};

CycleStats cycle_stats(int d, int max_len);

struct CycleProbability {
    double value = 0.0;
    /// The Poisson limit is only established for odd d.
    bool even_degree = false;
};

/// Poisson mass lambda^t e^-lambda / t! with lambda = cycle_mean(d, l).
CycleProbability cycle_probability(int d, int l, int t);

// ---------------------------------------------------------------------------
// With-high-probability cut-fraction bounds

struct WhpInputs {
    double f_tree = 0.0;
    /// Optional single-cycle values f_l for l = 3..2p+1.
    std::map<int, double> f_cycle;
};

struct WhpBounds {
    double n = 0;
    int d = 0;
    int p = 0;
    double edges = 0.0;        // M
    double m_tree_lower = 0.0; // clamped at 0
    std::map<int, double> cycle_count_lowers;
    double cut_lower = 0.0;
    double cut_upper = 1.0;
    /// Cycle terms were used (all f_l present and the bracket stayed ordered).
    bool cycle_refined = false;
    /// Cycle values were supplied but the refined bracket inverted, so the
    /// tree-only bracket is reported.
    bool refinement_dropped = false;
};

/// n is a double so the asymptotic regime (n ~ 1e9) can be evaluated.
WhpBounds whp_bounds(double n, int d, int p, const WhpInputs &inputs);

// ---------------------------------------------------------------------------
// Gaussian multishot model

struct CostDistributionModel {
    double mu = 0.0;
    double gamma_p = 0.0;
    double n = 0.0;

    CostDistributionModel(double mu, double gamma_p, double n);
    /// Direct (mu, sigma) form, e.g. for empirically fitted samples.
    static CostDistributionModel from_sigma(double mu, double sigma, double n = 1.0);

    double sigma() const;
};

struct BestOfK {
    double upper_bound = 0.0; // mu + sigma sqrt(2 ln k)
    double numeric = 0.0;     // E[max of k draws]
};

BestOfK best_of_k(const CostDistributionModel &model, std::uint64_t k);

/// gamma_p sqrt(2 ln(k) / n).
double multishot_gain(double gamma_p, double n, double k);

enum class InversionMode {
    /// exp(n delta^2 / (2 gamma^2)), the exact inverse of multishot_gain.
    Consistent,
    /// exp(n delta^2 / gamma^2), the threshold formula as printed.
    Printed,
};

inline constexpr std::uint64_t kSampleSentinel = std::numeric_limits<std::int64_t>::max();

struct SampleRequirement {
    std::uint64_t k = 1;
    double log_k = 0.0;
    /// k would exceed kSampleSentinel; k holds the sentinel.
    bool saturated = false;
};

SampleRequirement required_samples(double gamma_p, double n, double delta,
                                   InversionMode mode = InversionMode::Consistent);

/// k / t in Hz.
double threshold_frequency(double k, double t_seconds);

enum class Region { BetterFaster, BetterSlower, WorseFaster, WorseSlower };

std::string region_name(Region r);

struct AdvantageQuery {
    std::size_t profile = 0;
    double n = 0;
    double gamma_p = 0.0;
    double quantum_mu = 0.0;
    double classical_quality = 0.0;
    double classical_t = 0.0;
    double delta = 0.0;
    SampleRequirement k;
    double nu_hz = 0.0;
    Region region = Region::WorseSlower;
};

struct AdvantageCurve {
    std::vector<AdvantageQuery> points;
    /// Point with the smallest nu.
    std::size_t argmin = 0;
};

struct AdvantageOptions {
    double shot_seconds = 1.0 / 5000.0;
    InversionMode mode = InversionMode::Consistent;
};

/// Evaluates Delta, K and nu at every recorded profile point (no
/// interpolation between points).
AdvantageCurve advantage_curve(const std::vector<PerformanceProfile> &profiles, double quantum_mu, double gamma_p,
                               double n, const AdvantageOptions &options = {});

} // namespace qaoacut
