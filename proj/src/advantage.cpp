#include "qaoacut/advantage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qaoacut/errors.hpp"

namespace qaoacut {

double cycle_mean(int d, int l) {
    if (d < 2 || l < 3) {
        throw ParameterError("cycle statistics need d >= 2 and l >= 3");
    }
    return std::pow(static_cast<double>(d - 1), l) / (2.0 * l);
}

CycleStats cycle_stats(int d, int max_len) {
    CycleStats s;
    s.d = d;
    for (int l = 3; l <= max_len; ++l) {
        const double m = cycle_mean(d, l);
        s.lambda_by_length[l] = m;
        s.m_by_length[l] = m;
    }
    return s;
}

CycleProbability cycle_probability(int d, int l, int t) {
    if (t < 0) {
        throw ParameterError("cycle count t must be non-negative");
    }
    const double lambda = cycle_mean(d, l);
    const double log_p = t * std::log(lambda) - lambda - std::lgamma(t + 1.0);
    return {std::exp(log_p), d % 2 == 0};
}

WhpBounds whp_bounds(double n, int d, int p, const WhpInputs &inputs) {
    if (!(n > 0) || d < 2 || p < 1) {
        throw ParameterError("whp_bounds needs n > 0, d >= 2, p >= 1");
    }
    if (!(inputs.f_tree >= 0.0 && inputs.f_tree <= 1.0)) {
        throw InputError("f_tree must lie in [0, 1]");
    }
    WhpBounds b;
    b.n = n;
    b.d = d;
    b.p = p;
    b.edges = n * d / 2.0;
    double cycle_edges = 0.0;
    for (int l = 3; l <= 2 * p + 1; ++l) {
        cycle_edges += l * cycle_mean(d, l);
    }
    b.m_tree_lower = std::max(0.0, b.edges - cycle_edges);
    const double tree_share = b.m_tree_lower / b.edges;
    b.cut_lower = tree_share * inputs.f_tree;
    b.cut_upper = 1.0 - tree_share * (1.0 - inputs.f_tree);

    bool have_cycles = true;
    double lower = b.m_tree_lower * inputs.f_tree;
    double upper = b.edges - b.m_tree_lower * (1.0 - inputs.f_tree);
    for (int l = 3; l <= 2 * p + 1; ++l) {
        const double count = l * cycle_mean(d, l) * (1.0 - tree_share);
        b.cycle_count_lowers[l] = count;
        auto it = inputs.f_cycle.find(l);
        if (it == inputs.f_cycle.end()) {
            have_cycles = false;
            continue;
        }
        lower += count * it->second;
        upper -= count * (1.0 - it->second);
    }
    if (have_cycles) {
        lower /= b.edges;
        upper /= b.edges;
        if (lower <= upper && lower >= 0.0 && upper <= 1.0) {
            b.cut_lower = lower;
            b.cut_upper = upper;
            b.cycle_refined = true;
        } else {
            b.refinement_dropped = true;
        }
    }
    return b;
}

CostDistributionModel::CostDistributionModel(double mu_, double gamma_p_, double n_) : mu(mu_), gamma_p(gamma_p_), n(n_) {
    if (!(gamma_p > 0.0) || !(n > 0.0)) {
        throw ParameterError("model needs gamma_p > 0 and n > 0");
    }
}

CostDistributionModel CostDistributionModel::from_sigma(double mu, double sigma, double n) {
    return CostDistributionModel(mu, sigma * std::sqrt(n), n);
}

double CostDistributionModel::sigma() const { return gamma_p / std::sqrt(n); }

BestOfK best_of_k(const CostDistributionModel &model, std::uint64_t k) {
    if (k == 0) {
        throw InputError("best_of_k needs k >= 1");
    }
    const double sigma = model.sigma();
    BestOfK r;
    r.upper_bound = model.mu + sigma * std::sqrt(2.0 * std::log(static_cast<double>(k)));
    if (k == 1) {
        r.numeric = model.mu;
        return r;
    }
    // E[max] = mu + sigma * int x k Phi(x)^(k-1) phi(x) dx over the standard normal.
    const double km1 = static_cast<double>(k - 1);
    const double log_k = std::log(static_cast<double>(k));
    auto integrand = [&](double x) {
        const double log_phi_cdf = x > 0.0 ? std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2))
                                           : std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
        const double log_pdf = -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
        return x * std::exp(log_k + km1 * log_phi_cdf + log_pdf);
    };
    const double z = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -12.0, 12.0, 15, 1e-10);
    r.numeric = model.mu + sigma * z;
    return r;
}

double multishot_gain(double gamma_p, double n, double k) {
    if (!(k >= 1.0) || !(n > 0.0)) {
        throw ParameterError("multishot_gain needs k >= 1 and n > 0");
    }
    return gamma_p * std::sqrt(2.0 * std::log(k) / n);
}

SampleRequirement required_samples(double gamma_p, double n, double delta, InversionMode mode) {
    if (!(gamma_p > 0.0)) {
        throw ParameterError("required_samples needs gamma_p > 0");
    }
    SampleRequirement r;
    if (delta <= 0.0) {
        return r;
    }
    const double scale = mode == InversionMode::Consistent ? 2.0 : 1.0;
    r.log_k = n * delta * delta / (scale * gamma_p * gamma_p);
    const double k = std::ceil(std::exp(r.log_k));
    if (!(k < static_cast<double>(kSampleSentinel))) {
        r.k = kSampleSentinel;
        r.saturated = true;
    } else {
        r.k = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(k));
    }
    return r;
}

double threshold_frequency(double k, double t_seconds) {
    if (!(t_seconds > 0.0)) {
        throw InputError("threshold frequency needs t > 0");
    }
    if (!(k >= 1.0)) {
        throw InputError("threshold frequency needs k >= 1");
    }
    return k / t_seconds;
}

std::string region_name(Region r) {
    switch (r) {
    case Region::BetterFaster:
        return "better-faster";
    case Region::BetterSlower:
        return "better-slower";
    case Region::WorseFaster:
        return "worse-faster";
    case Region::WorseSlower:
        return "worse-slower";
    }
    return "unknown";
}

AdvantageCurve advantage_curve(const std::vector<PerformanceProfile> &profiles, double quantum_mu, double gamma_p,
                               double n, const AdvantageOptions &options) {
    if (profiles.empty()) {
        throw InputError("advantage curve needs at least one profile");
    }
    AdvantageCurve curve;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const PerformanceProfile &prof = profiles[i];
        if (prof.status() != ProfileStatus::Ok) {
            throw InputError("profile '" + prof.instance() + "' is " +
                             (prof.status() == ProfileStatus::Empty ? "empty" : "invalid"));
        }
        for (const ProfilePoint &pt : prof.trace()) {
            AdvantageQuery q;
            q.profile = i;
            q.n = n;
            q.gamma_p = gamma_p;
            q.quantum_mu = quantum_mu;
            q.classical_quality = static_cast<double>(pt.cut) / static_cast<double>(prof.edges());
            q.classical_t = pt.elapsed;
            q.delta = q.classical_quality - quantum_mu;
            q.k = required_samples(gamma_p, n, q.delta, options.mode);
            // From log K so saturated counts still give a finite-or-inf frequency.
            const double k_real = q.k.saturated ? std::exp(q.k.log_k) : static_cast<double>(q.k.k);
            q.nu_hz = threshold_frequency(k_real, std::max(pt.elapsed, std::numeric_limits<double>::min()));
            const bool better = q.delta <= 0.0;
            const bool faster = k_real * options.shot_seconds <= pt.elapsed;
            q.region = better ? (faster ? Region::BetterFaster : Region::BetterSlower)
                              : (faster ? Region::WorseFaster : Region::WorseSlower);
            curve.points.push_back(q);
        }
    }
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        if (curve.points[i].nu_hz < curve.points[curve.argmin].nu_hz) {
            curve.argmin = i;
        }
    }
    return curve;
}

} // namespace qaoacut
