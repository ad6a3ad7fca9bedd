#include "qaoacut/qaoa_eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qaoacut/errors.hpp"
#include "qaoacut/parallel.hpp"
#include "qaoacut/rng.hpp"
#include "qaoacut/statevector.hpp"

namespace qaoacut {

namespace {

constexpr double kGammaBound = std::numbers::pi / 2;
constexpr double kBetaBound = std::numbers::pi / 4;
constexpr int kCompareStages = 4;
constexpr double kAgreeTolerance = 1e-5;

class TreeObjective {
public:
    TreeObjective(int d, int p, const EngineConfig &config) : prepared_(tree_subgraph(d, p), p, config), p_(p) {}

    double operator()(const std::vector<double> &x) {
        ++evaluations;
        return prepared_.edge_value(unpack(x));
    }

    QaoaAngles unpack(const std::vector<double> &x) const {
        return QaoaAngles(std::vector<double>(x.begin(), x.begin() + p_), std::vector<double>(x.begin() + p_, x.end()));
    }

    double bound(std::size_t i) const { return static_cast<int>(i) < p_ ? kGammaBound : kBetaBound; }
    int width() const { return prepared_.order().width; }

    long evaluations = 0;

private:
    PreparedExpectation prepared_;
    int p_;
};

// Coordinate moves of size `step` until no single move improves f.
void descend(TreeObjective &objective, std::vector<double> &x, double &f, double step) {
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (double dir : {1.0, -1.0}) {
                const double lim = objective.bound(i);
                const double moved = std::clamp(x[i] + dir * step, -lim, lim);
                if (moved == x[i]) {
                    continue;
                }
                std::vector<double> y = x;
                y[i] = moved;
                const double fy = objective(y);
                if (fy > f + 1e-15) {
                    x = std::move(y);
                    f = fy;
                    improved = true;
                    break;
                }
            }
        }
    }
}

std::vector<double> pack(const QaoaAngles &a) {
    std::vector<double> x = a.gammas();
    x.insert(x.end(), a.betas().begin(), a.betas().end());
    return x;
}

bool is_full_tree(const AnchoredSubgraph &s, int d, int p) {
    std::size_t expected = 0;
    std::size_t layer = 1;
    for (int k = 0; k <= p; ++k) {
        expected += layer;
        layer *= static_cast<std::size_t>(d - 1);
    }
    expected *= 2;
    return s.graph.num_vertices() == expected && s.graph.num_edges() + 1 == expected;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

TableEntry contract_entry(const AnchoredSubgraph &s, const QaoaAngles &angles, const EngineConfig &config) {
    const auto start = std::chrono::steady_clock::now();
    ContractionOrder order;
    const Complex zz =
        contract_network(build_expectation_network(s, angles, config.diagonal_gates), config, &order);
    if (std::abs(zz.imag()) > 1e-9) {
        throw Error("contraction left an imaginary residue of " + std::to_string(zz.imag()));
    }
    TableEntry entry;
    entry.f = std::clamp((1.0 - zz.real()) / 2.0, 0.0, 1.0);
    entry.width = order.width;
    entry.seconds = seconds_since(start);
    return entry;
}

double sample_variance(const std::vector<double> &v) {
    if (v.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return ss / static_cast<double>(v.size() - 1);
}

} // namespace

QaoaAngles interpolate_angles(const QaoaAngles &angles) {
    const int p = angles.p();
    if (p == 0) {
        return QaoaAngles::zeros(1);
    }
    auto lift = [p](const std::vector<double> &v) {
        std::vector<double> out(p + 1);
        for (int i = 1; i <= p + 1; ++i) {
            const double prev = i >= 2 ? v[i - 2] : 0.0;
            const double cur = i <= p ? v[i - 1] : 0.0;
            out[i - 1] = (static_cast<double>(i - 1) * prev + static_cast<double>(p - i + 1) * cur) / p;
        }
        return out;
    };
    return QaoaAngles(lift(angles.gammas()), lift(angles.betas()));
}

FixedAngleSet derive_fixed_angles(int p, const AngleSearchOptions &options, int d) {
    if (p < 1) {
        throw ParameterError("fixed angles need p >= 1");
    }
    if (options.restarts < 1 && !options.warm_start) {
        throw ParameterError("at least one restart is required");
    }
    if (options.warm_start && options.warm_start->p() != p) {
        throw ParameterError("warm start has depth " + std::to_string(options.warm_start->p()) + ", expected " +
                             std::to_string(p));
    }
    TreeObjective objective(d, p, options.engine);
    CounterRng rng(options.seed, 0xa5a5);

    std::vector<std::vector<double>> starts;
    for (int r = 0; r < options.restarts; ++r) {
        std::vector<double> x(2 * p);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double lim = objective.bound(i);
            x[i] = (2.0 * rng.uniform() - 1.0) * lim;
        }
        starts.push_back(std::move(x));
    }
    if (options.warm_start) {
        std::vector<double> x = pack(*options.warm_start);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = std::clamp(x[i], -objective.bound(i), objective.bound(i));
        }
        starts.push_back(std::move(x));
    }

    std::vector<double> values(starts.size());
    int best = -1;
    for (std::size_t r = 0; r < starts.size(); ++r) {
        std::vector<double> &x = starts[r];
        double f = objective(x);
        for (int k = 0; k <= options.stages; ++k) {
            descend(objective, x, f, std::numbers::pi / 8 / std::ldexp(1.0, k));
        }
        // A few finer steps so distinct restarts in one basin agree closely.
        for (int k = options.stages + 1; k <= options.stages + kCompareStages; ++k) {
            descend(objective, x, f, std::numbers::pi / 8 / std::ldexp(1.0, k));
        }
        values[r] = f;
        if (best < 0 || f > values[best]) {
            best = static_cast<int>(r);
        }
    }

    AngleDerivation trace;
    trace.restarts = static_cast<int>(starts.size());
    trace.seed = options.seed;
    trace.best_restart = best;
    for (double v : values) {
        if (v >= values[best] - kAgreeTolerance) {
            ++trace.agreeing_restarts;
        }
    }
    trace.converged = trace.agreeing_restarts >= 2;

    std::vector<double> x = starts[best];
    double f = values[best];
    if (options.polish) {
        for (double step = std::numbers::pi / 8 / std::ldexp(1.0, options.stages + kCompareStages + 1); step >= options.polish_step;
             step /= 2) {
            descend(objective, x, f, step);
        }
    }
    // (gamma, beta) -> (-gamma, -beta) leaves f unchanged; report gamma_1 >= 0.
    if (x[0] < 0) {
        for (double &v : x) {
            v = -v;
        }
    }
    trace.evaluations = objective.evaluations;
    trace.width = objective.width();

    FixedAngleSet set{p, objective.unpack(x), 0.0, trace};
    set.tree_value = edge_expectation(tree_subgraph(d, p), set.angles, options.engine);
    return set;
}

std::optional<TableEntry> ExpectationTable::find(const CanonicalKey &key, const std::string &digest) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find({key, digest});
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool ExpectationTable::insert(const CanonicalKey &key, const std::string &digest, const TableEntry &entry) {
    if (!(entry.f >= 0.0 && entry.f <= 1.0)) {
        throw ContractViolation("table value " + std::to_string(entry.f) + " outside [0, 1]");
    }
    std::unique_lock lock(mutex_);
    return entries_.try_emplace({key, digest}, entry).second;
}

std::size_t ExpectationTable::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

void ExpectationTable::write_csv(std::ostream &out, const QaoaAngles &angles) const {
    const std::string digest = angles.digest();
    std::shared_lock lock(mutex_);
    out << "key,p,f,width\n";
    char buf[64];
    for (const auto &[k, entry] : entries_) {
        if (k.second != digest) {
            continue;
        }
        std::snprintf(buf, sizeof buf, ",%d,%.17g,%d\n", angles.p(), entry.f, entry.width);
        out << to_hex(k.first) << buf;
    }
}

void ExpectationTable::read_csv(std::istream &in, const QaoaAngles &angles) {
    const std::string digest = angles.digest();
    std::string line;
    if (!std::getline(in, line) || line != "key,p,f,width") {
        throw InputError("expectation table: expected header 'key,p,f,width'");
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::string key, p, f, width;
        if (!std::getline(ss, key, ',') || !std::getline(ss, p, ',') || !std::getline(ss, f, ',') ||
            !std::getline(ss, width)) {
            throw InputError("expectation table line " + std::to_string(lineno) + ": expected 4 fields");
        }
        try {
            if (std::stoi(p) != angles.p()) {
                throw InputError("expectation table line " + std::to_string(lineno) + ": p=" + p +
                                 " does not match the angle depth " + std::to_string(angles.p()));
            }
            insert(from_hex(key), digest, TableEntry{std::stod(f), std::stoi(width), 0.0});
        } catch (const std::logic_error &) {
            throw InputError("expectation table line " + std::to_string(lineno) + ": malformed number");
        }
    }
}

std::vector<NamedClass> standard_classes(int d, int p) {
    std::vector<NamedClass> out;
    out.push_back({"tree", tree_subgraph(d, p)});
    for (int len = 3; len <= 2 * p + 1; ++len) {
        out.push_back({"cycle" + std::to_string(len), single_cycle_subgraph(d, p, len)});
    }
    return out;
}

std::vector<ClassFailure> subgraph_table(const QaoaAngles &angles, const std::vector<AnchoredSubgraph> &classes,
                                         ExpectationTable &table, const EngineConfig &config,
                                         std::size_t canonical_cap) {
    std::vector<ClassFailure> failures;
    const std::string digest = angles.digest();
    for (std::size_t i = 0; i < classes.size(); ++i) {
        try {
            const CanonicalKey key = canonical_key(classes[i], canonical_cap);
            if (!table.find(key, digest)) {
                table.insert(key, digest, contract_entry(classes[i], angles, config));
            }
        } catch (const std::exception &e) {
            failures.push_back({i, e.what()});
        }
    }
    return failures;
}

GraphExpectation graph_expectation(const RegularGraph &g, const QaoaAngles &angles, ExpectationTable &table,
                                   bool fallback, const EngineConfig &config, std::size_t canonical_cap) {
    const int p = angles.p();
    if (p < 1) {
        throw ParameterError("graph_expectation needs p >= 1");
    }
    const SubgraphTally tally = tally_subgraphs(g.graph(), p, canonical_cap);
    const std::string digest = angles.digest();
    GraphExpectation result;
    result.classes = tally.entries.size();
    std::vector<std::string> missing;
    for (const auto &[key, entry] : tally.entries) {
        std::optional<TableEntry> value = table.find(key, digest);
        if (!value) {
            if (!fallback) {
                missing.push_back(to_hex(key));
                continue;
            }
            value = contract_entry(entry.representative, angles, config);
            table.insert(key, digest, *value);
            ++result.contracted;
        }
        result.expectation += static_cast<double>(entry.count) * value->f;
        if (is_full_tree(entry.representative, g.degree(), p)) {
            result.tree_count += entry.count;
        }
    }
    if (!missing.empty()) {
        throw CoverageError(std::to_string(missing.size()) + " subgraph classes missing from the table",
                            std::move(missing));
    }
    result.cut_fraction = g.num_edges() == 0 ? 0.0 : result.expectation / static_cast<double>(g.num_edges());
    return result;
}

double median_of(std::vector<double> values) {
    if (values.empty()) {
        throw InputError("median of an empty list");
    }
    std::sort(values.begin(), values.end());
    const std::size_t k = values.size() / 2;
    return values.size() % 2 == 1 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

std::vector<EnsembleStats> ensemble_median(const QaoaAngles &angles, const std::vector<std::size_t> &sizes,
                                           std::size_t graphs_per_size, std::uint64_t seed,
                                           ExpectationTable &table, int workers, int d,
                                           const EngineConfig &config) {
    if (graphs_per_size == 0) {
        throw ParameterError("graphs_per_size must be positive");
    }
    std::vector<EnsembleStats> out;
    for (std::size_t n : sizes) {
        EnsembleStats stats;
        stats.n = n;
        stats.graphs = graphs_per_size;
        stats.cut_fractions.resize(graphs_per_size);
        parallel_for(graphs_per_size, workers, [&](std::size_t i) {
            const std::uint64_t s = CounterRng::derive(seed, n, i);
            try {
                const RegularGraph g = generate_regular(n, d, s);
                stats.cut_fractions[i] = graph_expectation(g, angles, table, true, config).cut_fraction;
            } catch (const std::exception &e) {
                throw Error("instance n=" + std::to_string(n) + " #" + std::to_string(i) +
                            " (seed " + std::to_string(s) + "): " + e.what());
            }
        });
        stats.median = median_of(stats.cut_fractions);
        stats.variance = sample_variance(stats.cut_fractions);
        stats.min = *std::min_element(stats.cut_fractions.begin(), stats.cut_fractions.end());
        stats.max = *std::max_element(stats.cut_fractions.begin(), stats.cut_fractions.end());
        out.push_back(std::move(stats));
    }
    return out;
}

double gamma_from_moments(std::size_t n, std::size_t m, double mean, double second) {
    if (m == 0) {
        throw InputError("gamma needs at least one edge");
    }
    const double variance = std::max(0.0, second - mean * mean);
    return std::sqrt(static_cast<double>(n)) * std::sqrt(variance) / static_cast<double>(m);
}

GammaEstimate estimate_gamma(const QaoaAngles &angles, const std::vector<std::size_t> &sizes,
                             std::size_t graphs_per_size, std::uint64_t seed, GammaRoute route, int workers, int d,
                             const EngineConfig &config) {
    if (graphs_per_size == 0 || sizes.empty()) {
        throw ParameterError("estimate_gamma needs at least one size and one graph per size");
    }
    GammaEstimate est;
    for (std::size_t n : sizes) {
        GammaSize gs;
        gs.n = n;
        gs.graphs = graphs_per_size;
        gs.per_graph.resize(graphs_per_size);
        parallel_for(graphs_per_size, workers, [&](std::size_t i) {
            const RegularGraph g = generate_regular(n, d, CounterRng::derive(seed, n, i));
            double mean = 0.0;
            double second = 0.0;
            if (route == GammaRoute::Statevector) {
                const CostMoments m = exact_expectation(simulate_state(g, angles), g);
                mean = m.mean;
                second = m.second;
            } else {
                mean = cost_expectation(g, angles, config);
                second = cost_second_moment(g, angles, config);
            }
            gs.per_graph[i] = gamma_from_moments(n, g.num_edges(), mean, second);
        });
        double ms = 0.0;
        for (double v : gs.per_graph) {
            ms += v * v;
        }
        gs.gamma = std::sqrt(ms / static_cast<double>(graphs_per_size));
        est.pooled += gs.gamma;
        est.sizes.push_back(std::move(gs));
    }
    est.pooled /= static_cast<double>(est.sizes.size());
    for (const auto &gs : est.sizes) {
        est.max_relative_spread = std::max(est.max_relative_spread, std::abs(gs.gamma - est.pooled) / est.pooled);
    }
    return est;
}

} // namespace qaoacut
