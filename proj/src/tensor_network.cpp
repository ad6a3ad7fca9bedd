#include "qaoacut/tensor_network.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "qaoacut/rng.hpp"

namespace qaoacut {

namespace {

// Dense labels 0..V-1 for the labels occurring in a structure.
struct DenseLabels {
    std::vector<IndexLabel> labels;
    std::unordered_map<IndexLabel, int> id;
    std::vector<std::vector<int>> tensors;

    explicit DenseLabels(std::span<const std::vector<IndexLabel>> structure) {
        tensors.reserve(structure.size());
        for (const auto &t : structure) {
            std::vector<int> ids;
            ids.reserve(t.size());
            for (IndexLabel l : t) {
                auto [it, inserted] = id.emplace(l, static_cast<int>(labels.size()));
                if (inserted) {
                    labels.push_back(l);
                }
                ids.push_back(it->second);
            }
            tensors.push_back(std::move(ids));
        }
    }
};

// Elimination graph with bit-matrix adjacency for O(V/64) intersections.
class EliminationGraph {
public:
    explicit EliminationGraph(const DenseLabels &d)
        : n_(static_cast<int>(d.labels.size())), words_((n_ + 63) / 64), bits_(static_cast<std::size_t>(n_) * words_, 0),
          neighbors_(n_), alive_(n_, 1) {
        for (const auto &t : d.tensors) {
            for (std::size_t i = 0; i < t.size(); ++i) {
                for (std::size_t j = i + 1; j < t.size(); ++j) {
                    connect(t[i], t[j]);
                }
            }
        }
    }

    int size() const { return n_; }
    const std::vector<int> &neighbors(int v) const { return neighbors_[v]; }

    bool adjacent(int x, int y) const { return (row(x)[y >> 6] >> (y & 63)) & 1; }

    long fill(int v) const {
        const auto &nb = neighbors_[v];
        const long deg = static_cast<long>(nb.size());
        long shared = 0;
        const std::uint64_t *rv = row(v);
        for (int x : nb) {
            const std::uint64_t *rx = row(x);
            for (int w = 0; w < words_; ++w) {
                shared += std::popcount(rx[w] & rv[w]);
            }
        }
        // Each adjacent pair inside N(v) is counted twice in `shared`.
        return (deg * (deg - 1) - shared) / 2;
    }

    void eliminate(int v) {
        const std::vector<int> nb = neighbors_[v];
        for (int x : nb) {
            disconnect(x, v);
        }
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                if (!adjacent(nb[i], nb[j])) {
                    connect(nb[i], nb[j]);
                }
            }
        }
        neighbors_[v].clear();
        alive_[v] = 0;
    }

private:
    std::uint64_t *row(int v) { return bits_.data() + static_cast<std::size_t>(v) * words_; }
    const std::uint64_t *row(int v) const { return bits_.data() + static_cast<std::size_t>(v) * words_; }

    void connect(int x, int y) {
        if (x == y || adjacent(x, y)) {
            return;
        }
        row(x)[y >> 6] |= std::uint64_t{1} << (y & 63);
        row(y)[x >> 6] |= std::uint64_t{1} << (x & 63);
        neighbors_[x].push_back(y);
        neighbors_[y].push_back(x);
    }

    void disconnect(int x, int y) {
        row(x)[y >> 6] &= ~(std::uint64_t{1} << (y & 63));
        row(y)[x >> 6] &= ~(std::uint64_t{1} << (x & 63));
        std::erase(neighbors_[x], y);
    }

    int n_;
    int words_;
    std::vector<std::uint64_t> bits_;
    std::vector<std::vector<int>> neighbors_;
    std::vector<char> alive_;
};

std::vector<IndexLabel> greedy_min_fill(const DenseLabels &d, std::uint64_t seed) {
    EliminationGraph g(d);
    const int n = g.size();
    CounterRng rng(seed, 0xf111);
    std::vector<std::uint64_t> tiebreak(n);
    for (auto &t : tiebreak) {
        t = rng.next();
    }
    using Key = std::tuple<long, std::size_t, std::uint64_t, int>;
    std::set<Key> queue;
    std::vector<Key> current(n);
    auto key_of = [&](int v) { return Key{g.fill(v), g.neighbors(v).size(), tiebreak[v], v}; };
    for (int v = 0; v < n; ++v) {
        current[v] = key_of(v);
        queue.insert(current[v]);
    }
    std::vector<char> done(n, 0);
    std::vector<int> stamp(n, -1);
    std::vector<IndexLabel> sequence;
    sequence.reserve(n);
    for (int step = 0; step < n; ++step) {
        const int v = std::get<3>(*queue.begin());
        queue.erase(queue.begin());
        done[v] = 1;
        sequence.push_back(d.labels[v]);
        const std::vector<int> nb = g.neighbors(v);
        g.eliminate(v);
        // Fill scores change only within distance two of v.
        std::vector<int> affected;
        for (int x : nb) {
            if (stamp[x] != step) {
                stamp[x] = step;
                affected.push_back(x);
            }
            for (int y : g.neighbors(x)) {
                if (!done[y] && stamp[y] != step) {
                    stamp[y] = step;
                    affected.push_back(y);
                }
            }
        }
        for (int x : affected) {
            queue.erase(current[x]);
            current[x] = key_of(x);
            queue.insert(current[x]);
        }
    }
    return sequence;
}

} // namespace

ContractionOrder evaluate_order(std::span<const std::vector<IndexLabel>> structure, std::vector<IndexLabel> sequence) {
    const DenseLabels d(structure);
    const int n = static_cast<int>(d.labels.size());
    std::vector<int> position(n, -1);
    int covered = 0;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        auto it = d.id.find(sequence[i]);
        if (it == d.id.end()) {
            continue;
        }
        if (position[it->second] >= 0) {
            throw InputError("contraction order repeats index " + std::to_string(sequence[i]));
        }
        position[it->second] = static_cast<int>(i);
        ++covered;
    }
    if (covered != n) {
        throw InputError("contraction order does not cover every index");
    }
    // Same bucket flow as contract(), on index sets only.
    std::vector<std::vector<std::vector<int>>> buckets(sequence.size());
    auto place = [&](std::vector<int> s) {
        if (!s.empty()) {
            buckets[s.front()].push_back(std::move(s));
        }
    };
    for (const auto &t : d.tensors) {
        std::vector<int> s;
        for (int id : t) {
            s.push_back(position[id]);
        }
        std::sort(s.begin(), s.end());
        place(std::move(s));
    }
    ContractionOrder order;
    order.sequence = std::move(sequence);
    for (auto &bucket : buckets) {
        if (bucket.empty()) {
            continue;
        }
        std::vector<int> combined;
        for (const auto &s : bucket) {
            combined.insert(combined.end(), s.begin(), s.end());
        }
        std::sort(combined.begin(), combined.end());
        combined.erase(std::unique(combined.begin(), combined.end()), combined.end());
        order.width = std::max(order.width, static_cast<int>(combined.size()) - 1);
        order.cost += std::ldexp(static_cast<double>(bucket.size()), static_cast<int>(combined.size()));
        place(std::vector<int>(combined.begin() + 1, combined.end()));
        bucket.clear();
    }
    return order;
}

ContractionOrder contraction_order(std::span<const std::vector<IndexLabel>> structure, OrderStrategy strategy,
                                   std::uint64_t seed, int restarts) {
    const DenseLabels d(structure);
    const int passes = strategy == OrderStrategy::RandomRestart ? std::max(1, restarts) : 1;
    ContractionOrder best;
    bool have = false;
    for (int pass = 0; pass < passes; ++pass) {
        ContractionOrder candidate =
            evaluate_order(structure, greedy_min_fill(d, CounterRng::derive(seed, static_cast<std::uint64_t>(pass))));
        if (!have || std::tie(candidate.width, candidate.cost) < std::tie(best.width, best.cost)) {
            best = std::move(candidate);
            have = true;
        }
    }
    return best;
}

void check_limits(const ContractionOrder &order, const ContractionLimits &limits, std::size_t scalar_bytes) {
    if (order.width > limits.width_cap) {
        throw CapacityError("contraction width " + std::to_string(order.width) + " exceeds cap " +
                            std::to_string(limits.width_cap));
    }
    const double bytes = std::ldexp(static_cast<double>(scalar_bytes), order.width);
    if (bytes > static_cast<double>(limits.memory_budget_bytes)) {
        throw CapacityError("largest intermediate needs " + std::to_string(bytes) + " bytes, budget is " +
                            std::to_string(limits.memory_budget_bytes));
    }
}

} // namespace qaoacut
