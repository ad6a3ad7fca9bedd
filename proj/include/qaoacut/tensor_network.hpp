#pragma once

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "qaoacut/errors.hpp"

namespace qaoacut {

using IndexLabel = std::int32_t;

/// Dense tensor over dimension-2 indices, row-major: the first label is the
/// most significant bit of the flat offset.
template <typename Scalar> struct Tensor {
    using Data = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    std::vector<IndexLabel> indices;
    Data data;

    Tensor() = default;
    Tensor(std::vector<IndexLabel> idx, Data values) : indices(std::move(idx)), data(std::move(values)) {
        if (data.size() != (Eigen::Index{1} << indices.size())) {
            throw InputError("tensor data length must be 2^rank");
        }
    }

    int rank() const { return static_cast<int>(indices.size()); }
};

/// A scalar tensor network: every index is summed over.
template <typename Scalar> class TensorNetwork {
public:
    IndexLabel new_index() { return next_label_++; }

    void add(Tensor<Scalar> t) {
        for (IndexLabel l : t.indices) {
            next_label_ = std::max(next_label_, l + 1);
        }
        tensors_.push_back(std::move(t));
    }

    const std::vector<Tensor<Scalar>> &tensors() const { return tensors_; }
    std::vector<Tensor<Scalar>> &tensors() { return tensors_; }

    /// Distinct labels in first-appearance order.
    std::vector<IndexLabel> index_universe() const {
        std::vector<IndexLabel> seen;
        std::unordered_map<IndexLabel, bool> mark;
        for (const auto &t : tensors_) {
            for (IndexLabel l : t.indices) {
                if (mark.emplace(l, true).second) {
                    seen.push_back(l);
                }
            }
        }
        return seen;
    }

    /// Index sets only, which is all the ordering heuristics need.
    std::vector<std::vector<IndexLabel>> structure() const {
        std::vector<std::vector<IndexLabel>> s;
        s.reserve(tensors_.size());
        for (const auto &t : tensors_) {
            s.push_back(t.indices);
        }
        return s;
    }

private:
    std::vector<Tensor<Scalar>> tensors_;
    IndexLabel next_label_ = 0;
};

struct ContractionOrder {
    std::vector<IndexLabel> sequence;
    /// Largest rank of any intermediate tensor produced under `sequence`.
    int width = 0;
    /// Sum over buckets of 2^(bucket size); a proxy for contraction work.
    double cost = 0.0;
};

enum class OrderStrategy { GreedyMinFill, RandomRestart };

struct ContractionLimits {
    int width_cap = 28;
    std::size_t memory_budget_bytes = std::size_t{4} << 30;
};

/// Symbolic elimination: width and cost of `sequence` on the given
/// structure. Throws InputError if `sequence` is not a permutation of the
/// structure's labels.
ContractionOrder evaluate_order(std::span<const std::vector<IndexLabel>> structure,
                                std::vector<IndexLabel> sequence);

/// Greedy min-fill elimination with random tie-breaking. RandomRestart runs
/// `restarts` independent greedy passes and keeps the narrowest.
ContractionOrder contraction_order(std::span<const std::vector<IndexLabel>> structure, OrderStrategy strategy,
                                   std::uint64_t seed, int restarts = 8);

template <typename Scalar>
ContractionOrder contraction_order(const TensorNetwork<Scalar> &net, OrderStrategy strategy, std::uint64_t seed,
                                   int restarts = 8) {
    const auto s = net.structure();
    return contraction_order(s, strategy, seed, restarts);
}

void check_limits(const ContractionOrder &order, const ContractionLimits &limits, std::size_t scalar_bytes);

namespace detail {

// Offset of a tensor entry as a function of a combined assignment, split
// into low/high lookup tables so each lookup is two loads and an add.
struct OffsetTable {
    int low_bits = 0;
    std::vector<std::uint32_t> low;
    std::vector<std::uint32_t> high;

    std::uint32_t operator()(std::uint64_t a) const {
        return low[a & ((std::uint64_t{1} << low_bits) - 1)] + high[a >> low_bits];
    }
};

// `weights[i]` is the tensor stride of combined bit i (bit 0 least
// significant), zero if the tensor lacks that index.
inline OffsetTable make_offset_table(const std::vector<std::uint32_t> &weights) {
    OffsetTable t;
    const int bits = static_cast<int>(weights.size());
    t.low_bits = bits / 2;
    const int high_bits = bits - t.low_bits;
    t.low.assign(std::size_t{1} << t.low_bits, 0);
    t.high.assign(std::size_t{1} << high_bits, 0);
    for (std::size_t a = 1; a < t.low.size(); ++a) {
        const int bit = std::countr_zero(a);
        t.low[a] = t.low[a & (a - 1)] + weights[bit];
    }
    for (std::size_t a = 1; a < t.high.size(); ++a) {
        const int bit = std::countr_zero(a);
        t.high[a] = t.high[a & (a - 1)] + weights[t.low_bits + bit];
    }
    return t;
}

} // namespace detail

/// Bucket elimination: indices are summed one at a time in `order`; every
/// tensor sits in the bucket of its earliest index, and a bucket's product
/// summed over its index is pushed to the bucket of the next index it holds.
template <typename Scalar>
Scalar contract(const TensorNetwork<Scalar> &net, const ContractionOrder &order,
                const ContractionLimits &limits = {}) {
    check_limits(order, limits, sizeof(Scalar));
    std::unordered_map<IndexLabel, int> position;
    position.reserve(order.sequence.size() * 2);
    for (std::size_t i = 0; i < order.sequence.size(); ++i) {
        if (!position.emplace(order.sequence[i], static_cast<int>(i)).second) {
            throw InputError("contraction order repeats index " + std::to_string(order.sequence[i]));
        }
    }

    // Tensors are re-expressed over position-sorted index lists.
    struct Work {
        std::vector<int> pos; // ascending
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> data;
    };
    std::vector<std::vector<Work>> buckets(order.sequence.size());
    Scalar scalar{1};

    auto place = [&](Work w) {
        if (w.pos.empty()) {
            scalar *= w.data[0];
        } else {
            buckets[w.pos.front()].push_back(std::move(w));
        }
    };

    for (const auto &t : net.tensors()) {
        const int r = t.rank();
        std::vector<int> pos(r);
        for (int i = 0; i < r; ++i) {
            auto it = position.find(t.indices[i]);
            if (it == position.end()) {
                throw InputError("contraction order misses index " + std::to_string(t.indices[i]));
            }
            pos[i] = it->second;
        }
        std::vector<int> perm(r);
        for (int i = 0; i < r; ++i) {
            perm[i] = i;
        }
        std::sort(perm.begin(), perm.end(), [&](int x, int y) { return pos[x] < pos[y]; });
        for (int i = 1; i < r; ++i) {
            if (pos[perm[i]] == pos[perm[i - 1]]) {
                throw InputError("tensor repeats an index label");
            }
        }
        Work w;
        w.pos.resize(r);
        for (int i = 0; i < r; ++i) {
            w.pos[i] = pos[perm[i]];
        }
        if (std::is_sorted(perm.begin(), perm.end())) {
            w.data = t.data;
        } else {
            w.data.resize(t.data.size());
            for (Eigen::Index off = 0; off < t.data.size(); ++off) {
                Eigen::Index dst = 0;
                for (int i = 0; i < r; ++i) {
                    const int src_bit = r - 1 - perm[i];
                    dst = (dst << 1) | ((off >> src_bit) & 1);
                }
                w.data[dst] = t.data[off];
            }
        }
        place(std::move(w));
    }

    for (std::size_t b = 0; b < buckets.size(); ++b) {
        auto &bucket = buckets[b];
        if (bucket.empty()) {
            // An index attached to nothing still sums over dimension 2.
            continue;
        }
        std::vector<int> combined;
        for (const auto &w : bucket) {
            combined.insert(combined.end(), w.pos.begin(), w.pos.end());
        }
        std::sort(combined.begin(), combined.end());
        combined.erase(std::unique(combined.begin(), combined.end()), combined.end());
        // combined[0] == b is summed; it becomes the most significant bit.
        const int total_bits = static_cast<int>(combined.size());
        const int result_bits = total_bits - 1;
        std::vector<detail::OffsetTable> tables;
        tables.reserve(bucket.size());
        for (const auto &w : bucket) {
            std::vector<std::uint32_t> weights(total_bits, 0);
            const int r = static_cast<int>(w.pos.size());
            std::size_t k = 0;
            for (int i = 0; i < total_bits && k < w.pos.size(); ++i) {
                if (combined[i] == w.pos[k]) {
                    weights[total_bits - 1 - i] = std::uint32_t{1} << (r - 1 - static_cast<int>(k));
                    ++k;
                }
            }
            tables.push_back(detail::make_offset_table(weights));
        }
        Work out;
        out.pos.assign(combined.begin() + 1, combined.end());
        const std::uint64_t result_size = std::uint64_t{1} << result_bits;
        out.data.resize(static_cast<Eigen::Index>(result_size));
        const std::size_t nt = bucket.size();
        for (std::uint64_t r = 0; r < result_size; ++r) {
            Scalar acc{0};
            for (std::uint64_t jb = 0; jb < 2; ++jb) {
                const std::uint64_t a = (jb << result_bits) | r;
                Scalar prod = bucket[0].data[tables[0](a)];
                for (std::size_t t = 1; t < nt; ++t) {
                    prod *= bucket[t].data[tables[t](a)];
                }
                acc += prod;
            }
            out.data[static_cast<Eigen::Index>(r)] = acc;
        }
        bucket.clear();
        bucket.shrink_to_fit();
        place(std::move(out));
    }
    return scalar;
}

} // namespace qaoacut
