#include "qaoacut/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "qaoacut/errors.hpp"
#include "qaoacut/rng.hpp"

namespace qaoacut {

namespace {

std::vector<std::uint8_t> cut_table(const Graph &g) {
    const std::size_t dim = std::size_t{1} << g.num_vertices();
    std::vector<std::uint8_t> cuts(dim);
    for (std::size_t z = 0; z < dim; ++z) {
        cuts[z] = static_cast<std::uint8_t>(cost_of(static_cast<BitMask>(z), g));
    }
    return cuts;
}

void check_size(const StateVector &sv, const Graph &g) {
    if (static_cast<std::size_t>(sv.n) != g.num_vertices()) {
        throw InputError("state has " + std::to_string(sv.n) + " qubits but the graph has " +
                         std::to_string(g.num_vertices()) + " vertices");
    }
}

} // namespace

int cost_of(BitMask z, const Graph &g) {
    int cut = 0;
    for (const Edge &e : g.edges()) {
        cut += static_cast<int>(((z >> e.u) ^ (z >> e.v)) & 1);
    }
    return cut;
}

int cost_of(std::span<const std::uint8_t> z, const Graph &g) {
    if (z.size() != g.num_vertices()) {
        throw InputError("bitstring length " + std::to_string(z.size()) + " does not match n=" +
                         std::to_string(g.num_vertices()));
    }
    int cut = 0;
    for (const Edge &e : g.edges()) {
        cut += (z[e.u] != z[e.v]) ? 1 : 0;
    }
    return cut;
}

StateVector simulate_state(const Graph &g, const QaoaAngles &angles, int cap) {
    const int n = static_cast<int>(g.num_vertices());
    if (n > cap || n > 62) {
        throw CapacityError("statevector of " + std::to_string(n) + " qubits exceeds cap " + std::to_string(cap));
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    StateVector sv;
    sv.n = n;
    sv.amplitudes = Eigen::VectorXcd::Constant(dim, std::complex<double>(std::pow(2.0, -0.5 * n), 0.0));
    if (angles.p() == 0) {
        return sv;
    }
    const std::vector<std::uint8_t> cuts = cut_table(g);
    const int max_cut = static_cast<int>(g.num_edges());
    std::vector<std::complex<double>> phase(max_cut + 1);
    for (int k = 0; k < angles.p(); ++k) {
        const double gamma = angles.gammas()[k];
        for (int c = 0; c <= max_cut; ++c) {
            phase[c] = std::polar(1.0, -gamma * c);
        }
        for (Eigen::Index z = 0; z < dim; ++z) {
            sv.amplitudes[z] *= phase[cuts[z]];
        }
        // exp(-i beta X) on every qubit as butterfly passes.
        const double cb = std::cos(angles.betas()[k]);
        const std::complex<double> sb(0.0, -std::sin(angles.betas()[k]));
        for (int q = 0; q < n; ++q) {
            const Eigen::Index stride = Eigen::Index{1} << q;
            for (Eigen::Index base = 0; base < dim; base += 2 * stride) {
                for (Eigen::Index z = base; z < base + stride; ++z) {
                    const auto a0 = sv.amplitudes[z];
                    const auto a1 = sv.amplitudes[z + stride];
                    sv.amplitudes[z] = cb * a0 + sb * a1;
                    sv.amplitudes[z + stride] = sb * a0 + cb * a1;
                }
            }
        }
    }
    return sv;
}

CostMoments exact_expectation(const StateVector &sv, const Graph &g) {
    check_size(sv, g);
    CostMoments m;
    const Eigen::Index dim = sv.amplitudes.size();
    for (Eigen::Index z = 0; z < dim; ++z) {
        const double prob = std::norm(sv.amplitudes[z]);
        const double c = cost_of(static_cast<BitMask>(z), g);
        m.mean += prob * c;
        m.second += prob * c * c;
    }
    return m;
}

double z_product_expectation(const StateVector &sv, BitMask mask) {
    double total = 0.0;
    const Eigen::Index dim = sv.amplitudes.size();
    for (Eigen::Index z = 0; z < dim; ++z) {
        const int parity = std::popcount(static_cast<BitMask>(z) & mask) & 1;
        total += (parity ? -1.0 : 1.0) * std::norm(sv.amplitudes[z]);
    }
    return total;
}

std::vector<BitMask> sample_bitstrings(const StateVector &sv, std::size_t k, std::uint64_t seed) {
    const Eigen::Index dim = sv.amplitudes.size();
    std::vector<double> cdf(static_cast<std::size_t>(dim));
    double running = 0.0;
    for (Eigen::Index z = 0; z < dim; ++z) {
        running += std::norm(sv.amplitudes[z]);
        cdf[z] = running;
    }
    CounterRng rng(seed, 0x5a3b);
    std::vector<BitMask> out(k);
    for (auto &s : out) {
        const double u = rng.uniform() * running;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        s = static_cast<BitMask>(it - cdf.begin());
    }
    return out;
}

void write_bitstrings(std::ostream &out, std::span<const BitMask> samples, int n) {
    std::string line(n, '0');
    for (BitMask z : samples) {
        for (int i = 0; i < n; ++i) {
            line[i] = ((z >> i) & 1) ? '1' : '0';
        }
        out << line << '\n';
    }
}

} // namespace qaoacut
