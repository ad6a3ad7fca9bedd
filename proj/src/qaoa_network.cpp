#include "qaoacut/qaoa_network.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

namespace qaoacut {

namespace {

using Data = Tensor<Complex>::Data;

// Gates surviving lightcone cancellation, per layer.
struct Lightcone {
    std::vector<std::vector<Edge>> cost;     // cost[k]: edges of layer k
    std::vector<std::vector<Vertex>> mixers; // mixers[k]: qubits of layer k
    std::vector<Vertex> qubits;              // every qubit touched
};

Lightcone reverse_lightcone(const Graph &g, std::span<const Vertex> observable, int p) {
    Lightcone lc;
    lc.cost.resize(p);
    lc.mixers.resize(p);
    std::vector<char> in_support(g.num_vertices(), 0);
    std::vector<Vertex> support;
    for (Vertex q : observable) {
        if (!in_support[q]) {
            in_support[q] = 1;
            support.push_back(q);
        }
    }
    for (int k = p - 1; k >= 0; --k) {
        lc.mixers[k] = support;
        std::vector<Edge> edges;
        for (Vertex u : support) {
            for (Vertex w : g.neighbors(u)) {
                edges.emplace_back(u, w);
            }
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (const Edge &e : edges) {
            for (Vertex x : {e.u, e.v}) {
                if (!in_support[x]) {
                    in_support[x] = 1;
                    support.push_back(x);
                }
            }
        }
        lc.cost[k] = std::move(edges);
    }
    lc.qubits = std::move(support);
    return lc;
}

Data vec(std::initializer_list<Complex> values) {
    Data d(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const Complex &c : values) {
        d[i++] = c;
    }
    return d;
}

// Emits one side (ket, or bra with conjugated data) of the circuit and
// returns the final index of every touched qubit.
std::unordered_map<Vertex, IndexLabel> emit_side(QaoaNetwork &net, const Lightcone &lc, const QaoaAngles &angles,
                                                 bool conjugate, bool diagonal_gates) {
    auto c = [conjugate](Complex z) { return conjugate ? std::conj(z) : z; };
    std::unordered_map<Vertex, IndexLabel> current;
    const double amp = 1.0 / std::sqrt(2.0);
    for (Vertex q : lc.qubits) {
        const IndexLabel l = net.new_index();
        current[q] = l;
        net.add({{l}, vec({amp, amp})});
    }
    const int p = angles.p();
    for (int k = 0; k < p; ++k) {
        // exp(-i gamma (1 - ZZ)/2) up to a global phase: exp(i gamma ZZ / 2).
        const double g = angles.gammas()[k];
        const Complex same = c(std::polar(1.0, g / 2));
        const Complex diff = c(std::polar(1.0, -g / 2));
        for (const Edge &e : lc.cost[k]) {
            const IndexLabel iu = current.at(e.u);
            const IndexLabel iw = current.at(e.v);
            if (diagonal_gates) {
                net.add({{iu, iw}, vec({same, diff, diff, same})});
            } else {
                const IndexLabel ou = net.new_index();
                const IndexLabel ow = net.new_index();
                Data d = Data::Zero(16);
                // (in_u, in_w, out_u, out_w), diagonal in in == out.
                d[0b0000] = same;
                d[0b0101] = diff;
                d[0b1010] = diff;
                d[0b1111] = same;
                net.add({{iu, iw, ou, ow}, std::move(d)});
                current[e.u] = ou;
                current[e.v] = ow;
            }
        }
        const double b = angles.betas()[k];
        const Complex on = c(Complex(std::cos(b), 0.0));
        const Complex off = c(Complex(0.0, -std::sin(b)));
        for (Vertex q : lc.mixers[k]) {
            const IndexLabel in = current.at(q);
            const IndexLabel out = net.new_index();
            net.add({{in, out}, vec({on, off, off, on})});
            current[q] = out;
        }
    }
    return current;
}

} // namespace

QaoaNetwork build_z_product_network(const Graph &g, std::span<const Vertex> support, const QaoaAngles &angles,
                                    bool diagonal_gates) {
    // Z_q Z_q = I, so only vertices listed an odd number of times remain.
    std::vector<Vertex> observable(support.begin(), support.end());
    std::sort(observable.begin(), observable.end());
    std::vector<Vertex> odd;
    for (std::size_t i = 0; i < observable.size();) {
        std::size_t j = i;
        while (j < observable.size() && observable[j] == observable[i]) {
            ++j;
        }
        if ((j - i) % 2 == 1) {
            if (observable[i] >= g.num_vertices()) {
                throw InputError("observable vertex out of range");
            }
            odd.push_back(observable[i]);
        }
        i = j;
    }
    const Lightcone lc = reverse_lightcone(g, odd, angles.p());
    QaoaNetwork net;
    const auto ket = emit_side(net, lc, angles, false, diagonal_gates);
    const std::size_t ket_tensors = net.tensors().size();
    const auto bra = emit_side(net, lc, angles, true, diagonal_gates);
    // Join ket and bra on the final (measurement-basis) index of each qubit.
    std::unordered_map<IndexLabel, IndexLabel> join;
    for (const auto &[q, label] : bra) {
        join[label] = ket.at(q);
    }
    auto &tensors = net.tensors();
    for (std::size_t t = ket_tensors; t < tensors.size(); ++t) {
        for (IndexLabel &l : tensors[t].indices) {
            if (auto it = join.find(l); it != join.end()) {
                l = it->second;
            }
        }
    }
    for (Vertex q : odd) {
        net.add({{ket.at(q)}, vec({1.0, -1.0})});
    }
    return net;
}

QaoaNetwork build_expectation_network(const AnchoredSubgraph &s, const QaoaAngles &angles, bool diagonal_gates) {
    if (s.radius < angles.p()) {
        throw ContractViolation("subgraph radius " + std::to_string(s.radius) + " is smaller than depth p=" +
                                std::to_string(angles.p()) + "; the lightcone would be truncated");
    }
    const Vertex anchors[] = {s.a, s.b};
    return build_z_product_network(s.graph, anchors, angles, diagonal_gates);
}

Complex contract_network(const QaoaNetwork &net, const EngineConfig &config, ContractionOrder *used) {
    ContractionOrder order = contraction_order(net, config.strategy, config.seed, config.restarts);
    const Complex value = contract(net, order, config.limits);
    if (used != nullptr) {
        *used = std::move(order);
    }
    return value;
}

namespace {

double checked_real(Complex z) {
    if (std::abs(z.imag()) > 1e-9) {
        throw Error("contraction left an imaginary residue of " + std::to_string(z.imag()));
    }
    return z.real();
}

double edge_value_from_zz(double zz) {
    return std::clamp((1.0 - zz) / 2.0, 0.0, 1.0);
}

} // namespace

double zz_correlation(const AnchoredSubgraph &s, const QaoaAngles &angles, const EngineConfig &config) {
    return checked_real(contract_network(build_expectation_network(s, angles, config.diagonal_gates), config));
}

double edge_expectation(const AnchoredSubgraph &s, const QaoaAngles &angles, const EngineConfig &config) {
    return edge_value_from_zz(zz_correlation(s, angles, config));
}

double cost_expectation(const Graph &g, const QaoaAngles &angles, const EngineConfig &config) {
    double total = 0.0;
    for (const Edge &e : g.edges()) {
        const Vertex support[] = {e.u, e.v};
        const double zz =
            checked_real(contract_network(build_z_product_network(g, support, angles, config.diagonal_gates), config));
        total += (1.0 - zz) / 2.0;
    }
    return total;
}

double cost_second_moment(const Graph &g, const QaoaAngles &angles, const EngineConfig &config) {
    const int p = angles.p();
    const auto &edges = g.edges();
    const std::size_t m = edges.size();
    std::vector<double> zz(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vertex support[] = {edges[i].u, edges[i].v};
        zz[i] = checked_real(
            contract_network(build_z_product_network(g, support, angles, config.diagonal_gates), config));
    }
    // C_e is an indicator, so <C_e^2> = <C_e> = f_e.
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        total += (1.0 - zz[i]) / 2.0;
    }
    std::vector<int> dist_u;
    std::vector<int> dist_v;
    for (std::size_t i = 0; i < m; ++i) {
        const Vertex su[] = {edges[i].u};
        const Vertex sv[] = {edges[i].v};
        // Distances only matter up to 2p.
        dist_u = bfs_distances(g, su, 2 * p + 1);
        dist_v = bfs_distances(g, sv, 2 * p + 1);
        for (std::size_t j = i + 1; j < m; ++j) {
            const int d = std::min({dist_u[edges[j].u], dist_u[edges[j].v], dist_v[edges[j].u], dist_v[edges[j].v]});
            double pair = 0.0;
            if (d > 2 * p) {
                pair = (1.0 - zz[i]) / 2.0 * (1.0 - zz[j]) / 2.0;
            } else {
                const Vertex support[] = {edges[i].u, edges[i].v, edges[j].u, edges[j].v};
                const double zzzz = checked_real(
                    contract_network(build_z_product_network(g, support, angles, config.diagonal_gates), config));
                pair = (1.0 - zz[i] - zz[j] + zzzz) / 4.0;
            }
            total += 2.0 * pair;
        }
    }
    return total;
}

PreparedExpectation::PreparedExpectation(AnchoredSubgraph s, int p, const EngineConfig &config)
    : subgraph_(std::move(s)), p_(p), config_(config) {
    const QaoaNetwork probe = build_expectation_network(subgraph_, QaoaAngles::zeros(p_), config_.diagonal_gates);
    order_ = contraction_order(probe, config_.strategy, config_.seed, config_.restarts);
    check_limits(order_, config_.limits, sizeof(Complex));
}

Complex PreparedExpectation::zz_value(const QaoaAngles &angles) const {
    if (angles.p() != p_) {
        throw ParameterError("prepared for p=" + std::to_string(p_) + ", got p=" + std::to_string(angles.p()));
    }
    return contract(build_expectation_network(subgraph_, angles, config_.diagonal_gates), order_, config_.limits);
}

double PreparedExpectation::edge_value(const QaoaAngles &angles) const {
    return edge_value_from_zz(checked_real(zz_value(angles)));
}

std::string network_json(const QaoaNetwork &net) {
    nlohmann::json tensors = nlohmann::json::array();
    for (const auto &t : net.tensors()) {
        nlohmann::json data = nlohmann::json::array();
        for (Eigen::Index i = 0; i < t.data.size(); ++i) {
            data.push_back({t.data[i].real(), t.data[i].imag()});
        }
        tensors.push_back({{"indices", t.indices}, {"data", std::move(data)}});
    }
    return nlohmann::json{{"tensors", std::move(tensors)}}.dump();
}

} // namespace qaoacut
