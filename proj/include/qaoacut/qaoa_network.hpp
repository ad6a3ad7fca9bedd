#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>

#include "qaoacut/angles.hpp"
#include "qaoacut/graph.hpp"
#include "qaoacut/subgraph.hpp"
#include "qaoacut/tensor_network.hpp"

namespace qaoacut {

using Complex = std::complex<double>;
using QaoaNetwork = TensorNetwork<Complex>;

struct EngineConfig {
    /// Cost phases as rank-2 diagonal tensors on the running qubit index
    /// instead of rank-4 gate tensors with fresh output indices.
    bool diagonal_gates = true;
    OrderStrategy strategy = OrderStrategy::GreedyMinFill;
    std::uint64_t seed = 0;
    int restarts = 4;
    ContractionLimits limits{};
};

/// <psi| prod_{q in support} Z_q |psi> for the QAOA state on `g`. Only gates
/// in the reverse lightcone of the observable are emitted; the rest commute
/// through it and cancel between ket and bra. Repeated support vertices
/// cancel pairwise (Z^2 = I).
QaoaNetwork build_z_product_network(const Graph &g, std::span<const Vertex> support, const QaoaAngles &angles,
                                    bool diagonal_gates = true);

/// Scalar network for <Z_a Z_b> on the anchored subgraph. Throws
/// ContractViolation if the subgraph radius is smaller than p.
QaoaNetwork build_expectation_network(const AnchoredSubgraph &s, const QaoaAngles &angles,
                                      bool diagonal_gates = true);

/// Orders and contracts a network; optionally reports the order used.
Complex contract_network(const QaoaNetwork &net, const EngineConfig &config = {},
                         ContractionOrder *used = nullptr);

/// Edge expectation f = (1 - <Z_a Z_b>) / 2 on the anchored class.
double edge_expectation(const AnchoredSubgraph &s, const QaoaAngles &angles, const EngineConfig &config = {});

/// <Z_a Z_b> for the anchor pair. Since <Z_q> = 0 by spin-flip symmetry this
/// is also the covariance.
double zz_correlation(const AnchoredSubgraph &s, const QaoaAngles &angles, const EngineConfig &config = {});

/// <C> as a direct sum of per-edge lightcone contractions on `g`.
double cost_expectation(const Graph &g, const QaoaAngles &angles, const EngineConfig &config = {});

/// <C^2> = sum over edge pairs of <C_e C_e'>. Pairs farther apart than 2p
/// factorise into f_e f_e' and are not contracted.
double cost_second_moment(const Graph &g, const QaoaAngles &angles, const EngineConfig &config = {});

/// Network structure and contraction order fixed once per subgraph and
/// depth, then re-evaluated for many angle sets.
class PreparedExpectation {
public:
    PreparedExpectation(AnchoredSubgraph s, int p, const EngineConfig &config = {});

    double edge_value(const QaoaAngles &angles) const;
    Complex zz_value(const QaoaAngles &angles) const;

    const ContractionOrder &order() const { return order_; }
    const AnchoredSubgraph &subgraph() const { return subgraph_; }
    int p() const { return p_; }

private:
    AnchoredSubgraph subgraph_;
    int p_;
    EngineConfig config_;
    ContractionOrder order_;
};

/// Debug dump: {"tensors": [{"indices": [...], "data": [[re, im], ...]}]}.
std::string network_json(const QaoaNetwork &net);

} // namespace qaoacut
