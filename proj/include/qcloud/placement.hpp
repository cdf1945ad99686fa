#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcloud/analysis.hpp"
#include "qcloud/cloud.hpp"
#include "qcloud/partition.hpp"

namespace qcloud {

struct Placement {
    int circuit_id = -1;
    std::vector<int> qubit_to_qpu;  // logical qubit -> QPU id
    std::vector<int> qpus_used;     // sorted, unique
    long long comm_cost = 0;        // sum D_ij * hop(pi(i), pi(j))
    long long remote_ops = 0;       // sum D_ij over split pairs
    double est_time = 0.0;          // CX units, critical-path estimate
    double score = 0.0;
    int parts = 1;

    std::vector<int> qpu_loads(int num_qpus) const;
};

long long placement_comm_cost(const InteractionGraph& g, const std::vector<int>& qubit_to_qpu,
                              const CloudTopology& t);
long long placement_remote_ops(const InteractionGraph& g, const std::vector<int>& qubit_to_qpu);

struct CommunityProfile {
    std::vector<std::vector<int>> communities;  // each sorted; list sorted by first member
    double modularity = 0.0;
    std::vector<int> free_qubits;  // per community
};

enum class CommunityWeightMode { Uniform, Resource };

// Greedy agglomerative (CNM-style) modularity maximization over the QPU graph.
CommunityProfile detect_communities(const CloudTopology& t,
                                    CommunityWeightMode mode = CommunityWeightMode::Resource);

double modularity_of(const CloudTopology& t, const std::vector<int>& community_of,
                     CommunityWeightMode mode);

struct LatencyModel {
    // all in CX units
    double t_1q = 0.1;
    double t_2q = 1.0;
    double t_ms = 5.0;
    double t_iep = 10.0;

    double remote_post_epr() const { return t_2q + t_ms; }
};

enum class QpuSetMode { Community, Bfs };  // Bfs = CloudQC-BFS variant

struct PlacementConfig {
    std::vector<double> alpha_list{0.03, 0.10, 0.30};
    QpuSetMode qpu_set_mode = QpuSetMode::Community;
    double p_epr = 0.3;
    LatencyModel latency;
    double score_alpha = 1.0;
    double score_beta = 1.0;
    double remote_load_epsilon = -1.0;  // < 0 disables the remote-load filter
    std::uint64_t seed = 0;
};

// Maps partition parts onto QPUs: community (or BFS) QPU-set selection,
// center-to-center seeding, weighted-BFS expansion. Parts land on distinct QPUs.
Placement find_placement(const InteractionGraph& g, const PartitionResult& parts,
                         const CloudTopology& t, QpuSetMode mode = QpuSetMode::Community);

// Critical-path duration estimate in CX units: remote 2q gates cost
// t_iep / p_epr + t_2q + t_ms, local gates their table latency.
double estimate_time(const GateDag& dag, const Circuit& c, const std::vector<int>& part_of_qubit,
                     const LatencyModel& lat, double p_epr);

// Full placement pipeline: single-QPU best fit when the circuit fits,
// otherwise an (alpha, k) sweep scored by normalized time and cost.
Placement place_circuit(const Circuit& c, const CloudTopology& t, const PlacementConfig& cfg);

// R(V_j): remote operations (weighted by D) touching a QPU across placements.
long long remote_load(const std::vector<Placement>& placements,
                      const std::vector<InteractionGraph>& graphs, int qpu_id);

struct BatchDecision {
    std::vector<int> order;     // circuit ids, decision order
    std::vector<int> selected;  // subset of order
    std::vector<int> deferred;
};

enum class BatchOrder { MetricDescending, MetricAscending, Fifo };

// Orders a batch by the I metric (terms min-max normalized over the batch)
// and greedily selects circuits against the total free computing qubits.
// Ascending (cheapest circuits first) is the default: it improves both the
// mean and the tail of the completion-time distribution over FIFO.
BatchDecision order_batch(const std::vector<CircuitStats>& stats, const BatchWeights& lambda,
                          int total_free_qubits, BatchOrder order = BatchOrder::MetricAscending);

}  // namespace qcloud
