#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qcloud/analysis.hpp"
#include "qcloud/cloud.hpp"
#include "qcloud/placement.hpp"

namespace qcloud {

struct RemoteOp {
    int id = 0;          // node id within the remote DAG
    int dag_node = 0;    // node in the source GateDag
    int gate_index = 0;  // gate in the source circuit
    int qpu_a = 0;
    int qpu_b = 0;
    int hops = 0;
    int priority = 0;  // longest path (edges) to any leaf
};

struct RemoteDag {
    std::vector<RemoteOp> nodes;
    std::vector<std::vector<int>> succ;
    std::vector<std::vector<int>> pred;

    int size() const { return static_cast<int>(nodes.size()); }
};

// Restricts the gate DAG to remote 2q gates: arc u -> v iff a path of local
// gates connects them with no remote gate in between; transitive reduction
// applied.
RemoteDag build_remote_dag(const GateDag& dag, const Circuit& c,
                           const std::vector<int>& qubit_to_qpu, const CloudTopology& t);

// p(leaf) = 0, p(u) = 1 + max p(children); reverse-topological DP.
void compute_priorities(RemoteDag& r);

enum class AllocPolicy { CloudQC, Greedy, Average, Random };

AllocPolicy alloc_policy_from_name(const std::string& name);
const char* alloc_policy_name(AllocPolicy p);

struct AllocRequest {
    int node_id = 0;
    int priority = 0;
    int qpu_a = 0;
    int qpu_b = 0;
    int age = 0;  // consecutive rounds spent waiting in the front layer
};

struct AllocationRound {
    std::vector<int> pairs;  // parallel to the request list; 0 = deferred
};

inline constexpr int kAgingThreshold = 5;

// One arbitration round over the active front. Budgets are per-QPU free
// communication qubits; a node's pairs are debited from both endpoints.
AllocationRound allocate_round(const std::vector<AllocRequest>& requests,
                               std::vector<int>& budgets, AllocPolicy policy,
                               std::mt19937_64& rng, int aging_threshold = kAgingThreshold);

// Per-round success of a remote gate granted x pairs over h serial hops:
// 1 - (1 - p^h)^x.
double attempt_success_probability(int pairs, int hops, double p_link);

}  // namespace qcloud
