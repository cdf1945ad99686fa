#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qcloud/circuit.hpp"

namespace qcloud {

// Dependency DAG over the computational gates of a circuit. Node i refers to
// gate gate_index[i] in the source circuit; measures and barriers are
// excluded (zero-cost markers).
struct GateDag {
    std::vector<int> gate_index;
    std::vector<std::vector<int>> succ;
    std::vector<std::vector<int>> pred;

    int size() const { return static_cast<int>(gate_index.size()); }

    // Nodes with no unexecuted predecessors, given an executed flag per node.
    std::vector<int> front_layer(const std::vector<bool>& executed) const;
};

// Weighted qubit-interaction graph: weight(i,j) = number of 2-qubit gates
// between q_i and q_j.
struct InteractionGraph {
    int n = 0;
    std::map<std::pair<int, int>, int> weights;  // key (i,j) with i < j

    void add(int a, int b, int w = 1);
    int weight(int a, int b) const;
    long long total_weight() const;
    std::vector<std::vector<std::pair<int, int>>> adjacency() const;
};

GateDag build_dag(const Circuit& c);

InteractionGraph build_interaction_graph(const Circuit& c);

// Longest path in the gate DAG counted in gates, plus one trailing
// measurement layer when the circuit contains measures.
int circuit_depth(const Circuit& c);

struct BatchWeights {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double lambda3 = 0.5;
};

// I = lambda1 * (#2q / n) + lambda2 * n + lambda3 * depth
double batch_metric(const Circuit& c, double lambda1, double lambda2, double lambda3);

// Longest path (node count) in an arbitrary DAG given as adjacency lists.
int dag_longest_path(const std::vector<std::vector<int>>& succ);

// Per-circuit summary feeding the batch manager.
struct CircuitStats {
    int num_qubits = 0;
    int two_qubit_gates = 0;
    int depth = 0;
};

CircuitStats circuit_stats(const Circuit& c);

}  // namespace qcloud
