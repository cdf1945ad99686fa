#include "qcloud/analysis.hpp"

#include <algorithm>

#include "qcloud/error.hpp"

namespace qcloud {

std::vector<int> GateDag::front_layer(const std::vector<bool>& executed) const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v) {
        if (executed[static_cast<size_t>(v)]) continue;
        bool ready = true;
        for (int p : pred[static_cast<size_t>(v)])
            if (!executed[static_cast<size_t>(p)]) {
                ready = false;
                break;
            }
        if (ready) out.push_back(v);
    }
    return out;
}

void InteractionGraph::add(int a, int b, int w) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    weights[{a, b}] += w;
}

int InteractionGraph::weight(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = weights.find({a, b});
    return it == weights.end() ? 0 : it->second;
}

long long InteractionGraph::total_weight() const {
    long long s = 0;
    for (const auto& [e, w] : weights) s += w;
    return s;
}

std::vector<std::vector<std::pair<int, int>>> InteractionGraph::adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n));
    for (const auto& [e, w] : weights) {
        adj[static_cast<size_t>(e.first)].emplace_back(e.second, w);
        adj[static_cast<size_t>(e.second)].emplace_back(e.first, w);
    }
    return adj;
}

GateDag build_dag(const Circuit& c) {
    GateDag dag;
    std::vector<int> last_on_qubit(static_cast<size_t>(c.num_qubits), -1);
    for (int gi = 0; gi < static_cast<int>(c.gates.size()); ++gi) {
        const Gate& g = c.gates[static_cast<size_t>(gi)];
        if (!g.is_computational()) continue;
        int node = dag.size();
        dag.gate_index.push_back(gi);
        dag.succ.emplace_back();
        dag.pred.emplace_back();
        for (int k = 0; k < g.num_operands; ++k) {
            int q = g.qubits[static_cast<size_t>(k)];
            if (q < 0 || q >= c.num_qubits)
                fail(ErrorCode::IndexOutOfRange, "gate operand out of range");
            int p = last_on_qubit[static_cast<size_t>(q)];
            if (p >= 0) {
                auto& s = dag.succ[static_cast<size_t>(p)];
                if (s.empty() || s.back() != node) {
                    s.push_back(node);
                    dag.pred[static_cast<size_t>(node)].push_back(p);
                }
            }
            last_on_qubit[static_cast<size_t>(q)] = node;
        }
    }
    return dag;
}

InteractionGraph build_interaction_graph(const Circuit& c) {
    InteractionGraph g;
    g.n = c.num_qubits;
    for (const auto& gate : c.gates)
        if (gate.kind == GateKind::TwoQubit) g.add(gate.qubits[0], gate.qubits[1]);
    return g;
}

int dag_longest_path(const std::vector<std::vector<int>>& succ) {
    int n = static_cast<int>(succ.size());
    if (n == 0) return 0;
    std::vector<int> indeg(static_cast<size_t>(n), 0);
    for (const auto& s : succ)
        for (int v : s) ++indeg[static_cast<size_t>(v)];
    std::vector<int> depth(static_cast<size_t>(n), 1);
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
        if (indeg[static_cast<size_t>(v)] == 0) stack.push_back(v);
    int seen = 0;
    int best = 0;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        ++seen;
        best = std::max(best, depth[static_cast<size_t>(u)]);
        for (int v : succ[static_cast<size_t>(u)]) {
            depth[static_cast<size_t>(v)] =
                std::max(depth[static_cast<size_t>(v)], depth[static_cast<size_t>(u)] + 1);
            if (--indeg[static_cast<size_t>(v)] == 0) stack.push_back(v);
        }
    }
    if (seen != n) fail(ErrorCode::InvariantViolation, "gate DAG contains a cycle");
    return best;
}

int circuit_depth(const Circuit& c) {
    GateDag dag = build_dag(c);
    int depth = dag_longest_path(dag.succ);
    if (c.has_measure()) depth += 1;
    return depth;
}

double batch_metric(const Circuit& c, double lambda1, double lambda2, double lambda3) {
    if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0)
        fail(ErrorCode::BadParams, "batch metric weights must be non-negative");
    if (c.num_qubits < 1) fail(ErrorCode::BadParams, "empty circuit");
    double density = static_cast<double>(c.two_qubit_count()) / c.num_qubits;
    return lambda1 * density + lambda2 * c.num_qubits + lambda3 * circuit_depth(c);
}

CircuitStats circuit_stats(const Circuit& c) {
    CircuitStats s;
    s.num_qubits = c.num_qubits;
    s.two_qubit_gates = c.two_qubit_count();
    s.depth = circuit_depth(c);
    return s;
}

}  // namespace qcloud
