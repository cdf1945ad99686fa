#include "qcloud/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "qcloud/error.hpp"

namespace qcloud {

RemoteDag build_remote_dag(const GateDag& dag, const Circuit& c,
                           const std::vector<int>& qubit_to_qpu, const CloudTopology& t) {
    RemoteDag r;
    int n = dag.size();
    std::vector<int> remote_id(static_cast<size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
        const Gate& g = c.gates[static_cast<size_t>(dag.gate_index[static_cast<size_t>(v)])];
        if (g.kind != GateKind::TwoQubit) continue;
        int a = qubit_to_qpu[static_cast<size_t>(g.qubits[0])];
        int b = qubit_to_qpu[static_cast<size_t>(g.qubits[1])];
        if (a == b) continue;
        RemoteOp op;
        op.id = r.size();
        op.dag_node = v;
        op.gate_index = dag.gate_index[static_cast<size_t>(v)];
        op.qpu_a = std::min(a, b);
        op.qpu_b = std::max(a, b);
        op.hops = t.dist(a, b);
        remote_id[static_cast<size_t>(v)] = op.id;
        r.nodes.push_back(op);
    }
    r.succ.assign(static_cast<size_t>(r.size()), {});
    r.pred.assign(static_cast<size_t>(r.size()), {});

    // arcs: reverse traversal through local gates, stopping at remote gates
    std::vector<int> stamp(static_cast<size_t>(n), -1);
    std::vector<int> stack;
    for (const auto& op : r.nodes) {
        stack.clear();
        std::vector<int> preds;
        for (int p : dag.pred[static_cast<size_t>(op.dag_node)]) stack.push_back(p);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (stamp[static_cast<size_t>(u)] == op.id) continue;
            stamp[static_cast<size_t>(u)] = op.id;
            int rid = remote_id[static_cast<size_t>(u)];
            if (rid >= 0) {
                preds.push_back(rid);
                continue;  // remote gates block the walk
            }
            for (int p : dag.pred[static_cast<size_t>(u)]) stack.push_back(p);
        }
        std::sort(preds.begin(), preds.end());
        preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
        for (int p : preds) {
            r.succ[static_cast<size_t>(p)].push_back(op.id);
            r.pred[static_cast<size_t>(op.id)].push_back(p);
        }
    }

    // transitive reduction via descendant bitsets (remote ids are topological
    // because gate order is)
    int m = r.size();
    constexpr int kReductionLimit = 20000;
    if (m > 1 && m <= kReductionLimit) {
        size_t words = (static_cast<size_t>(m) + 63) / 64;
        std::vector<std::vector<std::uint64_t>> desc(static_cast<size_t>(m),
                                                     std::vector<std::uint64_t>(words, 0));
        for (int u = m - 1; u >= 0; --u) {
            for (int v : r.succ[static_cast<size_t>(u)]) {
                auto& du = desc[static_cast<size_t>(u)];
                const auto& dv = desc[static_cast<size_t>(v)];
                du[static_cast<size_t>(v) / 64] |= 1ull << (static_cast<size_t>(v) % 64);
                for (size_t w = 0; w < words; ++w) du[w] |= dv[w];
            }
        }
        for (int u = 0; u < m; ++u) {
            auto& succs = r.succ[static_cast<size_t>(u)];
            std::vector<int> kept;
            for (int v : succs) {
                bool redundant = false;
                for (int s : succs) {
                    if (s == v) continue;
                    if (desc[static_cast<size_t>(s)][static_cast<size_t>(v) / 64] &
                        (1ull << (static_cast<size_t>(v) % 64))) {
                        redundant = true;
                        break;
                    }
                }
                if (!redundant) kept.push_back(v);
            }
            succs = std::move(kept);
        }
        for (auto& p : r.pred) p.clear();
        for (int u = 0; u < m; ++u)
            for (int v : r.succ[static_cast<size_t>(u)])
                r.pred[static_cast<size_t>(v)].push_back(u);
    }

    compute_priorities(r);
    return r;
}

void compute_priorities(RemoteDag& r) {
    int m = r.size();
    std::vector<int> outdeg(static_cast<size_t>(m), 0);
    for (int v = 0; v < m; ++v)
        outdeg[static_cast<size_t>(v)] = static_cast<int>(r.succ[static_cast<size_t>(v)].size());
    std::vector<int> stack;
    for (int v = 0; v < m; ++v)
        if (outdeg[static_cast<size_t>(v)] == 0) {
            r.nodes[static_cast<size_t>(v)].priority = 0;
            stack.push_back(v);
        }
    int seen = 0;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        ++seen;
        for (int p : r.pred[static_cast<size_t>(u)]) {
            r.nodes[static_cast<size_t>(p)].priority =
                std::max(r.nodes[static_cast<size_t>(p)].priority,
                         r.nodes[static_cast<size_t>(u)].priority + 1);
            if (--outdeg[static_cast<size_t>(p)] == 0) stack.push_back(p);
        }
    }
    if (seen != m) fail(ErrorCode::InvariantViolation, "remote DAG contains a cycle");
}

AllocPolicy alloc_policy_from_name(const std::string& name) {
    if (name == "cloudqc") return AllocPolicy::CloudQC;
    if (name == "greedy") return AllocPolicy::Greedy;
    if (name == "average") return AllocPolicy::Average;
    if (name == "random") return AllocPolicy::Random;
    fail(ErrorCode::ConfigError, "unknown allocation policy '" + name + "'");
}

const char* alloc_policy_name(AllocPolicy p) {
    switch (p) {
    case AllocPolicy::CloudQC: return "cloudqc";
    case AllocPolicy::Greedy: return "greedy";
    case AllocPolicy::Average: return "average";
    case AllocPolicy::Random: return "random";
    }
    return "?";
}

namespace {

std::vector<int> effective_priorities(const std::vector<AllocRequest>& requests,
                                      int aging_threshold) {
    int max_p = 0;
    for (const auto& rq : requests) max_p = std::max(max_p, rq.priority);
    std::vector<int> eff(requests.size());
    for (size_t i = 0; i < requests.size(); ++i)
        eff[i] = requests[i].age >= aging_threshold ? max_p + 1 : requests[i].priority;
    return eff;
}

std::vector<size_t> priority_order(const std::vector<AllocRequest>& requests,
                                   const std::vector<int>& eff) {
    std::vector<size_t> order(requests.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (eff[a] != eff[b]) return eff[a] > eff[b];
        return requests[a].node_id < requests[b].node_id;
    });
    return order;
}

// Largest-remainder apportionment of `budget` over weights.
std::vector<int> largest_remainder(int budget, const std::vector<long long>& weights) {
    long long total = std::accumulate(weights.begin(), weights.end(), 0ll);
    std::vector<int> share(weights.size(), 0);
    if (total <= 0 || budget <= 0) return share;
    std::vector<std::pair<double, size_t>> rema;
    int assigned = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
        double exact = static_cast<double>(budget) * weights[i] / static_cast<double>(total);
        share[i] = static_cast<int>(exact);
        assigned += share[i];
        rema.emplace_back(exact - share[i], i);
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int rem = budget - assigned; rem > 0; --rem)
        share[rema[static_cast<size_t>(budget - assigned - rem)].second] += 1;
    return share;
}

}  // namespace

AllocationRound allocate_round(const std::vector<AllocRequest>& requests,
                               std::vector<int>& budgets, AllocPolicy policy,
                               std::mt19937_64& rng, int aging_threshold) {
    AllocationRound round;
    round.pairs.assign(requests.size(), 0);
    if (requests.empty()) return round;
    for (const auto& rq : requests)
        if (rq.qpu_a == rq.qpu_b)
            fail(ErrorCode::InvariantViolation, "remote gate with identical endpoint QPUs");

    std::vector<int> eff = effective_priorities(requests, aging_threshold);
    std::vector<size_t> order = priority_order(requests, eff);

    switch (policy) {
    case AllocPolicy::CloudQC: {
        // base pair for every front node both endpoints can afford
        for (size_t i : order) {
            const auto& rq = requests[i];
            if (budgets[static_cast<size_t>(rq.qpu_a)] >= 1 &&
                budgets[static_cast<size_t>(rq.qpu_b)] >= 1) {
                round.pairs[i] = 1;
                budgets[static_cast<size_t>(rq.qpu_a)] -= 1;
                budgets[static_cast<size_t>(rq.qpu_b)] -= 1;
            }
        }
        // spare budget per QPU, proportional to priority+1, largest remainder
        int num_qpus = static_cast<int>(budgets.size());
        for (int qpu = 0; qpu < num_qpus; ++qpu) {
            if (budgets[static_cast<size_t>(qpu)] <= 0) continue;
            std::vector<size_t> eligible;
            std::vector<long long> weights;
            for (size_t i : order) {  // priority order so caps hit low priority last
                if (round.pairs[i] == 0) continue;
                if (requests[i].qpu_a != qpu && requests[i].qpu_b != qpu) continue;
                eligible.push_back(i);
                weights.push_back(eff[i] + 1);
            }
            if (eligible.empty()) continue;
            std::vector<int> share = largest_remainder(budgets[static_cast<size_t>(qpu)], weights);
            for (size_t e = 0; e < eligible.size(); ++e) {
                size_t i = eligible[e];
                int other = requests[i].qpu_a == qpu ? requests[i].qpu_b : requests[i].qpu_a;
                int extra = std::min({share[e], budgets[static_cast<size_t>(qpu)],
                                      budgets[static_cast<size_t>(other)]});
                if (extra <= 0) continue;
                round.pairs[i] += extra;
                budgets[static_cast<size_t>(qpu)] -= extra;
                budgets[static_cast<size_t>(other)] -= extra;
            }
        }
        break;
    }
    case AllocPolicy::Greedy: {
        for (size_t i : order) {
            const auto& rq = requests[i];
            int take = std::min(budgets[static_cast<size_t>(rq.qpu_a)],
                                budgets[static_cast<size_t>(rq.qpu_b)]);
            if (take <= 0) continue;
            round.pairs[i] = take;
            budgets[static_cast<size_t>(rq.qpu_a)] -= take;
            budgets[static_cast<size_t>(rq.qpu_b)] -= take;
        }
        break;
    }
    case AllocPolicy::Average: {
        std::vector<int> incident(budgets.size(), 0);
        for (const auto& rq : requests) {
            ++incident[static_cast<size_t>(rq.qpu_a)];
            ++incident[static_cast<size_t>(rq.qpu_b)];
        }
        for (size_t i = 0; i < requests.size(); ++i) {
            const auto& rq = requests[i];
            int fair_a = budgets[static_cast<size_t>(rq.qpu_a)] /
                         std::max(1, incident[static_cast<size_t>(rq.qpu_a)]);
            int fair_b = budgets[static_cast<size_t>(rq.qpu_b)] /
                         std::max(1, incident[static_cast<size_t>(rq.qpu_b)]);
            int take = std::min(fair_a, fair_b);
            if (take <= 0) continue;
            round.pairs[i] = take;
        }
        for (size_t i = 0; i < requests.size(); ++i) {
            budgets[static_cast<size_t>(requests[i].qpu_a)] -= round.pairs[i];
            budgets[static_cast<size_t>(requests[i].qpu_b)] -= round.pairs[i];
        }
        // leftover single pairs by node id ascending
        bool progress = true;
        while (progress) {
            progress = false;
            for (size_t i = 0; i < requests.size(); ++i) {
                const auto& rq = requests[i];
                if (budgets[static_cast<size_t>(rq.qpu_a)] >= 1 &&
                    budgets[static_cast<size_t>(rq.qpu_b)] >= 1) {
                    round.pairs[i] += 1;
                    budgets[static_cast<size_t>(rq.qpu_a)] -= 1;
                    budgets[static_cast<size_t>(rq.qpu_b)] -= 1;
                    progress = true;
                }
            }
        }
        break;
    }
    case AllocPolicy::Random: {
        while (true) {
            std::vector<size_t> eligible;
            for (size_t i = 0; i < requests.size(); ++i)
                if (budgets[static_cast<size_t>(requests[i].qpu_a)] >= 1 &&
                    budgets[static_cast<size_t>(requests[i].qpu_b)] >= 1)
                    eligible.push_back(i);
            if (eligible.empty()) break;
            std::uniform_int_distribution<size_t> pick(0, eligible.size() - 1);
            size_t i = eligible[pick(rng)];
            round.pairs[i] += 1;
            budgets[static_cast<size_t>(requests[i].qpu_a)] -= 1;
            budgets[static_cast<size_t>(requests[i].qpu_b)] -= 1;
        }
        break;
    }
    }

    // priority dominance check (cloudqc): same QPU pair, higher effective
    // priority never receives fewer pairs
    if (policy == AllocPolicy::CloudQC && requests.size() <= 512) {
        for (size_t a = 0; a < requests.size(); ++a)
            for (size_t b = 0; b < requests.size(); ++b) {
                if (a == b) continue;
                if (requests[a].qpu_a != requests[b].qpu_a ||
                    requests[a].qpu_b != requests[b].qpu_b)
                    continue;
                if (eff[a] > eff[b] && round.pairs[a] < round.pairs[b])
                    fail(ErrorCode::InvariantViolation, "priority dominance violated");
            }
    }
    return round;
}

double attempt_success_probability(int pairs, int hops, double p_link) {
    if (pairs < 0) fail(ErrorCode::BadParams, "negative pair count");
    if (p_link <= 0.0 || p_link > 1.0) fail(ErrorCode::BadParams, "p_link must be in (0, 1]");
    if (hops <= 0) return 1.0;  // same-QPU degenerate guard
    double per_pair = std::pow(p_link, hops);
    return 1.0 - std::pow(1.0 - per_pair, pairs);
}

}  // namespace qcloud
