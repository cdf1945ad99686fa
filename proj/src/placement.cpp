#include "qcloud/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "qcloud/error.hpp"

namespace qcloud {

std::vector<int> Placement::qpu_loads(int num_qpus) const {
    std::vector<int> loads(static_cast<size_t>(num_qpus), 0);
    for (int q : qubit_to_qpu)
        if (q >= 0) ++loads[static_cast<size_t>(q)];
    return loads;
}

long long placement_comm_cost(const InteractionGraph& g, const std::vector<int>& qubit_to_qpu,
                              const CloudTopology& t) {
    long long cost = 0;
    for (const auto& [e, w] : g.weights) {
        int a = qubit_to_qpu[static_cast<size_t>(e.first)];
        int b = qubit_to_qpu[static_cast<size_t>(e.second)];
        if (a != b) cost += static_cast<long long>(w) * t.dist(a, b);
    }
    return cost;
}

long long placement_remote_ops(const InteractionGraph& g, const std::vector<int>& qubit_to_qpu) {
    long long ops = 0;
    for (const auto& [e, w] : g.weights)
        if (qubit_to_qpu[static_cast<size_t>(e.first)] != qubit_to_qpu[static_cast<size_t>(e.second)])
            ops += w;
    return ops;
}

namespace {

// QPU-graph edge weights for community detection: 1, or 1 + normalized mean
// free computing qubits of the endpoints in resource mode.
double qpu_edge_weight(const CloudTopology& t, int a, int b, CommunityWeightMode mode) {
    if (mode == CommunityWeightMode::Uniform) return 1.0;
    int max_cap = std::max(1, t.max_comp_capacity());
    double mean_free = 0.5 * (t.qpus[static_cast<size_t>(a)].comp_free +
                              t.qpus[static_cast<size_t>(b)].comp_free);
    return 1.0 + mean_free / max_cap;
}

}  // namespace

double modularity_of(const CloudTopology& t, const std::vector<int>& community_of,
                     CommunityWeightMode mode) {
    int n = t.size();
    double two_m = 0.0;
    std::vector<double> degree(static_cast<size_t>(n), 0.0);
    for (auto [a, b] : t.links) {
        double w = qpu_edge_weight(t, a, b, mode);
        degree[static_cast<size_t>(a)] += w;
        degree[static_cast<size_t>(b)] += w;
        two_m += 2.0 * w;
    }
    if (two_m == 0.0) return 0.0;
    double q = 0.0;
    for (auto [a, b] : t.links) {
        if (community_of[static_cast<size_t>(a)] == community_of[static_cast<size_t>(b)])
            q += 2.0 * qpu_edge_weight(t, a, b, mode) / two_m;
    }
    // subtract expected intra-community degree products
    int num_comm = *std::max_element(community_of.begin(), community_of.end()) + 1;
    std::vector<double> comm_deg(static_cast<size_t>(num_comm), 0.0);
    for (int v = 0; v < n; ++v)
        comm_deg[static_cast<size_t>(community_of[static_cast<size_t>(v)])] +=
            degree[static_cast<size_t>(v)];
    for (double d : comm_deg) q -= (d / two_m) * (d / two_m);
    return q;
}

CommunityProfile detect_communities(const CloudTopology& t, CommunityWeightMode mode) {
    int n = t.size();
    double two_m = 0.0;
    // e[a][b]: total edge weight between current communities a and b
    std::vector<std::vector<double>> e(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
    std::vector<double> tot(static_cast<size_t>(n), 0.0);  // community degree sums
    for (auto [a, b] : t.links) {
        double w = qpu_edge_weight(t, a, b, mode);
        e[static_cast<size_t>(a)][static_cast<size_t>(b)] += w;
        e[static_cast<size_t>(b)][static_cast<size_t>(a)] += w;
        tot[static_cast<size_t>(a)] += w;
        tot[static_cast<size_t>(b)] += w;
        two_m += 2.0 * w;
    }
    std::vector<int> community_of(static_cast<size_t>(n));
    std::iota(community_of.begin(), community_of.end(), 0);
    std::vector<bool> alive(static_cast<size_t>(n), true);

    if (two_m > 0.0) {
        while (true) {
            double best_dq = 1e-12;
            int best_a = -1, best_b = -1;
            for (int a = 0; a < n; ++a) {
                if (!alive[static_cast<size_t>(a)]) continue;
                for (int b = a + 1; b < n; ++b) {
                    if (!alive[static_cast<size_t>(b)]) continue;
                    if (e[static_cast<size_t>(a)][static_cast<size_t>(b)] == 0.0) continue;
                    double dq = 2.0 * (e[static_cast<size_t>(a)][static_cast<size_t>(b)] / two_m -
                                       (tot[static_cast<size_t>(a)] / two_m) *
                                           (tot[static_cast<size_t>(b)] / two_m));
                    if (dq > best_dq) {
                        best_dq = dq;
                        best_a = a;
                        best_b = b;
                    }
                }
            }
            if (best_a < 0) break;
            // merge b into a (a < b keeps ids stable)
            for (int c = 0; c < n; ++c) {
                if (!alive[static_cast<size_t>(c)] || c == best_a || c == best_b) continue;
                e[static_cast<size_t>(best_a)][static_cast<size_t>(c)] +=
                    e[static_cast<size_t>(best_b)][static_cast<size_t>(c)];
                e[static_cast<size_t>(c)][static_cast<size_t>(best_a)] =
                    e[static_cast<size_t>(best_a)][static_cast<size_t>(c)];
            }
            tot[static_cast<size_t>(best_a)] += tot[static_cast<size_t>(best_b)];
            alive[static_cast<size_t>(best_b)] = false;
            for (int v = 0; v < n; ++v)
                if (community_of[static_cast<size_t>(v)] == best_b)
                    community_of[static_cast<size_t>(v)] = best_a;
        }
    }

    // compact community ids in order of smallest member
    std::vector<int> remap(static_cast<size_t>(n), -1);
    int next = 0;
    CommunityProfile profile;
    for (int v = 0; v < n; ++v) {
        int c = community_of[static_cast<size_t>(v)];
        if (remap[static_cast<size_t>(c)] < 0) {
            remap[static_cast<size_t>(c)] = next++;
            profile.communities.emplace_back();
            profile.free_qubits.push_back(0);
        }
        int cid = remap[static_cast<size_t>(c)];
        profile.communities[static_cast<size_t>(cid)].push_back(v);
        profile.free_qubits[static_cast<size_t>(cid)] += t.qpus[static_cast<size_t>(v)].comp_free;
        community_of[static_cast<size_t>(v)] = cid;
    }
    profile.modularity = modularity_of(t, community_of, mode);
    return profile;
}

namespace {

// Part-level interaction graph: nodes = parts, weights = inter-part D sums.
struct PartGraph {
    int k = 0;
    std::vector<std::vector<long long>> w;
    std::vector<std::vector<int>> adj;
};

PartGraph build_part_graph(const InteractionGraph& g, const PartitionResult& parts) {
    PartGraph pg;
    pg.k = parts.k;
    pg.w.assign(static_cast<size_t>(parts.k),
                std::vector<long long>(static_cast<size_t>(parts.k), 0));
    for (const auto& [e, wt] : g.weights) {
        int a = parts.assignment[static_cast<size_t>(e.first)];
        int b = parts.assignment[static_cast<size_t>(e.second)];
        if (a == b) continue;
        pg.w[static_cast<size_t>(a)][static_cast<size_t>(b)] += wt;
        pg.w[static_cast<size_t>(b)][static_cast<size_t>(a)] += wt;
    }
    pg.adj.assign(static_cast<size_t>(parts.k), {});
    for (int a = 0; a < parts.k; ++a)
        for (int b = 0; b < parts.k; ++b)
            if (b != a && pg.w[static_cast<size_t>(a)][static_cast<size_t>(b)] > 0)
                pg.adj[static_cast<size_t>(a)].push_back(b);
    return pg;
}

// Graph center of the part graph: min eccentricity over unweighted hops,
// computed within the part's connected component; tie -> lowest id.
int part_graph_center(const PartGraph& pg) {
    int k = pg.k;
    int best = 0;
    long long best_key = std::numeric_limits<long long>::max();
    for (int s = 0; s < k; ++s) {
        std::vector<int> dist(static_cast<size_t>(k), -1);
        std::queue<int> q;
        dist[static_cast<size_t>(s)] = 0;
        q.push(s);
        int ecc = 0;
        int reached = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : pg.adj[static_cast<size_t>(u)])
                if (dist[static_cast<size_t>(v)] < 0) {
                    dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
                    ecc = std::max(ecc, dist[static_cast<size_t>(v)]);
                    ++reached;
                    q.push(v);
                }
        }
        // prefer centers reaching more parts, then lower eccentricity
        long long key = static_cast<long long>(k - reached) * 1000 + ecc;
        if (key < best_key) {
            best_key = key;
            best = s;
        }
    }
    return best;
}

// Center of a QPU set: min eccentricity under full-topology hop distance
// restricted to set members; tie -> lowest id.
int qpu_set_center(const CloudTopology& t, const std::vector<int>& members) {
    int best = members.front();
    int best_ecc = std::numeric_limits<int>::max();
    for (int v : members) {
        int ecc = 0;
        for (int u : members) ecc = std::max(ecc, t.dist(v, u));
        if (ecc < best_ecc) {
            best_ecc = ecc;
            best = v;
        }
    }
    return best;
}

// Greedy feasibility check: can parts (sizes desc) land on distinct members?
bool fits_distinct(const CloudTopology& t, const std::vector<int>& members,
                   std::vector<int> sizes) {
    std::vector<int> frees;
    for (int m : members) frees.push_back(t.qpus[static_cast<size_t>(m)].comp_free);
    std::sort(frees.rbegin(), frees.rend());
    std::sort(sizes.rbegin(), sizes.rend());
    if (sizes.size() > frees.size()) return false;
    for (size_t i = 0; i < sizes.size(); ++i)
        if (sizes[i] > frees[i]) return false;
    return true;
}

std::vector<int> bfs_qpu_set(const CloudTopology& t, const std::vector<int>& part_sizes) {
    // start from the least-loaded QPU (most free computing qubits, tie low id)
    int start = 0;
    for (int v = 1; v < t.size(); ++v)
        if (t.qpus[static_cast<size_t>(v)].comp_free >
            t.qpus[static_cast<size_t>(start)].comp_free)
            start = v;
    int need = std::accumulate(part_sizes.begin(), part_sizes.end(), 0);
    std::vector<int> members;
    std::vector<bool> seen(static_cast<size_t>(t.size()), false);
    std::queue<int> q;
    q.push(start);
    seen[static_cast<size_t>(start)] = true;
    int have = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        members.push_back(u);
        have += t.qpus[static_cast<size_t>(u)].comp_free;
        if (have >= need && members.size() >= part_sizes.size() &&
            fits_distinct(t, members, part_sizes))
            break;
        for (int v : t.neighbors[static_cast<size_t>(u)])
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = true;
                q.push(v);
            }
    }
    std::sort(members.begin(), members.end());
    return members;
}

}  // namespace

Placement find_placement(const InteractionGraph& g, const PartitionResult& parts,
                         const CloudTopology& t, QpuSetMode mode) {
    const int k = parts.k;
    int max_free = t.max_comp_free();
    for (int s : parts.part_sizes)
        if (s > max_free)
            fail(ErrorCode::NoFeasibleAssignment, "a part exceeds every QPU's free capacity");

    PartGraph pg = build_part_graph(g, parts);

    // choose the QPU set to seed the mapping
    std::vector<int> members;
    if (mode == QpuSetMode::Community) {
        CommunityProfile profile = detect_communities(t, CommunityWeightMode::Resource);
        int best = -1;
        int best_free = std::numeric_limits<int>::max();
        for (size_t c = 0; c < profile.communities.size(); ++c) {
            if (!fits_distinct(t, profile.communities[c], parts.part_sizes)) continue;
            if (profile.free_qubits[c] < best_free) {
                best_free = profile.free_qubits[c];
                best = static_cast<int>(c);
            }
        }
        if (best >= 0)
            members = profile.communities[static_cast<size_t>(best)];
        else {
            members.resize(static_cast<size_t>(t.size()));
            std::iota(members.begin(), members.end(), 0);
        }
    } else {
        members = bfs_qpu_set(t, parts.part_sizes);
        if (!fits_distinct(t, members, parts.part_sizes)) {
            members.resize(static_cast<size_t>(t.size()));
            std::iota(members.begin(), members.end(), 0);
        }
    }

    int center_part = part_graph_center(pg);
    int center_qpu = qpu_set_center(t, members);

    std::vector<int> part_to_qpu(static_cast<size_t>(k), -1);
    std::vector<int> remaining_free(static_cast<size_t>(t.size()));
    std::vector<bool> used(static_cast<size_t>(t.size()), false);
    for (int v = 0; v < t.size(); ++v)
        remaining_free[static_cast<size_t>(v)] = t.qpus[static_cast<size_t>(v)].comp_free;

    auto assign = [&](int part, int qpu) {
        part_to_qpu[static_cast<size_t>(part)] = qpu;
        remaining_free[static_cast<size_t>(qpu)] -= parts.part_sizes[static_cast<size_t>(part)];
        used[static_cast<size_t>(qpu)] = true;
    };

    // candidate key: weighted hop distance to already-mapped neighbors,
    // then free-qubit surplus, then id
    auto pick_qpu = [&](int part) -> int {
        int size = parts.part_sizes[static_cast<size_t>(part)];
        int best = -1;
        double best_dist = 0.0;
        int best_surplus = 0;
        auto consider = [&](int qpu) {
            if (used[static_cast<size_t>(qpu)]) return;
            if (remaining_free[static_cast<size_t>(qpu)] < size) return;
            double d = 0.0;
            bool any_neighbor = false;
            for (int nb : pg.adj[static_cast<size_t>(part)]) {
                int mapped = part_to_qpu[static_cast<size_t>(nb)];
                if (mapped < 0) continue;
                any_neighbor = true;
                d += static_cast<double>(pg.w[static_cast<size_t>(part)][static_cast<size_t>(nb)]) *
                     t.dist(qpu, mapped);
            }
            if (!any_neighbor) d = t.dist(qpu, center_qpu);
            int surplus = remaining_free[static_cast<size_t>(qpu)] - size;
            if (best < 0 || d < best_dist ||
                (d == best_dist && (surplus < best_surplus ||
                                    (surplus == best_surplus && qpu < best)))) {
                best = qpu;
                best_dist = d;
                best_surplus = surplus;
            }
        };
        for (int m : members) consider(m);
        if (best < 0)
            for (int v = 0; v < t.size(); ++v) consider(v);  // widen beyond the community
        return best;
    };

    // seed: center part onto the community center (or nearest feasible QPU)
    {
        int size = parts.part_sizes[static_cast<size_t>(center_part)];
        int seed_qpu = center_qpu;
        if (remaining_free[static_cast<size_t>(seed_qpu)] < size) {
            seed_qpu = pick_qpu(center_part);
            if (seed_qpu < 0)
                fail(ErrorCode::NoFeasibleAssignment, "no QPU can host the center part");
        }
        assign(center_part, seed_qpu);
    }

    // BFS over the part graph, neighbors in descending edge weight (tie low id)
    std::queue<int> frontier;
    std::vector<bool> enqueued(static_cast<size_t>(k), false);
    frontier.push(center_part);
    enqueued[static_cast<size_t>(center_part)] = true;
    int mapped_count = 1;
    while (mapped_count < k) {
        int u;
        if (!frontier.empty()) {
            u = frontier.front();
            frontier.pop();
        } else {
            // disconnected part graph: restart from the lowest unmapped part
            u = -1;
            for (int p = 0; p < k; ++p)
                if (part_to_qpu[static_cast<size_t>(p)] < 0 && !enqueued[static_cast<size_t>(p)]) {
                    u = p;
                    break;
                }
            if (u < 0) break;
            enqueued[static_cast<size_t>(u)] = true;
        }
        if (part_to_qpu[static_cast<size_t>(u)] < 0) {
            int qpu = pick_qpu(u);
            if (qpu < 0)
                fail(ErrorCode::NoFeasibleAssignment,
                     "part " + std::to_string(u) + " fits on no remaining QPU");
            assign(u, qpu);
            ++mapped_count;
        }
        std::vector<int> nbs = pg.adj[static_cast<size_t>(u)];
        std::sort(nbs.begin(), nbs.end(), [&](int a, int b) {
            long long wa = pg.w[static_cast<size_t>(u)][static_cast<size_t>(a)];
            long long wb = pg.w[static_cast<size_t>(u)][static_cast<size_t>(b)];
            return wa != wb ? wa > wb : a < b;
        });
        for (int v : nbs)
            if (!enqueued[static_cast<size_t>(v)]) {
                enqueued[static_cast<size_t>(v)] = true;
                frontier.push(v);
            }
    }
    for (int p = 0; p < k; ++p)
        if (part_to_qpu[static_cast<size_t>(p)] < 0) {
            int qpu = pick_qpu(p);
            if (qpu < 0) fail(ErrorCode::NoFeasibleAssignment, "unmappable part");
            assign(p, qpu);
        }

    Placement pl;
    pl.parts = k;
    pl.qubit_to_qpu.resize(static_cast<size_t>(g.n));
    for (int q = 0; q < g.n; ++q)
        pl.qubit_to_qpu[static_cast<size_t>(q)] =
            part_to_qpu[static_cast<size_t>(parts.assignment[static_cast<size_t>(q)])];
    pl.qpus_used = part_to_qpu;
    std::sort(pl.qpus_used.begin(), pl.qpus_used.end());
    pl.qpus_used.erase(std::unique(pl.qpus_used.begin(), pl.qpus_used.end()), pl.qpus_used.end());
    pl.comm_cost = placement_comm_cost(g, pl.qubit_to_qpu, t);
    pl.remote_ops = placement_remote_ops(g, pl.qubit_to_qpu);
    return pl;
}

double estimate_time(const GateDag& dag, const Circuit& c, const std::vector<int>& part_of_qubit,
                     const LatencyModel& lat, double p_epr) {
    if (p_epr <= 0.0 || p_epr > 1.0) fail(ErrorCode::BadParams, "p_epr must be in (0, 1]");
    int n = dag.size();
    std::vector<double> finish(static_cast<size_t>(n), 0.0);
    std::vector<int> indeg(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v)
        indeg[static_cast<size_t>(v)] = static_cast<int>(dag.pred[static_cast<size_t>(v)].size());
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
        if (indeg[static_cast<size_t>(v)] == 0) stack.push_back(v);
    double makespan = 0.0;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        const Gate& g = c.gates[static_cast<size_t>(dag.gate_index[static_cast<size_t>(u)])];
        double duration;
        if (g.kind == GateKind::OneQubit) {
            duration = lat.t_1q;
        } else {
            bool remote = part_of_qubit[static_cast<size_t>(g.qubits[0])] !=
                          part_of_qubit[static_cast<size_t>(g.qubits[1])];
            duration = remote ? lat.t_iep / p_epr + lat.t_2q + lat.t_ms : lat.t_2q;
        }
        double start = 0.0;
        for (int p : dag.pred[static_cast<size_t>(u)])
            start = std::max(start, finish[static_cast<size_t>(p)]);
        finish[static_cast<size_t>(u)] = start + duration;
        makespan = std::max(makespan, finish[static_cast<size_t>(u)]);
        for (int v : dag.succ[static_cast<size_t>(u)])
            if (--indeg[static_cast<size_t>(v)] == 0) stack.push_back(v);
    }
    return makespan;
}

Placement place_circuit(const Circuit& c, const CloudTopology& t, const PlacementConfig& cfg) {
    const int n = c.num_qubits;
    GateDag dag = build_dag(c);
    InteractionGraph g = build_interaction_graph(c);

    // whole-circuit fit: best-fit single QPU (min surplus, tie low id)
    int best_qpu = -1;
    for (int v = 0; v < t.size(); ++v) {
        int free = t.qpus[static_cast<size_t>(v)].comp_free;
        if (free < n) continue;
        if (best_qpu < 0 || free < t.qpus[static_cast<size_t>(best_qpu)].comp_free) best_qpu = v;
    }
    if (best_qpu >= 0) {
        Placement pl;
        pl.qubit_to_qpu.assign(static_cast<size_t>(n), best_qpu);
        pl.qpus_used = {best_qpu};
        pl.parts = 1;
        std::vector<int> all_same(static_cast<size_t>(n), 0);
        pl.est_time = estimate_time(dag, c, all_same, cfg.latency, cfg.p_epr);
        pl.score = cfg.score_alpha + cfg.score_beta;
        return pl;
    }

    if (n > t.total_comp_free())
        fail(ErrorCode::NoFeasibleAssignment, "circuit exceeds total free computing qubits");

    int max_cap = std::max(1, t.max_comp_capacity());
    int k_min = std::max(2, (n + max_cap - 1) / max_cap);
    int k_max = std::min(t.size(), std::max(k_min, (n + 1) / 2));

    struct Candidate {
        Placement pl;
        double time;
        int k;
    };
    std::vector<Candidate> candidates;
    int max_free = std::max(1, t.max_comp_free());
    for (double alpha : cfg.alpha_list) {
        for (int k = k_min; k <= k_max; ++k) {
            // no part may outgrow the roomiest QPU: cap the effective alpha so
            // ceil((1+a)n/k) <= max_free
            double alpha_cap =
                static_cast<double>(max_free) * k / static_cast<double>(n) - 1.0 - 1e-9;
            double a = std::min(alpha, alpha_cap);
            if (a < 0.0) {
                if (static_cast<long long>(max_free) * k < n) continue;
                a = 0.0;
            }
            PartitionResult parts;
            try {
                parts = graph_partition(g, k, a, cfg.seed);
            } catch (const Error&) {
                continue;
            }
            Placement pl;
            try {
                pl = find_placement(g, parts, t, cfg.qpu_set_mode);
            } catch (const Error& err) {
                if (err.code() == ErrorCode::NoFeasibleAssignment) continue;
                throw;
            }
            pl.est_time = estimate_time(dag, c, parts.assignment, cfg.latency, cfg.p_epr);
            if (cfg.remote_load_epsilon >= 0.0) {
                bool ok = true;
                for (int v : pl.qpus_used)
                    if (static_cast<double>(remote_load({pl}, {g}, v)) > cfg.remote_load_epsilon) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
            }
            candidates.push_back({std::move(pl), 0.0, k});
            candidates.back().time = candidates.back().pl.est_time;
        }
    }
    if (candidates.empty())
        fail(ErrorCode::NoFeasibleAssignment, "no feasible multi-QPU placement found");

    double t_min = std::numeric_limits<double>::max(), t_max = 0.0;
    double c_min = std::numeric_limits<double>::max(), c_max = 0.0;
    for (const auto& cand : candidates) {
        t_min = std::min(t_min, cand.time);
        t_max = std::max(t_max, cand.time);
        c_min = std::min(c_min, static_cast<double>(cand.pl.comm_cost));
        c_max = std::max(c_max, static_cast<double>(cand.pl.comm_cost));
    }
    auto norm = [](double v, double lo, double hi) {
        return hi > lo ? (v - lo) / (hi - lo) : 0.0;
    };
    int best = -1;
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
        auto& cand = candidates[static_cast<size_t>(i)];
        cand.pl.score = cfg.score_alpha * (1.0 - norm(cand.time, t_min, t_max)) +
                        cfg.score_beta * (1.0 - norm(static_cast<double>(cand.pl.comm_cost),
                                                     c_min, c_max));
        if (best < 0) {
            best = i;
            continue;
        }
        const auto& bc = candidates[static_cast<size_t>(best)];
        if (cand.pl.score > bc.pl.score ||
            (cand.pl.score == bc.pl.score &&
             (cand.pl.comm_cost < bc.pl.comm_cost ||
              (cand.pl.comm_cost == bc.pl.comm_cost && cand.k < bc.k))))
            best = i;
    }
    return candidates[static_cast<size_t>(best)].pl;
}

long long remote_load(const std::vector<Placement>& placements,
                      const std::vector<InteractionGraph>& graphs, int qpu_id) {
    long long load = 0;
    for (size_t i = 0; i < placements.size(); ++i) {
        const auto& pl = placements[i];
        const auto& g = graphs[i];
        for (const auto& [e, w] : g.weights) {
            int a = pl.qubit_to_qpu[static_cast<size_t>(e.first)];
            int b = pl.qubit_to_qpu[static_cast<size_t>(e.second)];
            if (a != b && (a == qpu_id || b == qpu_id)) load += w;
        }
    }
    return load;
}

BatchDecision order_batch(const std::vector<CircuitStats>& stats, const BatchWeights& lambda,
                          int total_free_qubits, BatchOrder order) {
    if (stats.empty()) fail(ErrorCode::BadParams, "empty batch");
    int n = static_cast<int>(stats.size());

    std::vector<double> metric(static_cast<size_t>(n), 0.0);
    if (order != BatchOrder::Fifo) {
        // min-max normalize each term over the batch, then combine
        double d_lo = 1e300, d_hi = -1e300, n_lo = 1e300, n_hi = -1e300;
        double p_lo = 1e300, p_hi = -1e300;
        std::vector<double> density(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const auto& s = stats[static_cast<size_t>(i)];
            density[static_cast<size_t>(i)] =
                s.num_qubits > 0 ? static_cast<double>(s.two_qubit_gates) / s.num_qubits : 0.0;
            d_lo = std::min(d_lo, density[static_cast<size_t>(i)]);
            d_hi = std::max(d_hi, density[static_cast<size_t>(i)]);
            n_lo = std::min(n_lo, static_cast<double>(s.num_qubits));
            n_hi = std::max(n_hi, static_cast<double>(s.num_qubits));
            p_lo = std::min(p_lo, static_cast<double>(s.depth));
            p_hi = std::max(p_hi, static_cast<double>(s.depth));
        }
        auto norm = [](double v, double lo, double hi) {
            return hi > lo ? (v - lo) / (hi - lo) : 0.0;
        };
        for (int i = 0; i < n; ++i) {
            const auto& s = stats[static_cast<size_t>(i)];
            metric[static_cast<size_t>(i)] =
                lambda.lambda1 * norm(density[static_cast<size_t>(i)], d_lo, d_hi) +
                lambda.lambda2 * norm(static_cast<double>(s.num_qubits), n_lo, n_hi) +
                lambda.lambda3 * norm(static_cast<double>(s.depth), p_lo, p_hi);
        }
    }

    BatchDecision d;
    d.order.resize(static_cast<size_t>(n));
    std::iota(d.order.begin(), d.order.end(), 0);
    if (order == BatchOrder::MetricDescending) {
        std::stable_sort(d.order.begin(), d.order.end(), [&](int a, int b) {
            return metric[static_cast<size_t>(a)] != metric[static_cast<size_t>(b)]
                       ? metric[static_cast<size_t>(a)] > metric[static_cast<size_t>(b)]
                       : a < b;
        });
    } else if (order == BatchOrder::MetricAscending) {
        std::stable_sort(d.order.begin(), d.order.end(), [&](int a, int b) {
            return metric[static_cast<size_t>(a)] != metric[static_cast<size_t>(b)]
                       ? metric[static_cast<size_t>(a)] < metric[static_cast<size_t>(b)]
                       : a < b;
        });
    }

    int free = total_free_qubits;
    bool blocked = false;
    for (int id : d.order) {
        int need = stats[static_cast<size_t>(id)].num_qubits;
        if (!blocked && need <= free) {
            d.selected.push_back(id);
            free -= need;
        } else {
            d.deferred.push_back(id);
            // plain FIFO blocks at the head of the queue; the metric orders
            // skip circuits that do not fit and keep selecting behind them
            if (order == BatchOrder::Fifo) blocked = true;
        }
    }
    return d;
}

}  // namespace qcloud
