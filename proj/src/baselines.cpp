#include "qcloud/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qcloud/error.hpp"

namespace qcloud {

namespace {

Placement finalize_placement(const InteractionGraph& g, std::vector<int> qubit_to_qpu,
                             const CloudTopology& t) {
    Placement pl;
    pl.qubit_to_qpu = std::move(qubit_to_qpu);
    pl.qpus_used = pl.qubit_to_qpu;
    std::sort(pl.qpus_used.begin(), pl.qpus_used.end());
    pl.qpus_used.erase(std::unique(pl.qpus_used.begin(), pl.qpus_used.end()),
                       pl.qpus_used.end());
    pl.parts = static_cast<int>(pl.qpus_used.size());
    pl.comm_cost = placement_comm_cost(g, pl.qubit_to_qpu, t);
    pl.remote_ops = placement_remote_ops(g, pl.qubit_to_qpu);
    return pl;
}

// Round-robin qubits over the member QPUs, respecting free capacities.
std::vector<int> round_robin_assign(int num_qubits, const std::vector<int>& members,
                                    const CloudTopology& t) {
    std::vector<int> free;
    for (int m : members) free.push_back(t.qpus[static_cast<size_t>(m)].comp_free);
    std::vector<int> map(static_cast<size_t>(num_qubits), -1);
    size_t cursor = 0;
    for (int q = 0; q < num_qubits; ++q) {
        size_t tried = 0;
        while (tried < members.size() && free[cursor] == 0) {
            cursor = (cursor + 1) % members.size();
            ++tried;
        }
        if (free[cursor] == 0)
            fail(ErrorCode::NoFeasibleAssignment, "selected QPU set cannot hold the circuit");
        map[static_cast<size_t>(q)] = members[cursor];
        --free[cursor];
        cursor = (cursor + 1) % members.size();
    }
    return map;
}

std::vector<int> random_connected_set(const Circuit& c, const CloudTopology& t,
                                      std::mt19937_64& rng) {
    int need = c.num_qubits;
    if (need > t.total_comp_free())
        fail(ErrorCode::NoFeasibleAssignment, "circuit exceeds total free computing qubits");
    std::uniform_int_distribution<int> pick_start(0, t.size() - 1);
    int start = pick_start(rng);
    std::vector<int> members;
    std::vector<bool> seen(static_cast<size_t>(t.size()), false);
    std::vector<int> frontier{start};
    seen[static_cast<size_t>(start)] = true;
    int have = 0;
    while (have < need && !frontier.empty()) {
        std::uniform_int_distribution<size_t> pick(0, frontier.size() - 1);
        size_t idx = pick(rng);
        int u = frontier[idx];
        frontier.erase(frontier.begin() + static_cast<long>(idx));
        members.push_back(u);
        have += t.qpus[static_cast<size_t>(u)].comp_free;
        for (int v : t.neighbors[static_cast<size_t>(u)])
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = true;
                frontier.push_back(v);
            }
    }
    if (have < need)
        fail(ErrorCode::NoFeasibleAssignment, "random search exhausted the component");
    std::sort(members.begin(), members.end());
    return members;
}

double hop_cost(const InteractionGraph& g, const std::vector<int>& map, const CloudTopology& t) {
    return static_cast<double>(placement_comm_cost(g, map, t));
}

}  // namespace

Placement random_placement(const Circuit& c, const CloudTopology& t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    InteractionGraph g = build_interaction_graph(c);
    auto members = random_connected_set(c, t, rng);
    auto map = round_robin_assign(c.num_qubits, members, t);
    return finalize_placement(g, std::move(map), t);
}

Placement sa_placement(const Circuit& c, const CloudTopology& t, const AnnealConfig& cfg) {
    if (cfg.cooling_rate <= 0.0 || cfg.cooling_rate >= 1.0)
        fail(ErrorCode::BadParams, "cooling rate must be in (0, 1)");
    std::mt19937_64 rng(cfg.seed);
    InteractionGraph g = build_interaction_graph(c);

    auto members = random_connected_set(c, t, rng);
    std::vector<int> state = round_robin_assign(c.num_qubits, members, t);
    std::vector<int> load(static_cast<size_t>(t.size()), 0);
    for (int q : state) ++load[static_cast<size_t>(q)];

    auto adj = g.adjacency();
    auto delta_relocate = [&](int qubit, int to) {
        int from = state[static_cast<size_t>(qubit)];
        double d = 0.0;
        for (auto [u, w] : adj[static_cast<size_t>(qubit)]) {
            int pu = state[static_cast<size_t>(u)];
            if (u == qubit) continue;
            d += static_cast<double>(w) * (t.dist(to, pu) - t.dist(from, pu));
        }
        return d;
    };

    double cost = hop_cost(g, state, t);
    double t0 = cfg.initial_temperature > 0.0 ? cfg.initial_temperature : std::max(cost, 1.0);
    double temp = t0;
    std::vector<int> best_state = state;
    double best_cost = cost;

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> pick_qubit(0, c.num_qubits - 1);
    std::uniform_int_distribution<int> pick_qpu(0, t.size() - 1);

    while (temp > t0 * cfg.stop_ratio) {
        for (int m = 0; m < cfg.moves_per_temperature; ++m) {
            if (c.num_qubits >= 2 && coin(rng) < 0.5) {
                // swap two qubits on different QPUs (capacity-neutral)
                int a = pick_qubit(rng);
                int b = pick_qubit(rng);
                if (a == b || state[static_cast<size_t>(a)] == state[static_cast<size_t>(b)])
                    continue;
                int pa = state[static_cast<size_t>(a)];
                int pb = state[static_cast<size_t>(b)];
                double d = delta_relocate(a, pb);
                state[static_cast<size_t>(a)] = pb;
                d += delta_relocate(b, pa);
                state[static_cast<size_t>(a)] = pa;
                // self-interaction between a and b is distance-invariant under swap
                if (d <= 0.0 || coin(rng) < std::exp(-d / temp)) {
                    state[static_cast<size_t>(a)] = pb;
                    state[static_cast<size_t>(b)] = pa;
                    cost += d;
                }
            } else {
                int a = pick_qubit(rng);
                int to = pick_qpu(rng);
                int from = state[static_cast<size_t>(a)];
                if (to == from) continue;
                if (load[static_cast<size_t>(to)] >=
                    t.qpus[static_cast<size_t>(to)].comp_free)
                    continue;
                double d = delta_relocate(a, to);
                if (d <= 0.0 || coin(rng) < std::exp(-d / temp)) {
                    state[static_cast<size_t>(a)] = to;
                    --load[static_cast<size_t>(from)];
                    ++load[static_cast<size_t>(to)];
                    cost += d;
                }
            }
            if (cost < best_cost) {
                best_cost = cost;
                best_state = state;
            }
        }
        temp *= cfg.cooling_rate;
    }
    return finalize_placement(g, std::move(best_state), t);
}

Placement ga_placement(const Circuit& c, const CloudTopology& t, const GaConfig& cfg) {
    if (cfg.population < 2 || cfg.elitism >= cfg.population)
        fail(ErrorCode::BadParams, "bad GA population/elitism");
    std::mt19937_64 rng(cfg.seed);
    InteractionGraph g = build_interaction_graph(c);

    auto repair = [&](std::vector<int>& chrom) {
        std::vector<int> load(static_cast<size_t>(t.size()), 0);
        for (int q : chrom) ++load[static_cast<size_t>(q)];
        std::vector<int> over;
        for (int q = 0; q < c.num_qubits; ++q) {
            int p = chrom[static_cast<size_t>(q)];
            if (load[static_cast<size_t>(p)] > t.qpus[static_cast<size_t>(p)].comp_free) {
                over.push_back(q);
                --load[static_cast<size_t>(p)];
            }
        }
        for (int q : over) {
            // move to the first QPU with room, scanning from a random offset
            std::uniform_int_distribution<int> off(0, t.size() - 1);
            int base = off(rng);
            int placed = -1;
            for (int d = 0; d < t.size(); ++d) {
                int p = (base + d) % t.size();
                if (load[static_cast<size_t>(p)] < t.qpus[static_cast<size_t>(p)].comp_free) {
                    placed = p;
                    break;
                }
            }
            if (placed < 0) fail(ErrorCode::NoFeasibleAssignment, "GA repair failed");
            chrom[static_cast<size_t>(q)] = placed;
            ++load[static_cast<size_t>(placed)];
        }
    };

    std::vector<std::vector<int>> pop;
    for (int i = 0; i < cfg.population; ++i) {
        auto members = random_connected_set(c, t, rng);
        pop.push_back(round_robin_assign(c.num_qubits, members, t));
    }
    auto cost_of = [&](const std::vector<int>& chrom) { return hop_cost(g, chrom, t); };
    std::vector<double> costs(pop.size());
    for (size_t i = 0; i < pop.size(); ++i) costs[i] = cost_of(pop[i]);

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> pick_parent(0, cfg.population - 1);
    std::uniform_int_distribution<int> pick_qpu(0, t.size() - 1);

    for (int gen = 0; gen < cfg.generations; ++gen) {
        std::vector<size_t> rank(pop.size());
        std::iota(rank.begin(), rank.end(), 0);
        std::sort(rank.begin(), rank.end(),
                  [&](size_t a, size_t b) { return costs[a] < costs[b]; });
        std::vector<std::vector<int>> next;
        for (int e = 0; e < cfg.elitism; ++e) next.push_back(pop[rank[static_cast<size_t>(e)]]);
        while (static_cast<int>(next.size()) < cfg.population) {
            // binary tournament
            auto tournament = [&]() -> const std::vector<int>& {
                int a = pick_parent(rng), b = pick_parent(rng);
                return costs[static_cast<size_t>(a)] <= costs[static_cast<size_t>(b)]
                           ? pop[static_cast<size_t>(a)]
                           : pop[static_cast<size_t>(b)];
            };
            const auto& pa = tournament();
            const auto& pb = tournament();
            std::vector<int> child = pa;
            if (coin(rng) < cfg.crossover_rate)
                for (int q = 0; q < c.num_qubits; ++q)
                    if (coin(rng) < 0.5) child[static_cast<size_t>(q)] = pb[static_cast<size_t>(q)];
            for (int q = 0; q < c.num_qubits; ++q)
                if (coin(rng) < cfg.mutation_rate)
                    child[static_cast<size_t>(q)] = pick_qpu(rng);
            repair(child);
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        for (size_t i = 0; i < pop.size(); ++i) costs[i] = cost_of(pop[i]);
    }
    size_t best = 0;
    for (size_t i = 1; i < pop.size(); ++i)
        if (costs[i] < costs[best]) best = i;
    return finalize_placement(g, std::move(pop[best]), t);
}

}  // namespace qcloud
