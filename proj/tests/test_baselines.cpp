#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "qcloud/baselines.hpp"
#include "qcloud/error.hpp"
#include "qcloud/qasm.hpp"

using namespace qcloud;

namespace {

CloudTopology make_topo(const std::vector<std::pair<int, int>>& caps,
                        const std::vector<std::pair<int, int>>& links) {
    CloudTopology t;
    for (size_t i = 0; i < caps.size(); ++i) {
        QpuState q;
        q.id = static_cast<int>(i);
        q.comp_capacity = q.comp_free = caps[i].first;
        q.comm_capacity = q.comm_free = caps[i].second;
        t.qpus.push_back(q);
    }
    t.links = links;
    t.finalize();
    return t;
}

bool placement_valid(const Placement& p, const Circuit& c, const CloudTopology& t) {
    if (static_cast<int>(p.qubit_to_qpu.size()) != c.num_qubits) return false;
    std::vector<int> loads(static_cast<size_t>(t.size()), 0);
    for (int q : p.qubit_to_qpu) {
        if (q < 0 || q >= t.size()) return false;
        ++loads[static_cast<size_t>(q)];
    }
    for (int v = 0; v < t.size(); ++v)
        if (loads[static_cast<size_t>(v)] > t.qpus[static_cast<size_t>(v)].comp_free)
            return false;
    return true;
}

long long exhaustive_opt(const Circuit& c, const CloudTopology& t) {
    InteractionGraph g = build_interaction_graph(c);
    int n = c.num_qubits;
    int m = t.size();
    long long best = -1;
    std::vector<int> a(static_cast<size_t>(n), 0);
    while (true) {
        std::vector<int> loads(static_cast<size_t>(m), 0);
        bool ok = true;
        for (int x : a)
            if (++loads[static_cast<size_t>(x)] >
                t.qpus[static_cast<size_t>(x)].comp_free) {
                ok = false;
                break;
            }
        if (ok) {
            long long cost = placement_comm_cost(g, a, t);
            if (best < 0 || cost < best) best = cost;
        }
        int i = 0;
        while (i < n && a[static_cast<size_t>(i)] == m - 1) a[static_cast<size_t>(i++)] = 0;
        if (i == n) break;
        ++a[static_cast<size_t>(i)];
    }
    return best;
}

Circuit random_circuit(int n, int gates, std::mt19937_64& rng) {
    Circuit c;
    c.name = "rand";
    c.num_qubits = n;
    for (int i = 0; i < gates; ++i) {
        int a = static_cast<int>(rng() % static_cast<unsigned>(n));
        int b = static_cast<int>(rng() % static_cast<unsigned>(n));
        if (a == b) continue;
        Gate g;
        g.kind = GateKind::TwoQubit;
        g.name = "cx";
        g.qubits = {a, b};
        g.num_operands = 2;
        g.seq = static_cast<int>(c.gates.size());
        c.gates.push_back(g);
    }
    return c;
}

}  // namespace

TEST_CASE("random placement is valid and seeded") {
    Circuit c = generate_circuit(CircuitFamily::Ghz, 30);
    CloudTopology t = random_topology(6, 0.5, 10, 3, 3);
    Placement a = random_placement(c, t, 11);
    Placement b = random_placement(c, t, 11);
    CHECK(placement_valid(a, c, t));
    CHECK(a.qubit_to_qpu == b.qubit_to_qpu);
    Placement d = random_placement(c, t, 12);
    CHECK(placement_valid(d, c, t));
}

TEST_CASE("random placement uses a connected QPU set") {
    Circuit c = generate_circuit(CircuitFamily::Ghz, 30);
    for (std::uint64_t s = 1; s <= 10; ++s) {
        CloudTopology t = random_topology(8, 0.3, 10, 3, s);
        Placement p = random_placement(c, t, s);
        // connectivity: every used QPU within finite distance of the first
        for (size_t i = 1; i < p.qpus_used.size(); ++i)
            CHECK(t.dist(p.qpus_used[0], p.qpus_used[i]) < t.size());
    }
}

TEST_CASE("random placement fails when the circuit cannot fit") {
    Circuit c = generate_circuit(CircuitFamily::Ghz, 50);
    CloudTopology t = make_topo({{10, 2}, {10, 2}}, {{0, 1}});
    CHECK_THROWS_AS(random_placement(c, t, 1), Error);
}

TEST_CASE("simulated annealing never worsens the best seen") {
    std::mt19937_64 rng(5);
    Circuit c = random_circuit(12, 30, rng);
    CloudTopology t = random_topology(4, 0.7, 5, 2, 8);
    AnnealConfig cfg;
    cfg.seed = 21;
    Placement initial = random_placement(c, t, 21);
    Placement out = sa_placement(c, t, cfg);
    CHECK(placement_valid(out, c, t));
    CHECK(out.comm_cost <= initial.comm_cost);

    Placement again = sa_placement(c, t, cfg);
    CHECK(out.qubit_to_qpu == again.qubit_to_qpu);
}

TEST_CASE("zero moves returns the initial placement") {
    std::mt19937_64 rng(6);
    Circuit c = random_circuit(8, 16, rng);
    CloudTopology t = random_topology(3, 0.9, 5, 2, 4);
    AnnealConfig cfg;
    cfg.seed = 9;
    cfg.moves_per_temperature = 0;
    Placement out = sa_placement(c, t, cfg);
    Placement initial = random_placement(c, t, 9);
    CHECK(out.qubit_to_qpu == initial.qubit_to_qpu);
}

TEST_CASE("SA is near-optimal on small instances") {
    std::mt19937_64 rng(31);
    int good = 0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        Circuit c = random_circuit(4, 8, rng);
        if (c.gates.empty()) {
            ++good;
            continue;
        }
        CloudTopology t = make_topo({{2, 2}, {2, 2}}, {{0, 1}});
        AnnealConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(trial);
        Placement p = sa_placement(c, t, cfg);
        long long opt = exhaustive_opt(c, t);
        REQUIRE(opt >= 0);
        if (p.comm_cost <= std::max<long long>(opt, (3 * opt + 1) / 2)) ++good;
    }
    CHECK(good >= 18);
}

TEST_CASE("GA is valid, seeded, and near-optimal on small instances") {
    std::mt19937_64 rng(41);
    int good = 0;
    const int trials = 10;
    for (int trial = 0; trial < trials; ++trial) {
        Circuit c = random_circuit(5, 10, rng);
        if (c.gates.empty()) {
            ++good;
            continue;
        }
        CloudTopology t = make_topo({{3, 2}, {3, 2}, {3, 2}}, {{0, 1}, {1, 2}});
        GaConfig cfg;
        cfg.generations = 60;
        cfg.seed = static_cast<std::uint64_t>(trial) + 1;
        Placement p = ga_placement(c, t, cfg);
        CHECK(placement_valid(p, c, t));
        Placement q = ga_placement(c, t, cfg);
        CHECK(p.qubit_to_qpu == q.qubit_to_qpu);
        long long opt = exhaustive_opt(c, t);
        REQUIRE(opt >= 0);
        if (p.comm_cost <= std::max<long long>(opt, 2 * opt)) ++good;
    }
    CHECK(good >= 8);
}

TEST_CASE("reported costs match recomputation") {
    std::mt19937_64 rng(51);
    Circuit c = random_circuit(10, 25, rng);
    CloudTopology t = random_topology(4, 0.8, 5, 2, 6);
    InteractionGraph g = build_interaction_graph(c);
    for (int variant = 0; variant < 3; ++variant) {
        Placement p;
        if (variant == 0) p = random_placement(c, t, 3);
        if (variant == 1) {
            AnnealConfig cfg;
            cfg.seed = 3;
            p = sa_placement(c, t, cfg);
        }
        if (variant == 2) {
            GaConfig cfg;
            cfg.generations = 30;
            cfg.seed = 3;
            p = ga_placement(c, t, cfg);
        }
        CHECK(p.comm_cost == placement_comm_cost(g, p.qubit_to_qpu, t));
        CHECK(p.remote_ops == placement_remote_ops(g, p.qubit_to_qpu));
    }
}
