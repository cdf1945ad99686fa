#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "qcloud/error.hpp"
#include "qcloud/qasm.hpp"
#include "qcloud/scheduler.hpp"

using namespace qcloud;

namespace {

Circuit from_qasm(const std::string& body) {
    return parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n" + body);
}

CloudTopology two_qpus() {
    CloudTopology t;
    for (int i = 0; i < 2; ++i) {
        QpuState q;
        q.id = i;
        q.comp_capacity = q.comp_free = 20;
        q.comm_capacity = q.comm_free = 5;
        t.qpus.push_back(q);
    }
    t.links = {{0, 1}};
    t.finalize();
    return t;
}

int brute_force_priority(const RemoteDag& r, int v) {
    int best = 0;
    for (int s : r.succ[static_cast<size_t>(v)])
        best = std::max(best, 1 + brute_force_priority(r, s));
    return best;
}

}  // namespace

TEST_CASE("all-local placement yields an empty remote DAG") {
    Circuit c = from_qasm("qreg q[3]; cx q[0],q[1]; cx q[1],q[2];");
    GateDag dag = build_dag(c);
    CloudTopology t = two_qpus();
    RemoteDag r = build_remote_dag(dag, c, {0, 0, 0}, t);
    CHECK(r.size() == 0);
}

TEST_CASE("chain split produces two chained remote nodes") {
    Circuit c = from_qasm("qreg q[3]; cx q[0],q[1]; cx q[1],q[2]; cx q[0],q[1];");
    GateDag dag = build_dag(c);
    CloudTopology t = two_qpus();
    RemoteDag r = build_remote_dag(dag, c, {0, 1, 1}, t);
    REQUIRE(r.size() == 2);
    // the middle cx(1,2) is local; the two cx(0,1) are remote and ordered
    CHECK(r.succ[0] == std::vector<int>{1});
    CHECK(r.pred[1] == std::vector<int>{0});
    CHECK(r.nodes[0].priority == 1);
    CHECK(r.nodes[1].priority == 0);
    CHECK(r.nodes[0].hops == 1);
}

TEST_CASE("transitive edges are reduced") {
    // q0 interacts remotely three times in sequence; arcs collapse to a chain
    Circuit c = from_qasm("qreg q[2]; cx q[0],q[1]; cx q[0],q[1]; cx q[0],q[1];");
    GateDag dag = build_dag(c);
    CloudTopology t = two_qpus();
    RemoteDag r = build_remote_dag(dag, c, {0, 1}, t);
    REQUIRE(r.size() == 3);
    CHECK(r.succ[0] == std::vector<int>{1});
    CHECK(r.succ[1] == std::vector<int>{2});
    CHECK(r.succ[2].empty());
}

TEST_CASE("chain of four has priorities 3,2,1,0") {
    RemoteDag r;
    r.nodes.resize(4);
    for (int i = 0; i < 4; ++i) r.nodes[static_cast<size_t>(i)].id = i;
    r.succ = {{1}, {2}, {3}, {}};
    r.pred = {{}, {0}, {1}, {2}};
    compute_priorities(r);
    CHECK(r.nodes[0].priority == 3);
    CHECK(r.nodes[1].priority == 2);
    CHECK(r.nodes[2].priority == 1);
    CHECK(r.nodes[3].priority == 0);
}

TEST_CASE("single node has priority 0") {
    RemoteDag r;
    r.nodes.resize(1);
    r.succ = {{}};
    r.pred = {{}};
    compute_priorities(r);
    CHECK(r.nodes[0].priority == 0);
}

TEST_CASE("priorities match brute-force path enumeration on random DAGs") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        int m = 2 + static_cast<int>(rng() % 49);
        RemoteDag r;
        r.nodes.resize(static_cast<size_t>(m));
        r.succ.assign(static_cast<size_t>(m), {});
        r.pred.assign(static_cast<size_t>(m), {});
        for (int u = 0; u < m; ++u) {
            r.nodes[static_cast<size_t>(u)].id = u;
            for (int v = u + 1; v < m; ++v)
                if (rng() % 100 < 8) {
                    r.succ[static_cast<size_t>(u)].push_back(v);
                    r.pred[static_cast<size_t>(v)].push_back(u);
                }
        }
        compute_priorities(r);
        for (int v = 0; v < m; ++v)
            REQUIRE(r.nodes[static_cast<size_t>(v)].priority == brute_force_priority(r, v));
    }
}

TEST_CASE("cyclic remote DAG is an invariant violation") {
    RemoteDag r;
    r.nodes.resize(2);
    r.succ = {{1}, {0}};
    r.pred = {{1}, {0}};
    CHECK_THROWS_AS(compute_priorities(r), Error);
}

TEST_CASE("cloudqc split of a shared budget follows largest remainder") {
    // nodes with priorities 5 and 0 share QPU 1 (budget 5); far endpoints are rich
    std::vector<AllocRequest> reqs = {{0, 5, 0, 1, 0}, {1, 0, 1, 2, 0}};
    std::vector<int> budgets = {100, 5, 100};
    std::mt19937_64 rng(1);
    AllocationRound round = allocate_round(reqs, budgets, AllocPolicy::CloudQC, rng);
    CHECK(round.pairs[0] == 4);
    CHECK(round.pairs[1] == 1);
    CHECK(budgets[1] == 0);
}

TEST_CASE("sole claimant takes the whole shared budget") {
    std::vector<AllocRequest> reqs = {{0, 2, 0, 1, 0}};
    std::vector<int> budgets = {5, 5};
    std::mt19937_64 rng(1);
    AllocationRound round = allocate_round(reqs, budgets, AllocPolicy::CloudQC, rng);
    CHECK(round.pairs[0] == 5);
    CHECK(budgets[0] == 0);
    CHECK(budgets[1] == 0);
}

TEST_CASE("zero budget on an endpoint defers the node") {
    std::vector<AllocRequest> reqs = {{0, 2, 0, 1, 0}};
    std::vector<int> budgets = {0, 5};
    std::mt19937_64 rng(1);
    AllocationRound round = allocate_round(reqs, budgets, AllocPolicy::CloudQC, rng);
    CHECK(round.pairs[0] == 0);
    CHECK(budgets[1] == 5);
}

TEST_CASE("aging promotes a starved node past the maximum priority") {
    // same QPU pair: aged low-priority node must now dominate
    std::vector<AllocRequest> reqs = {{0, 9, 0, 1, 0}, {1, 0, 0, 1, kAgingThreshold}};
    std::vector<int> budgets = {3, 3};
    std::mt19937_64 rng(1);
    AllocationRound round = allocate_round(reqs, budgets, AllocPolicy::CloudQC, rng);
    CHECK(round.pairs[1] >= round.pairs[0]);
    CHECK(round.pairs[1] >= 1);
}

TEST_CASE("budgets never go negative and debits hit both endpoints") {
    std::mt19937_64 rng(31);
    for (AllocPolicy policy : {AllocPolicy::CloudQC, AllocPolicy::Greedy, AllocPolicy::Average,
                               AllocPolicy::Random}) {
        for (int trial = 0; trial < 50; ++trial) {
            int qpus = 3 + static_cast<int>(rng() % 5);
            std::vector<int> budgets(static_cast<size_t>(qpus));
            for (auto& b : budgets) b = static_cast<int>(rng() % 6);
            std::vector<int> initial = budgets;
            int nreq = 1 + static_cast<int>(rng() % 8);
            std::vector<AllocRequest> reqs;
            for (int i = 0; i < nreq; ++i) {
                int a = static_cast<int>(rng() % static_cast<unsigned>(qpus));
                int b = static_cast<int>(rng() % static_cast<unsigned>(qpus));
                if (a == b) continue;
                reqs.push_back({static_cast<int>(reqs.size()), static_cast<int>(rng() % 6),
                                std::min(a, b), std::max(a, b), static_cast<int>(rng() % 7)});
            }
            if (reqs.empty()) continue;
            AllocationRound round = allocate_round(reqs, budgets, policy, rng);
            std::vector<int> debit(static_cast<size_t>(qpus), 0);
            for (size_t i = 0; i < reqs.size(); ++i) {
                CHECK(round.pairs[i] >= 0);
                debit[static_cast<size_t>(reqs[i].qpu_a)] += round.pairs[i];
                debit[static_cast<size_t>(reqs[i].qpu_b)] += round.pairs[i];
            }
            for (int q = 0; q < qpus; ++q) {
                CHECK(budgets[static_cast<size_t>(q)] >= 0);
                CHECK(debit[static_cast<size_t>(q)] + budgets[static_cast<size_t>(q)] ==
                      initial[static_cast<size_t>(q)]);
            }
        }
    }
}

TEST_CASE("same-pair priority dominance holds under cloudqc") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> budgets = {static_cast<int>(rng() % 8), static_cast<int>(rng() % 8),
                                    static_cast<int>(rng() % 8)};
        std::vector<AllocRequest> reqs;
        int nreq = 2 + static_cast<int>(rng() % 6);
        for (int i = 0; i < nreq; ++i)
            reqs.push_back({i, static_cast<int>(rng() % 5), 0, 1 + static_cast<int>(rng() % 2),
                            0});
        std::mt19937_64 policy_rng(trial);
        AllocationRound round = allocate_round(reqs, budgets, AllocPolicy::CloudQC, policy_rng);
        for (size_t a = 0; a < reqs.size(); ++a)
            for (size_t b = 0; b < reqs.size(); ++b) {
                if (reqs[a].qpu_a != reqs[b].qpu_a || reqs[a].qpu_b != reqs[b].qpu_b) continue;
                if (reqs[a].priority > reqs[b].priority)
                    CHECK(round.pairs[a] >= round.pairs[b]);
            }
    }
}

TEST_CASE("attempt success probability") {
    CHECK(attempt_success_probability(1, 1, 0.3) == doctest::Approx(0.3));
    CHECK(attempt_success_probability(2, 1, 0.3) == doctest::Approx(0.51));
    CHECK(attempt_success_probability(3, 0, 0.3) == doctest::Approx(1.0));
    CHECK(attempt_success_probability(1, 2, 0.5) == doctest::Approx(0.25));
    CHECK_THROWS_AS(attempt_success_probability(1, 1, 0.0), Error);
}
