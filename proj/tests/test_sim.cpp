#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcloud/error.hpp"
#include "qcloud/qasm.hpp"
#include "qcloud/sim.hpp"

using namespace qcloud;

namespace {

Circuit from_qasm(const std::string& body) {
    return parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n" + body);
}

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

}  // namespace

TEST_CASE("a single local CX takes one CX unit") {
    Circuit c = from_qasm("qreg q[2]; cx q[0],q[1];");
    CloudTopology t = make_topo({{2, 2}, {2, 2}}, {{0, 1}});
    SimConfig cfg;
    cfg.seed = 1;
    SimResult r = run_simulation({{0, &c, 0.0}}, t, cfg);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].jct() == doctest::Approx(1.0));
    CHECK(r.records[0].remote_ops == 0);
}

TEST_CASE("a single remote CX at p=1 takes exactly 16 CX units") {
    Circuit c = from_qasm("qreg q[2]; cx q[0],q[1];");
    // one computing qubit per QPU forces the split
    CloudTopology t = make_topo({{1, 2}, {1, 2}}, {{0, 1}});
    SimConfig cfg;
    cfg.p_epr = 1.0;
    cfg.seed = 1;
    SimResult r = run_simulation({{0, &c, 0.0}}, t, cfg);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].jct() == doctest::Approx(16.0));
    CHECK(r.records[0].remote_ops == 1);
    CHECK(r.makespan == doctest::Approx(16.0));
}

TEST_CASE("mean EPR rounds at x=1, p=0.3 approaches the geometric mean") {
    Circuit c = from_qasm("qreg q[2]; cx q[0],q[1];");
    double total_rounds = 0.0;
    const int trials = 10000;
    for (int s = 0; s < trials; ++s) {
        CloudTopology t = make_topo({{1, 1}, {1, 1}}, {{0, 1}});  // 1 comm qubit -> x=1
        SimConfig cfg;
        cfg.p_epr = 0.3;
        cfg.seed = static_cast<std::uint64_t>(s) + 1;
        SimResult r = run_simulation({{0, &c, 0.0}}, t, cfg);
        // rounds = (JCT - t_2q - t_ms) / t_iep
        total_rounds += (r.records[0].jct() - 6.0) / 10.0;
    }
    double mean = total_rounds / trials;
    CHECK(mean == doctest::Approx(10.0 / 3.0).epsilon(0.05));
}

TEST_CASE("simulation is deterministic in the seed") {
    Circuit a = generate_circuit(CircuitFamily::Ghz, 40);
    Circuit b = generate_circuit(CircuitFamily::Ising, 30);
    CloudTopology t = random_topology(6, 0.5, 20, 5, 2);
    SimConfig cfg;
    cfg.seed = 77;
    std::vector<SimJob> jobs = {{0, &a, 0.0}, {1, &b, 0.0}};
    SimResult r1 = run_simulation(jobs, t, cfg);
    SimResult r2 = run_simulation(jobs, t, cfg);
    REQUIRE(r1.records.size() == r2.records.size());
    for (size_t i = 0; i < r1.records.size(); ++i) {
        CHECK(r1.records[i].completion == r2.records[i].completion);
        CHECK(r1.records[i].epr_attempts == r2.records[i].epr_attempts);
    }
    CHECK(r1.makespan == r2.makespan);
    CHECK(r1.utilization == doctest::Approx(r2.utilization));
}

TEST_CASE("incoming mode honors arrivals") {
    Circuit c = from_qasm("qreg q[2]; cx q[0],q[1];");
    CloudTopology t = make_topo({{4, 2}, {4, 2}}, {{0, 1}});
    SimConfig cfg;
    cfg.mode = SimMode::Incoming;
    cfg.seed = 5;
    std::vector<SimJob> jobs = {{0, &c, 0.0}, {1, &c, 10.0}};
    SimResult r = run_simulation(jobs, t, cfg);
    REQUIRE(r.records.size() == 2);
    for (const auto& rec : r.records) {
        CHECK(rec.start >= rec.arrival);
        CHECK(rec.completion >= rec.start);
    }
    CHECK(r.records[1].arrival == doctest::Approx(10.0));
}

TEST_CASE("batch mode runs jobs deferred past capacity after completions") {
    // three 2-qubit jobs against a 2+2 qubit cloud: the third must wait
    Circuit c = from_qasm("qreg q[2]; h q[0]; cx q[0],q[1];");
    CloudTopology t = make_topo({{2, 2}, {2, 2}}, {{0, 1}});
    SimConfig cfg;
    cfg.seed = 2;
    std::vector<SimJob> jobs = {{0, &c, 0.0}, {1, &c, 0.0}, {2, &c, 0.0}};
    SimResult r = run_simulation(jobs, t, cfg);
    REQUIRE(r.records.size() == 3);
    int late_starts = 0;
    for (const auto& rec : r.records)
        if (rec.start > 0.0) ++late_starts;
    CHECK(late_starts == 1);
}

TEST_CASE("utilization is a fraction and makespan covers all jobs") {
    Circuit c = generate_circuit(CircuitFamily::Ghz, 25);
    CloudTopology t = random_topology(4, 0.8, 10, 3, 9);
    SimConfig cfg;
    cfg.seed = 9;
    SimResult r = run_simulation({{0, &c, 0.0}}, t, cfg);
    CHECK(r.utilization > 0.0);
    CHECK(r.utilization <= 1.0);
    for (const auto& rec : r.records) CHECK(rec.completion <= r.makespan + 1e-9);
}

TEST_CASE("deadlock with zero communication qubits is detected") {
    Circuit c = from_qasm("qreg q[2]; cx q[0],q[1];");
    CloudTopology t = make_topo({{1, 0}, {1, 0}}, {{0, 1}});
    SimConfig cfg;
    cfg.seed = 1;
    bool threw = false;
    try {
        run_simulation({{0, &c, 0.0}}, t, cfg);
    } catch (const Error& e) {
        threw = true;
        CHECK(e.code() == ErrorCode::DeadlockDetected);
    }
    CHECK(threw);
}

TEST_CASE("parallel multihop model also terminates and is deterministic") {
    Circuit c = from_qasm("qreg q[2]; cx q[0],q[1]; cx q[0],q[1];");
    // path of three QPUs; endpoints two hops apart
    CloudTopology t = make_topo({{1, 3}, {0, 3}, {1, 3}}, {{0, 1}, {1, 2}});
    SimConfig cfg;
    cfg.p_epr = 0.5;
    cfg.multihop = MultihopModel::Parallel;
    cfg.seed = 4;
    SimResult a = run_simulation({{0, &c, 0.0}}, t, cfg);
    SimResult b = run_simulation({{0, &c, 0.0}}, t, cfg);
    CHECK(a.records[0].completion == b.records[0].completion);
    CHECK(a.records[0].remote_ops == 2);
}

TEST_CASE("metrics and CDF") {
    JobRecord r16;
    r16.completion = 16.0;
    Metrics one = compute_metrics({r16});
    REQUIRE(one.cdf.size() == 1);
    CHECK(one.cdf[0].first == doctest::Approx(16.0));
    CHECK(one.cdf[0].second == doctest::Approx(1.0));

    CHECK_THROWS_AS(compute_metrics({}), Error);

    JobRecord a, b;
    a.completion = 10.0;
    b.completion = 20.0;
    Metrics two = compute_metrics({a, b});
    CHECK(two.median_jct == doctest::Approx(15.0));
    CHECK(two.mean_jct == doctest::Approx(15.0));

    JobRecord j1, j2, j3, j4;
    j1.completion = 1.0;
    j2.completion = 2.0;
    j3.completion = 2.0;
    j4.completion = 4.0;
    Metrics four = compute_metrics({j1, j2, j3, j4});
    REQUIRE(four.cdf.size() == 3);
    CHECK(four.cdf[0] == std::pair<double, double>{1.0, 0.25});
    CHECK(four.cdf[1] == std::pair<double, double>{2.0, 0.75});
    CHECK(four.cdf[2] == std::pair<double, double>{4.0, 1.0});
}

TEST_CASE("percentile interpolation") {
    std::vector<JobRecord> recs(5);
    for (int i = 0; i < 5; ++i) recs[static_cast<size_t>(i)].completion = 10.0 * (i + 1);
    CHECK(percentile_jct(recs, 0.0) == doctest::Approx(10.0));
    CHECK(percentile_jct(recs, 1.0) == doctest::Approx(50.0));
    CHECK(percentile_jct(recs, 0.5) == doctest::Approx(30.0));
    CHECK(percentile_jct(recs, 0.25) == doctest::Approx(20.0));
}

TEST_CASE("allocation trace is recorded when requested") {
    Circuit c = from_qasm("qreg q[2]; cx q[0],q[1];");
    CloudTopology t = make_topo({{1, 2}, {1, 2}}, {{0, 1}});
    SimConfig cfg;
    cfg.p_epr = 1.0;
    cfg.seed = 1;
    cfg.record_trace = true;
    SimResult r = run_simulation({{0, &c, 0.0}}, t, cfg);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].pairs >= 1);
    CHECK(r.trace[0].success);
}
