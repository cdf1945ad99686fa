#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcloud/benchmarks.hpp"
#include "qcloud/error.hpp"
#include "qcloud/experiment.hpp"

using namespace qcloud;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("emit_cdf collapses ties") {
    std::vector<JobRecord> recs(4);
    recs[0].completion = 1.0;
    recs[1].completion = 2.0;
    recs[2].completion = 2.0;
    recs[3].completion = 4.0;
    fs::path path = fs::temp_directory_path() / "qcloud_cdf_test.csv";
    emit_cdf(recs, path.string());
    CHECK(slurp(path) == "jct,fraction\n1.0,0.250000\n2.0,0.750000\n4.0,1.000000\n");
    fs::remove(path);

    CHECK_THROWS_AS(emit_cdf({}, path.string()), Error);
}

TEST_CASE("config JSON round trip") {
    ExperimentConfig cfg;
    cfg.qpus = 10;
    cfg.edge_prob = 0.4;
    cfg.mix = "qft";
    cfg.trials = 3;
    cfg.seed = 99;
    cfg.p_epr = 0.2;
    MethodSpec m;
    m.placement = PlacementMethod::Random;
    m.policy = AllocPolicy::Greedy;
    m.batching = BatchOrder::Fifo;
    cfg.methods = {MethodSpec{}, m};

    ExperimentConfig back = config_from_json_text(config_to_json_text(cfg));
    CHECK(back.qpus == 10);
    CHECK(back.edge_prob == doctest::Approx(0.4));
    CHECK(back.mix == "qft");
    CHECK(back.trials == 3);
    CHECK(back.seed == 99);
    CHECK(back.p_epr == doctest::Approx(0.2));
    REQUIRE(back.methods.size() == 2);
    CHECK(back.methods[1].placement == PlacementMethod::Random);
    CHECK(back.methods[1].policy == AllocPolicy::Greedy);
    CHECK(back.methods[1].batching == BatchOrder::Fifo);
}

TEST_CASE("bad config reports ConfigError") {
    bool threw = false;
    try {
        config_from_json_text("{not json");
    } catch (const Error& e) {
        threw = true;
        CHECK(e.code() == ErrorCode::ConfigError);
    }
    CHECK(threw);
    CHECK_THROWS_AS(config_from_json_text("{\"trials\": 0}"), Error);
}

TEST_CASE("named workload mixes match the evaluation lists") {
    CHECK(workload_mix("arithmetic") ==
          std::vector<std::string>{"adder_n64", "adder_n118", "multiplier_n45",
                                   "multiplier_n75"});
    CHECK(workload_mix("qft") == std::vector<std::string>{"qft_n29", "qft_n63", "qft_n100"});
    CHECK(workload_mix("qugan") ==
          std::vector<std::string>{"qugan_n39", "qugan_n71", "qugan_n111"});
    CHECK(workload_mix("mixed") ==
          std::vector<std::string>{"knn_n129", "qugan_n111", "qugan_n71", "qft_n63",
                                   "multiplier_n45", "multiplier_n75"});
    CHECK_THROWS_AS(workload_mix("nope"), Error);
}

TEST_CASE("single-circuit single-trial run produces one record") {
    ExperimentConfig cfg;
    cfg.circuits = {"ghz_n127"};
    cfg.trials = 1;
    cfg.seed = 7;
    cfg.methods = {MethodSpec{}};
    ReportBundle bundle = run_experiment(cfg);
    REQUIRE(bundle.cells.size() == 1);
    REQUIRE_FALSE(bundle.cells[0].failed);
    REQUIRE(bundle.cells[0].sim.records.size() == 1);
    CHECK(bundle.cells[0].sim.records[0].name == "ghz_n127");
    CHECK(bundle.cells[0].sim.records[0].jct() > 0.0);
}

TEST_CASE("summary totals equal record sums and replay is byte-identical") {
    ExperimentConfig cfg;
    cfg.qpus = 8;
    cfg.circuits = {"ghz_n50", "ising_n34", "cat_n30"};
    cfg.trials = 2;
    cfg.seed = 13;
    MethodSpec greedy;
    greedy.policy = AllocPolicy::Greedy;
    cfg.methods = {MethodSpec{}, greedy};

    fs::path dir1 = fs::temp_directory_path() / "qcloud_exp1";
    fs::path dir2 = fs::temp_directory_path() / "qcloud_exp2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);

    cfg.out_dir = dir1.string();
    ReportBundle b1 = run_experiment(cfg);
    write_bundle(b1);

    // cross-check: per-method remote-op totals equal the sum over JobRecords
    for (const auto& cell : b1.cells) {
        REQUIRE_FALSE(cell.failed);
        long long total = 0;
        for (const auto& r : cell.sim.records) total += r.remote_ops;
        Metrics m = compute_metrics(cell.sim.records);
        CHECK(m.total_remote_ops == total);
    }

    // replay from the manifest into a second directory
    ExperimentConfig replayed = config_from_file((dir1 / "manifest.json").string());
    replayed.out_dir = dir2.string();
    write_bundle(run_experiment(replayed));

    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dir1)) {
        fs::path other = dir2 / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
        ++compared;
    }
    CHECK(compared > 3);
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("worker count does not change results") {
    ExperimentConfig cfg;
    cfg.qpus = 6;
    cfg.circuits = {"ghz_n40", "cat_n25"};
    cfg.trials = 2;
    cfg.seed = 3;
    cfg.methods = {MethodSpec{}};
    ReportBundle serial = run_experiment(cfg);
    cfg.workers = 4;
    ReportBundle parallel = run_experiment(cfg);
    REQUIRE(serial.cells.size() == parallel.cells.size());
    for (size_t i = 0; i < serial.cells.size(); ++i) {
        CHECK(records_to_csv(serial.cells[i].sim.records) ==
              records_to_csv(parallel.cells[i].sim.records));
    }
}

TEST_CASE("trial seeds are distinct and stable") {
    ExperimentConfig cfg;
    cfg.seed = 5;
    CHECK(trial_seed(cfg, 0) != trial_seed(cfg, 1));
    CHECK(trial_seed(cfg, 0) == trial_seed(cfg, 0));
}

TEST_CASE("benchmark characteristics cover the published table rows") {
    struct Row {
        const char* name;
        int qubits;
        int two_q;
        int depth;
    };
    // families with exact generators
    for (Row row : {Row{"ghz_n127", 127, 126, 128}, Row{"cat_n65", 65, 64, 66},
                    Row{"ising_n34", 34, 66, 16}}) {
        Circuit c = benchmark_circuit(row.name);
        CHECK(c.num_qubits == row.qubits);
        CHECK(c.two_qubit_count() == row.two_q);
    }
    // structural stand-ins: right width, plausible interaction structure
    for (const char* name : {"cc_n64", "adder_n64", "adder_n118", "multiplier_n45",
                             "multiplier_n75", "knn_n129", "qugan_n111", "qugan_n71",
                             "qugan_n39", "qft_n63", "qft_n29", "qft_n100", "swap_test_n25"}) {
        Circuit c = benchmark_circuit(name);
        CHECK(c.num_qubits > 0);
        CHECK(c.two_qubit_count() > 0);
    }
    CHECK_THROWS_AS(benchmark_circuit("made_up_n10"), Error);
}
