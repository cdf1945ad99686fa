#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcloud/analysis.hpp"
#include "qcloud/benchmarks.hpp"
#include "qcloud/cloud.hpp"
#include "qcloud/error.hpp"
#include "qcloud/experiment.hpp"
#include "qcloud/partition.hpp"
#include "qcloud/placement.hpp"
#include "qcloud/qasm.hpp"
#include "qcloud/sim.hpp"

using nlohmann::json;
using namespace qcloud;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InsufficientCapacity:
    case ErrorCode::InfeasibleBalance:
    case ErrorCode::NoFeasibleAssignment:
    case ErrorCode::ConnectivityFailure:
    case ErrorCode::DeadlockDetected:
    case ErrorCode::EmptyRun:
        return kExitInfeasible;
    case ErrorCode::InvariantViolation:
        return kExitInternal;
    default:
        return kExitConfig;
    }
}

struct CircuitOpts {
    std::string file;
    std::string family;
    int n = 0;
    std::string bench;
    std::string bv_secret;
    int ising_layers = 2;

    void attach(CLI::App* cmd) {
        cmd->add_option("--circuit", file, "OpenQASM 2.0 circuit file");
        cmd->add_option("--family", family, "generator family (ghz, cat, bv, ising, qft)");
        cmd->add_option("--n", n, "generated circuit width");
        cmd->add_option("--bench", bench, "benchmark circuit name, e.g. ghz_n127");
        cmd->add_option("--bv-secret", bv_secret, "bv family secret bitstring");
        cmd->add_option("--ising-layers", ising_layers, "ising family layer count");
    }

    Circuit load() const {
        if (!file.empty()) return parse_qasm_file(file);
        if (!bench.empty()) return benchmark_circuit(bench);
        if (!family.empty()) {
            if (n <= 0) fail(ErrorCode::ConfigError, "--family requires --n > 0");
            GenerateParams gp;
            gp.bv_secret = bv_secret;
            gp.ising_layers = ising_layers;
            return generate_circuit(family_from_name(family), n, gp);
        }
        fail(ErrorCode::ConfigError, "no circuit given (--circuit, --family or --bench)");
    }
};

struct TopologyOpts {
    std::string file;
    int qpus = 20;
    double edge_prob = 0.3;
    int comp_qubits = 20;
    int comm_qubits = 5;
    int max_degree = 0;
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--topology", file, "topology JSON file (overrides random generation)");
        cmd->add_option("--qpus", qpus, "number of QPUs");
        cmd->add_option("--edge-prob", edge_prob, "random link probability");
        cmd->add_option("--comp-qubits", comp_qubits, "computing qubits per QPU");
        cmd->add_option("--comm-qubits", comm_qubits, "communication qubits per QPU");
        cmd->add_option("--max-degree", max_degree, "per-QPU link cap (0 = unlimited)");
        cmd->add_option("--seed", seed, "random seed");
    }

    CloudTopology load() const {
        if (!file.empty()) return topology_from_file(file);
        return random_topology(qpus, edge_prob, comp_qubits, comm_qubits, seed, max_degree);
    }
};

std::uint64_t env_seed(std::uint64_t fallback) {
    if (const char* s = std::getenv("QCLOUD_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            fail(ErrorCode::ConfigError, "QCLOUD_SEED must be an unsigned integer");
        }
    }
    return fallback;
}

std::vector<double> parse_alpha_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            fail(ErrorCode::ConfigError, "bad alpha list entry '" + tok + "'");
        }
    }
    if (out.empty()) fail(ErrorCode::ConfigError, "empty alpha list");
    return out;
}

json placement_to_json(const Placement& p, const CloudTopology& t) {
    json j;
    j["qubit_to_qpu"] = p.qubit_to_qpu;
    j["qpus_used"] = p.qpus_used;
    j["parts"] = p.parts;
    j["comm_cost"] = p.comm_cost;
    j["remote_ops"] = p.remote_ops;
    j["est_time"] = p.est_time;
    j["score"] = p.score;
    j["qpu_loads"] = p.qpu_loads(t.size());
    return j;
}

json records_to_json(const SimResult& r) {
    json out = json::array();
    for (const auto& rec : r.records)
        out.push_back({{"id", rec.circuit_id},
                       {"name", rec.name},
                       {"arrival", rec.arrival},
                       {"start", rec.start},
                       {"completion", rec.completion},
                       {"jct", rec.jct()},
                       {"remote_ops", rec.remote_ops},
                       {"comm_cost", rec.comm_cost},
                       {"epr_attempts", rec.epr_attempts}});
    return out;
}

int cmd_analyze(const CircuitOpts& copts) {
    Circuit c = copts.load();
    CircuitStats st = circuit_stats(c);
    InteractionGraph g = build_interaction_graph(c);
    json j;
    j["name"] = c.name;
    j["num_qubits"] = st.num_qubits;
    j["two_qubit_gates"] = st.two_qubit_gates;
    j["depth"] = st.depth;
    j["interaction_edges"] = g.weights.size();
    j["interaction_weight"] = g.total_weight();
    j["batch_metric"] = batch_metric(c, 1.0, 1.0, 0.5);
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_partition(const CircuitOpts& copts, int k, double alpha, std::uint64_t seed) {
    Circuit c = copts.load();
    InteractionGraph g = build_interaction_graph(c);
    PartitionResult r = graph_partition(g, k, alpha, env_seed(seed));
    json j;
    j["k"] = r.k;
    j["assignment"] = r.assignment;
    j["cut_weight"] = r.cut_weight;
    j["imbalance"] = r.imbalance;
    j["part_sizes"] = r.part_sizes;
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_place(const CircuitOpts& copts, TopologyOpts topts, const std::string& alpha_list,
              const std::string& method, double p_epr) {
    topts.seed = env_seed(topts.seed);
    Circuit c = copts.load();
    CloudTopology t = topts.load();
    PlacementMethod m = placement_method_from_name(method);
    PlacementConfig pc;
    pc.p_epr = p_epr;
    pc.seed = topts.seed;
    if (!alpha_list.empty()) pc.alpha_list = parse_alpha_list(alpha_list);

    Placement p;
    switch (m) {
    case PlacementMethod::CloudQC:
        p = place_circuit(c, t, pc);
        break;
    case PlacementMethod::CloudQCBfs:
        pc.qpu_set_mode = QpuSetMode::Bfs;
        p = place_circuit(c, t, pc);
        break;
    case PlacementMethod::Random:
        p = random_placement(c, t, topts.seed);
        break;
    case PlacementMethod::SimAnneal: {
        AnnealConfig ac;
        ac.seed = topts.seed;
        p = sa_placement(c, t, ac);
        break;
    }
    case PlacementMethod::Genetic: {
        GaConfig gc;
        gc.seed = topts.seed;
        p = ga_placement(c, t, gc);
        break;
    }
    }
    std::cout << placement_to_json(p, t).dump(2) << '\n';
    return kExitOk;
}

int cmd_schedule(const CircuitOpts& copts, TopologyOpts topts, const std::string& policy,
                 const std::string& method, double p_epr, const std::string& multihop,
                 bool trace) {
    topts.seed = env_seed(topts.seed);
    Circuit c = copts.load();
    CloudTopology t = topts.load();
    SimConfig sc;
    sc.p_epr = p_epr;
    sc.policy = alloc_policy_from_name(policy);
    sc.method = placement_method_from_name(method);
    sc.seed = topts.seed;
    sc.record_trace = trace;
    if (multihop == "parallel")
        sc.multihop = MultihopModel::Parallel;
    else if (multihop != "serial")
        fail(ErrorCode::ConfigError, "multihop model must be serial or parallel");

    std::vector<SimJob> jobs{{0, &c, 0.0}};
    SimResult r = run_simulation(jobs, t, sc);
    if (trace)
        for (const auto& e : r.trace) {
            json line = {{"time", e.time},     {"job", e.job},     {"node", e.node},
                         {"priority", e.priority}, {"qpu_a", e.qpu_a}, {"qpu_b", e.qpu_b},
                         {"pairs", e.pairs},   {"success", e.success}};
            std::cout << line.dump() << '\n';
        }
    json j;
    j["records"] = records_to_json(r);
    j["makespan"] = r.makespan;
    j["utilization"] = r.utilization;
    j["total_comm_cost"] = r.total_comm_cost;
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

int run_bundle(ExperimentConfig cfg) {
    cfg.seed = env_seed(cfg.seed);
    ReportBundle bundle = run_experiment(cfg);
    write_bundle(bundle);
    int failed = 0;
    for (const auto& cell : bundle.cells)
        if (cell.failed) {
            ++failed;
            std::cerr << cell.method << " trial " << cell.trial << ": " << cell.error << '\n';
        }
    std::cout << "wrote " << cfg.out_dir << " (" << bundle.cells.size() - failed << "/"
              << bundle.cells.size() << " cells ok)\n";
    return failed == static_cast<int>(bundle.cells.size()) && failed > 0 ? kExitInfeasible
                                                                         : kExitOk;
}

int cmd_bench(const std::string& name, const std::string& out) {
    Circuit c = benchmark_circuit(name);
    std::string text = write_qasm(c);
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) fail(ErrorCode::ConfigError, "cannot write " + out);
        f << text;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CloudQC placement, scheduling and simulation toolkit"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "print circuit statistics as JSON");
    CircuitOpts an_c;
    an_c.attach(analyze);

    // partition
    auto* partition = app.add_subcommand("partition", "partition the interaction graph");
    CircuitOpts pa_c;
    pa_c.attach(partition);
    int pa_k = 2;
    double pa_alpha = 0.1;
    std::uint64_t pa_seed = 1;
    partition->add_option("--k", pa_k, "number of parts");
    partition->add_option("--alpha", pa_alpha, "imbalance factor");
    partition->add_option("--seed", pa_seed, "random seed");

    // place
    auto* place = app.add_subcommand("place", "map a circuit onto a topology");
    CircuitOpts pl_c;
    pl_c.attach(place);
    TopologyOpts pl_t;
    pl_t.attach(place);
    std::string pl_alpha_list, pl_method = "cloudqc";
    double pl_p_epr = 0.3;
    place->add_option("--alpha-list", pl_alpha_list, "comma-separated imbalance sweep");
    place->add_option("--method", pl_method, "cloudqc, cloudqc-bfs, random, sa or ga");
    place->add_option("--p-epr", pl_p_epr, "link-level EPR success probability");

    // schedule
    auto* schedule = app.add_subcommand("schedule", "place and simulate one circuit");
    CircuitOpts sc_c;
    sc_c.attach(schedule);
    TopologyOpts sc_t;
    sc_t.attach(schedule);
    std::string sc_policy = "cloudqc", sc_method = "cloudqc", sc_multihop = "serial";
    double sc_p_epr = 0.3;
    bool sc_trace = false;
    schedule->add_option("--policy", sc_policy, "cloudqc, greedy, average or random");
    schedule->add_option("--method", sc_method, "placement method");
    schedule->add_option("--p-epr", sc_p_epr, "link-level EPR success probability");
    schedule->add_option("--multihop-model", sc_multihop, "serial or parallel");
    schedule->add_flag("--trace", sc_trace, "emit per-round allocation trace as JSON lines");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a (trial x method) experiment matrix");
    std::string si_config, si_mix, si_out, si_mode = "batch", si_batch_order = "metric";
    std::vector<std::string> si_circuits, si_methods, si_policies;
    int si_trials = 0, si_batch_size = 0, si_workers = 0;
    double si_p_epr = -1.0;
    std::uint64_t si_seed = 0;
    bool si_seed_set = false;
    simulate->add_option("--config", si_config, "experiment config JSON");
    simulate->add_option("--mix", si_mix, "named workload mix (mixed, qft, qugan, arithmetic)");
    simulate->add_option("--circuits", si_circuits, "benchmark circuit names");
    simulate->add_option("--batch-size", si_batch_size, "circuits sampled per trial from a mix");
    simulate->add_option("--trials", si_trials, "number of topology trials");
    simulate->add_option("--method", si_methods, "placement methods to compare");
    simulate->add_option("--policy", si_policies, "allocation policies to compare");
    simulate->add_option("--batch-order", si_batch_order, "metric, metric-desc or fifo");
    simulate->add_option("--p-epr", si_p_epr, "link-level EPR success probability");
    simulate->add_option("--mode", si_mode, "batch or incoming");
    simulate->add_option("--workers", si_workers, "concurrent cells");
    simulate->add_option("--out", si_out, "output directory");
    simulate->add_option("--seed", si_seed, "base seed")->each([&](const std::string&) {
        si_seed_set = true;
    });

    // bench
    auto* bench = app.add_subcommand("bench", "emit a benchmark circuit as QASM");
    std::string be_name, be_out;
    bench->add_option("name", be_name, "benchmark circuit name")->required();
    bench->add_option("--out", be_out, "output file (stdout when omitted)");

    // replay
    auto* replay = app.add_subcommand("replay", "re-run an experiment from its manifest");
    std::string re_manifest, re_out;
    replay->add_option("manifest", re_manifest, "manifest.json from a previous run")->required();
    replay->add_option("--out", re_out, "output directory override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*analyze) return cmd_analyze(an_c);
        if (*partition) return cmd_partition(pa_c, pa_k, pa_alpha, pa_seed);
        if (*place) return cmd_place(pl_c, pl_t, pl_alpha_list, pl_method, pl_p_epr);
        if (*schedule)
            return cmd_schedule(sc_c, sc_t, sc_policy, sc_method, sc_p_epr, sc_multihop,
                                sc_trace);
        if (*simulate) {
            ExperimentConfig cfg =
                si_config.empty() ? ExperimentConfig{} : config_from_file(si_config);
            if (!si_mix.empty()) cfg.mix = si_mix;
            if (!si_circuits.empty()) cfg.circuits = si_circuits;
            if (si_batch_size > 0) cfg.batch_size = si_batch_size;
            if (si_trials > 0) cfg.trials = si_trials;
            if (si_p_epr >= 0.0) cfg.p_epr = si_p_epr;
            if (si_workers > 0) cfg.workers = si_workers;
            if (!si_out.empty()) cfg.out_dir = si_out;
            if (si_seed_set) cfg.seed = si_seed;
            if (si_mode == "incoming")
                cfg.mode = SimMode::Incoming;
            else if (si_mode != "batch")
                fail(ErrorCode::ConfigError, "mode must be batch or incoming");
            if (!si_methods.empty() || !si_policies.empty()) {
                if (si_methods.empty()) si_methods.push_back("cloudqc");
                if (si_policies.empty()) si_policies.push_back("cloudqc");
                cfg.methods.clear();
                for (const auto& m : si_methods)
                    for (const auto& p : si_policies) {
                        MethodSpec spec;
                        spec.placement = placement_method_from_name(m);
                        spec.policy = alloc_policy_from_name(p);
                        if (si_batch_order == "metric-desc")
                            spec.batching = BatchOrder::MetricDescending;
                        else if (si_batch_order == "fifo")
                            spec.batching = BatchOrder::Fifo;
                        else if (si_batch_order != "metric")
                            fail(ErrorCode::ConfigError, "bad batch order");
                        cfg.methods.push_back(spec);
                    }
            }
            if (cfg.methods.empty()) cfg.methods.push_back({});
            return run_bundle(cfg);
        }
        if (*bench) return cmd_bench(be_name, be_out);
        if (*replay) {
            ExperimentConfig cfg = config_from_file(re_manifest);
            if (!re_out.empty()) {
                cfg.out_dir = re_out;
            } else {
                auto parent = std::filesystem::path(re_manifest).parent_path();
                cfg.out_dir = parent.empty() ? "." : parent.string();
            }
            return run_bundle(cfg);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitConfig;
}
