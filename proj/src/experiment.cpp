#include "qcloud/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qcloud/benchmarks.hpp"
#include "qcloud/error.hpp"
#include "qcloud/qasm.hpp"

namespace qcloud {

namespace {

const char* batch_order_name(BatchOrder b) {
    switch (b) {
    case BatchOrder::MetricAscending: return "metric";
    case BatchOrder::MetricDescending: return "metric-desc";
    case BatchOrder::Fifo: return "fifo";
    }
    return "?";
}

BatchOrder batch_order_from_name(const std::string& name) {
    if (name == "metric") return BatchOrder::MetricAscending;
    if (name == "metric-desc") return BatchOrder::MetricDescending;
    if (name == "fifo") return BatchOrder::Fifo;
    fail(ErrorCode::ConfigError, "unknown batch order '" + name + "'");
}

std::string fmt1(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string MethodSpec::label() const {
    std::string s = placement_method_name(placement);
    s += "-";
    s += alloc_policy_name(policy);
    if (batching != BatchOrder::MetricAscending) {
        s += "-";
        s += batch_order_name(batching);
    }
    return s;
}

ExperimentConfig config_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorCode::ConfigError, std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("topology")) {
            const auto& t = j["topology"];
            cfg.qpus = t.value("qpus", cfg.qpus);
            cfg.edge_prob = t.value("edge_prob", cfg.edge_prob);
            cfg.comp_qubits = t.value("comp_qubits", cfg.comp_qubits);
            cfg.comm_qubits = t.value("comm_qubits", cfg.comm_qubits);
            cfg.topology_file = t.value("file", cfg.topology_file);
        }
        if (j.contains("workload")) {
            const auto& w = j["workload"];
            if (w.contains("files"))
                cfg.circuit_files = w["files"].get<std::vector<std::string>>();
            if (w.contains("circuits"))
                cfg.circuits = w["circuits"].get<std::vector<std::string>>();
            cfg.mix = w.value("mix", cfg.mix);
            cfg.batch_size = w.value("batch_size", cfg.batch_size);
        }
        if (j.contains("methods")) {
            for (const auto& m : j["methods"]) {
                MethodSpec spec;
                spec.placement =
                    placement_method_from_name(m.value("placement", std::string("cloudqc")));
                spec.policy = alloc_policy_from_name(m.value("policy", std::string("cloudqc")));
                spec.batching = batch_order_from_name(m.value("batching", std::string("metric")));
                cfg.methods.push_back(spec);
            }
        }
        cfg.trials = j.value("trials", cfg.trials);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.p_epr = j.value("p_epr", cfg.p_epr);
        if (j.contains("mode"))
            cfg.mode = j["mode"].get<std::string>() == "incoming" ? SimMode::Incoming
                                                                  : SimMode::Batch;
        if (j.contains("lambda")) {
            cfg.lambda.lambda1 = j["lambda"].at(0).get<double>();
            cfg.lambda.lambda2 = j["lambda"].at(1).get<double>();
            cfg.lambda.lambda3 = j["lambda"].at(2).get<double>();
        }
        if (j.contains("alpha_list"))
            cfg.alpha_list = j["alpha_list"].get<std::vector<double>>();
        cfg.epsilon = j.value("epsilon", cfg.epsilon);
        cfg.workers = j.value("workers", cfg.workers);
        cfg.out_dir = j.value("out_dir", cfg.out_dir);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorCode::ConfigError, std::string("config field error: ") + e.what());
    }
    if (cfg.trials < 1) fail(ErrorCode::ConfigError, "trials must be >= 1");
    if (cfg.methods.empty()) cfg.methods.push_back({});
    return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["topology"] = {{"qpus", cfg.qpus},
                     {"edge_prob", cfg.edge_prob},
                     {"comp_qubits", cfg.comp_qubits},
                     {"comm_qubits", cfg.comm_qubits}};
    if (!cfg.topology_file.empty()) j["topology"]["file"] = cfg.topology_file;
    j["workload"] = nlohmann::json::object();
    if (!cfg.circuit_files.empty()) j["workload"]["files"] = cfg.circuit_files;
    if (!cfg.circuits.empty()) j["workload"]["circuits"] = cfg.circuits;
    if (!cfg.mix.empty()) j["workload"]["mix"] = cfg.mix;
    j["workload"]["batch_size"] = cfg.batch_size;
    j["methods"] = nlohmann::json::array();
    for (const auto& m : cfg.methods)
        j["methods"].push_back({{"placement", placement_method_name(m.placement)},
                                {"policy", alloc_policy_name(m.policy)},
                                {"batching", batch_order_name(m.batching)}});
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["p_epr"] = cfg.p_epr;
    j["mode"] = cfg.mode == SimMode::Incoming ? "incoming" : "batch";
    j["lambda"] = {cfg.lambda.lambda1, cfg.lambda.lambda2, cfg.lambda.lambda3};
    j["alpha_list"] = cfg.alpha_list;
    j["epsilon"] = cfg.epsilon;
    j["workers"] = cfg.workers;
    // out_dir stays out of the manifest so a replay elsewhere is byte-identical
    return j.dump(2);
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, int trial) {
    // splitmix-style decorrelation of the base seed
    std::uint64_t z = cfg.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

struct WorkloadLibrary {
    std::map<std::string, Circuit> by_name;

    const Circuit* get(const std::string& name) {
        auto it = by_name.find(name);
        if (it != by_name.end()) return &it->second;
        auto [pos, _] = by_name.emplace(name, benchmark_circuit(name));
        return &pos->second;
    }
};

CellResult run_cell(const ExperimentConfig& cfg, const MethodSpec& method, int trial,
                    WorkloadLibrary& lib) {
    CellResult cell;
    cell.method = method.label();
    cell.trial = trial;
    std::uint64_t seed = trial_seed(cfg, trial);
    try {
        CloudTopology topo =
            cfg.topology_file.empty()
                ? random_topology(cfg.qpus, cfg.edge_prob, cfg.comp_qubits, cfg.comm_qubits, seed)
                : topology_from_file(cfg.topology_file);

        // assemble the trial workload
        std::vector<const Circuit*> circuits;
        for (const auto& f : cfg.circuit_files) {
            auto [pos, inserted] = lib.by_name.emplace("file:" + f, Circuit{});
            if (inserted) pos->second = parse_qasm_file(f);
            circuits.push_back(&pos->second);
        }
        for (const auto& name : cfg.circuits) circuits.push_back(lib.get(name));
        if (!cfg.mix.empty()) {
            auto names = workload_mix(cfg.mix);
            std::mt19937_64 rng(seed ^ 0xabcdef12345678ull);
            std::uniform_int_distribution<size_t> pick(0, names.size() - 1);
            for (int i = 0; i < cfg.batch_size; ++i)
                circuits.push_back(lib.get(names[pick(rng)]));
        }
        if (circuits.empty()) fail(ErrorCode::ConfigError, "empty workload");

        std::vector<SimJob> jobs;
        for (size_t i = 0; i < circuits.size(); ++i)
            jobs.push_back({static_cast<int>(i), circuits[i], 0.0});

        SimConfig sc;
        sc.p_epr = cfg.p_epr;
        sc.policy = method.policy;
        sc.method = method.placement;
        sc.mode = cfg.mode;
        sc.batch_order = method.batching;
        sc.lambda = cfg.lambda;
        sc.placement.alpha_list = cfg.alpha_list;
        sc.placement.remote_load_epsilon = cfg.epsilon;
        sc.seed = seed;
        cell.sim = run_simulation(jobs, topo, sc);
    } catch (const Error& e) {
        cell.failed = true;
        cell.error = e.what();
    }
    return cell;
}

}  // namespace

ReportBundle run_experiment(const ExperimentConfig& cfg) {
    ReportBundle bundle;
    bundle.config = cfg;

    struct CellKey {
        size_t method;
        int trial;
    };
    std::vector<CellKey> keys;
    for (size_t m = 0; m < cfg.methods.size(); ++m)
        for (int t = 0; t < cfg.trials; ++t) keys.push_back({m, t});

    int workers = std::max(1, cfg.workers);
    bundle.cells.resize(keys.size());
    if (workers == 1) {
        WorkloadLibrary lib;
        for (size_t i = 0; i < keys.size(); ++i)
            bundle.cells[i] =
                run_cell(cfg, cfg.methods[keys[i].method], keys[i].trial, lib);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::future<void>> pool;
        for (int w = 0; w < workers; ++w)
            pool.push_back(std::async(std::launch::async, [&] {
                WorkloadLibrary lib;  // per-worker cache, cells stay independent
                while (true) {
                    size_t i = next.fetch_add(1);
                    if (i >= keys.size()) break;
                    bundle.cells[i] =
                        run_cell(cfg, cfg.methods[keys[i].method], keys[i].trial, lib);
                }
            }));
        for (auto& f : pool) f.get();
    }

    std::sort(bundle.cells.begin(), bundle.cells.end(), [](const CellResult& a, const CellResult& b) {
        return a.method != b.method ? a.method < b.method : a.trial < b.trial;
    });
    return bundle;
}

std::string records_to_csv(const std::vector<JobRecord>& records) {
    std::ostringstream out;
    out << "id,name,arrival,start,completion,jct,remote_ops,comm_cost,attempts\n";
    for (const auto& r : records)
        out << r.circuit_id << ',' << r.name << ',' << fmt1(r.arrival) << ',' << fmt1(r.start)
            << ',' << fmt1(r.completion) << ',' << fmt1(r.jct()) << ',' << r.remote_ops << ','
            << r.comm_cost << ',' << r.epr_attempts << '\n';
    return out.str();
}

void emit_cdf(const std::vector<JobRecord>& records, const std::string& path) {
    if (records.empty()) fail(ErrorCode::EmptyRun, "cannot emit CDF of an empty record set");
    Metrics m = compute_metrics(records);
    std::ofstream out(path);
    if (!out) fail(ErrorCode::ConfigError, "cannot write " + path);
    out << "jct,fraction\n";
    for (auto [t, f] : m.cdf) out << fmt1(t) << ',' << fmt6(f) << '\n';
}

void write_bundle(const ReportBundle& bundle) {
    namespace fs = std::filesystem;
    const auto& cfg = bundle.config;
    fs::create_directories(cfg.out_dir);

    {
        std::ofstream out(cfg.out_dir + "/manifest.json");
        out << config_to_json_text(cfg) << '\n';
    }

    std::map<std::string, std::vector<JobRecord>> per_method;
    nlohmann::json summary;
    summary["methods"] = nlohmann::json::object();
    for (const auto& cell : bundle.cells) {
        std::string base =
            cfg.out_dir + "/" + cell.method + "_trial" + std::to_string(cell.trial);
        if (cell.failed) {
            std::ofstream out(base + "_error.txt");
            out << cell.error << '\n';
            continue;
        }
        std::ofstream out(base + "_records.csv");
        out << records_to_csv(cell.sim.records);
        auto& agg = per_method[cell.method];
        agg.insert(agg.end(), cell.sim.records.begin(), cell.sim.records.end());
    }
    for (const auto& [method, records] : per_method) {
        if (records.empty()) continue;
        Metrics m = compute_metrics(records);
        emit_cdf(records, cfg.out_dir + "/" + method + "_cdf.csv");
        long long attempts = 0;
        for (const auto& r : records) attempts += r.epr_attempts;
        summary["methods"][method] = {{"jobs", records.size()},
                                      {"mean_jct", m.mean_jct},
                                      {"median_jct", m.median_jct},
                                      {"total_remote_ops", m.total_remote_ops},
                                      {"total_comm_cost", m.total_comm_cost},
                                      {"total_epr_attempts", attempts}};
    }
    std::ofstream out(cfg.out_dir + "/summary.json");
    out << summary.dump(2) << '\n';
}

}  // namespace qcloud
