#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcloud/sim.hpp"

namespace qcloud {

struct MethodSpec {
    PlacementMethod placement = PlacementMethod::CloudQC;
    AllocPolicy policy = AllocPolicy::CloudQC;
    BatchOrder batching = BatchOrder::MetricAscending;

    std::string label() const;
};

struct ExperimentConfig {
    // topology
    int qpus = 20;
    double edge_prob = 0.3;
    int comp_qubits = 20;
    int comm_qubits = 5;
    std::string topology_file;  // overrides the random topology when set

    // workload: explicit circuits (files or benchmark names), or a named mix
    std::vector<std::string> circuit_files;
    std::vector<std::string> circuits;
    std::string mix;
    int batch_size = 20;  // circuits sampled per trial when a mix is used

    std::vector<MethodSpec> methods;
    int trials = 1;
    std::uint64_t seed = 1;
    double p_epr = 0.3;
    SimMode mode = SimMode::Batch;
    BatchWeights lambda;
    std::vector<double> alpha_list{0.03, 0.10, 0.30};
    double epsilon = -1.0;
    int workers = 1;
    std::string out_dir = "out";
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_file(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& cfg);

struct CellResult {
    std::string method;
    int trial = 0;
    bool failed = false;
    std::string error;
    SimResult sim;
};

struct ReportBundle {
    ExperimentConfig config;
    std::vector<CellResult> cells;  // sorted by (method, trial)
};

// Runs the (trial x method) matrix. Per-cell topology and workload derive
// deterministically from the trial seed; failures are recorded and the run
// continues.
ReportBundle run_experiment(const ExperimentConfig& cfg);

// Writes manifest.json, per-cell records CSVs, per-method cdf CSVs and
// summary.json under cfg.out_dir. Output bytes depend only on the bundle.
void write_bundle(const ReportBundle& bundle);

void emit_cdf(const std::vector<JobRecord>& records, const std::string& path);

std::string records_to_csv(const std::vector<JobRecord>& records);

// trial seed for topology/workload derivation
std::uint64_t trial_seed(const ExperimentConfig& cfg, int trial);

}  // namespace qcloud
