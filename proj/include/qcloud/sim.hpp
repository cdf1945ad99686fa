#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcloud/baselines.hpp"
#include "qcloud/circuit.hpp"
#include "qcloud/cloud.hpp"
#include "qcloud/placement.hpp"
#include "qcloud/scheduler.hpp"

namespace qcloud {

// Simulation time in tenths of a CX unit; keeps event ordering exact since
// t_1q = 0.1 is the finest latency granularity.
using Tick = std::int64_t;

inline Tick to_ticks(double cx_units) {
    return static_cast<Tick>(cx_units * 10.0 + (cx_units >= 0 ? 0.5 : -0.5));
}
inline double from_ticks(Tick t) { return static_cast<double>(t) / 10.0; }

enum class SimMode { Batch, Incoming };

enum class PlacementMethod { CloudQC, CloudQCBfs, Random, SimAnneal, Genetic };

// Serial: a round spans the whole path at once (success p^h per pair).
// Parallel: each hop stage retries independently across rounds; a remote op
// finishes once every stage has succeeded. Sensitivity hook, not the default.
enum class MultihopModel { Serial, Parallel };

PlacementMethod placement_method_from_name(const std::string& name);
const char* placement_method_name(PlacementMethod m);

struct SimJob {
    int id = 0;
    const Circuit* circuit = nullptr;
    double arrival = 0.0;  // CX units
};

struct JobRecord {
    int circuit_id = 0;
    std::string name;
    double arrival = 0.0;
    double start = 0.0;
    double completion = 0.0;
    long long remote_ops = 0;
    long long comm_cost = 0;
    long long epr_attempts = 0;

    double jct() const { return completion - arrival; }
};

struct SimConfig {
    double p_epr = 0.3;
    AllocPolicy policy = AllocPolicy::CloudQC;
    PlacementMethod method = PlacementMethod::CloudQC;
    SimMode mode = SimMode::Batch;
    BatchOrder batch_order = BatchOrder::MetricAscending;
    BatchWeights lambda;
    PlacementConfig placement;
    AnnealConfig anneal;
    GaConfig ga;
    MultihopModel multihop = MultihopModel::Serial;
    int aging_threshold = kAgingThreshold;
    std::uint64_t seed = 0;
    bool record_trace = false;
};

struct AllocationTraceEntry {
    double time = 0.0;
    int job = 0;
    int node = 0;
    int priority = 0;
    int qpu_a = 0;
    int qpu_b = 0;
    int pairs = 0;
    bool success = false;
};

struct SimResult {
    std::vector<JobRecord> records;
    double makespan = 0.0;   // CX units
    double utilization = 0.0;  // time-weighted computing-qubit occupancy
    long long total_comm_cost = 0;
    std::vector<AllocationTraceEntry> trace;  // filled when record_trace
};

// Runs the batch/incoming workload on a copy of the topology. Deterministic
// for a fixed (jobs, topology, config).
SimResult run_simulation(const std::vector<SimJob>& jobs, const CloudTopology& topology,
                         const SimConfig& config);

struct Metrics {
    double mean_jct = 0.0;
    double median_jct = 0.0;
    std::vector<std::pair<double, double>> cdf;  // (jct, cumulative fraction)
    long long total_comm_cost = 0;
    long long total_remote_ops = 0;
};

Metrics compute_metrics(const std::vector<JobRecord>& records);

double percentile_jct(const std::vector<JobRecord>& records, double q);

}  // namespace qcloud
