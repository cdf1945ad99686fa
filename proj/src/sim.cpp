#include "qcloud/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>

#include "qcloud/error.hpp"

namespace qcloud {

PlacementMethod placement_method_from_name(const std::string& name) {
    if (name == "cloudqc") return PlacementMethod::CloudQC;
    if (name == "cloudqc-bfs") return PlacementMethod::CloudQCBfs;
    if (name == "random") return PlacementMethod::Random;
    if (name == "sa") return PlacementMethod::SimAnneal;
    if (name == "ga") return PlacementMethod::Genetic;
    fail(ErrorCode::ConfigError, "unknown placement method '" + name + "'");
}

const char* placement_method_name(PlacementMethod m) {
    switch (m) {
    case PlacementMethod::CloudQC: return "cloudqc";
    case PlacementMethod::CloudQCBfs: return "cloudqc-bfs";
    case PlacementMethod::Random: return "random";
    case PlacementMethod::SimAnneal: return "sa";
    case PlacementMethod::Genetic: return "ga";
    }
    return "?";
}

namespace {

enum class EventKind { JobArrival, GateComplete, EprRoundComplete };

struct Event {
    Tick time = 0;
    std::uint64_t seq = 0;  // FIFO among equal timestamps
    EventKind kind = EventKind::JobArrival;
    int job = -1;
    int node = -1;     // GateDag node
    int pairs = 0;     // EPR round width
    bool success = false;

    bool operator>(const Event& other) const {
        return time != other.time ? time > other.time : seq > other.seq;
    }
};

struct JobState {
    const Circuit* circuit = nullptr;
    int id = 0;
    Tick arrival = 0;
    GateDag dag;
    InteractionGraph graph;
    Placement placement;
    RemoteDag remote;
    std::vector<int> remote_id_of_node;  // GateDag node -> remote op id (-1 local)
    std::vector<int> stages_left;        // per GateDag node, parallel multihop only
    std::vector<int> indeg;
    int remaining = 0;
    bool placed = false;
    bool done = false;
    long long epr_attempts = 0;
    Tick started = 0;
    Tick completed = 0;
};

struct PendingRemote {
    int job = 0;
    int node = 0;  // GateDag node
    int age = 0;
};

struct TickLatency {
    Tick t_1q, t_2q, t_ms, t_iep;

    explicit TickLatency(const LatencyModel& m)
        : t_1q(to_ticks(m.t_1q)),
          t_2q(to_ticks(m.t_2q)),
          t_ms(to_ticks(m.t_ms)),
          t_iep(to_ticks(m.t_iep)) {
        if (t_1q <= 0 || t_2q <= 0 || t_ms <= 0 || t_iep <= 0)
            fail(ErrorCode::BadParams, "latencies must be positive");
    }
};

class Simulator {
public:
    Simulator(const std::vector<SimJob>& jobs, const CloudTopology& topology,
              const SimConfig& config)
        : topo_(topology), cfg_(config), lat_(config.placement.latency), rng_(config.seed) {
        for (const auto& j : jobs) {
            JobState st;
            st.circuit = j.circuit;
            st.id = j.id;
            st.arrival = to_ticks(j.arrival);
            jobs_.push_back(std::move(st));
        }
    }

    SimResult run() {
        if (cfg_.mode == SimMode::Batch) {
            for (auto& j : jobs_) j.arrival = 0;
            admit_jobs(0);
        } else {
            for (size_t i = 0; i < jobs_.size(); ++i)
                push_event({jobs_[i].arrival, next_seq(), EventKind::JobArrival,
                            static_cast<int>(i), -1, 0, false});
        }

        while (true) {
            if (events_.empty()) {
                if (!pending_.empty() || incomplete() > 0) {
                    // a final arbitration may still make progress
                    arbitrate(now_);
                    if (events_.empty())
                        fail(ErrorCode::DeadlockDetected,
                             "no runnable event while jobs are incomplete");
                    continue;
                }
                break;
            }
            Tick t = events_.top().time;
            if (t < now_) fail(ErrorCode::InvariantViolation, "clock went backwards");
            now_ = t;
            while (!events_.empty() && events_.top().time == t) {
                Event ev = events_.top();
                events_.pop();
                handle(ev);
            }
            if (!pending_.empty()) arbitrate(t);
        }
        return collect();
    }

private:
    CloudTopology topo_;
    SimConfig cfg_;
    TickLatency lat_;
    std::mt19937_64 rng_;
    std::vector<JobState> jobs_;
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
    std::uint64_t seq_ = 0;
    Tick now_ = 0;
    std::deque<PendingRemote> pending_;
    std::deque<int> waiting_;  // jobs deferred by placement, decision order
    SimResult result_;

    // computing-qubit occupancy integral for the utilization metric
    long long used_comp_ = 0;
    double used_integral_ = 0.0;
    Tick last_usage_change_ = 0;

    std::uint64_t next_seq() { return seq_++; }
    void push_event(Event ev) { events_.push(ev); }

    int incomplete() const {
        int c = 0;
        for (const auto& j : jobs_)
            if (!j.done) ++c;
        return c;
    }

    void note_usage_change(Tick t, long long delta) {
        used_integral_ += static_cast<double>(used_comp_) * static_cast<double>(t - last_usage_change_);
        last_usage_change_ = t;
        used_comp_ += delta;
    }

    void admit_jobs(Tick t) {
        // batch mode entry point: order all unplaced jobs by the I metric
        std::vector<int> ids;
        std::vector<CircuitStats> stats;
        for (size_t i = 0; i < jobs_.size(); ++i)
            if (!jobs_[i].placed && !jobs_[i].done) {
                ids.push_back(static_cast<int>(i));
                stats.push_back(circuit_stats(*jobs_[i].circuit));
            }
        if (ids.empty()) return;
        BatchDecision d = order_batch(stats, cfg_.lambda, topo_.total_comp_free(),
                                       cfg_.batch_order);
        waiting_.clear();
        for (int local : d.order) waiting_.push_back(ids[static_cast<size_t>(local)]);
        try_place_waiting(t);
    }

    void try_place_waiting(Tick t) {
        std::deque<int> still;
        bool blocked = false;
        while (!waiting_.empty()) {
            int ji = waiting_.front();
            waiting_.pop_front();
            if (blocked || !try_place(ji, t)) {
                still.push_back(ji);
                // plain FIFO waits for the head job; metric orders backfill
                if (cfg_.batch_order == BatchOrder::Fifo) blocked = true;
            }
        }
        waiting_ = std::move(still);
    }

    bool try_place(int ji, Tick t) {
        JobState& j = jobs_[static_cast<size_t>(ji)];
        Placement pl;
        try {
            switch (cfg_.method) {
            case PlacementMethod::CloudQC:
            case PlacementMethod::CloudQCBfs: {
                PlacementConfig pc = cfg_.placement;
                pc.p_epr = cfg_.p_epr;
                pc.qpu_set_mode = cfg_.method == PlacementMethod::CloudQCBfs
                                      ? QpuSetMode::Bfs
                                      : QpuSetMode::Community;
                pl = place_circuit(*j.circuit, topo_, pc);
                break;
            }
            case PlacementMethod::Random:
                pl = random_placement(*j.circuit, topo_, cfg_.seed + static_cast<std::uint64_t>(ji));
                break;
            case PlacementMethod::SimAnneal: {
                AnnealConfig ac = cfg_.anneal;
                ac.seed = cfg_.seed + static_cast<std::uint64_t>(ji);
                pl = sa_placement(*j.circuit, topo_, ac);
                break;
            }
            case PlacementMethod::Genetic: {
                GaConfig gc = cfg_.ga;
                gc.seed = cfg_.seed + static_cast<std::uint64_t>(ji);
                pl = ga_placement(*j.circuit, topo_, gc);
                break;
            }
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NoFeasibleAssignment) return false;
            throw;
        }

        j.dag = build_dag(*j.circuit);
        j.graph = build_interaction_graph(*j.circuit);
        j.placement = std::move(pl);
        j.placement.circuit_id = j.id;
        auto loads = j.placement.qpu_loads(topo_.size());
        for (int q = 0; q < topo_.size(); ++q)
            if (loads[static_cast<size_t>(q)] > 0) {
                topo_.reserve_comp(q, loads[static_cast<size_t>(q)]);
                note_usage_change(t, loads[static_cast<size_t>(q)]);
            }
        j.remote = build_remote_dag(j.dag, *j.circuit, j.placement.qubit_to_qpu, topo_);
        j.remote_id_of_node.assign(static_cast<size_t>(j.dag.size()), -1);
        j.stages_left.assign(static_cast<size_t>(j.dag.size()), 0);
        for (const auto& op : j.remote.nodes) {
            j.remote_id_of_node[static_cast<size_t>(op.dag_node)] = op.id;
            j.stages_left[static_cast<size_t>(op.dag_node)] = op.hops;
        }

        j.indeg.assign(static_cast<size_t>(j.dag.size()), 0);
        for (int v = 0; v < j.dag.size(); ++v)
            j.indeg[static_cast<size_t>(v)] =
                static_cast<int>(j.dag.pred[static_cast<size_t>(v)].size());
        j.remaining = j.dag.size();
        j.placed = true;
        j.started = t;

        if (j.remaining == 0) {
            complete_job(ji, t);
            return true;
        }
        for (int v = 0; v < j.dag.size(); ++v)
            if (j.indeg[static_cast<size_t>(v)] == 0) dispatch_gate(ji, v, t);
        return true;
    }

    void dispatch_gate(int ji, int node, Tick t) {
        JobState& j = jobs_[static_cast<size_t>(ji)];
        const Gate& g =
            j.circuit->gates[static_cast<size_t>(j.dag.gate_index[static_cast<size_t>(node)])];
        if (g.kind == GateKind::OneQubit) {
            push_event({t + lat_.t_1q, next_seq(), EventKind::GateComplete, ji, node, 0, false});
            return;
        }
        int qa = j.placement.qubit_to_qpu[static_cast<size_t>(g.qubits[0])];
        int qb = j.placement.qubit_to_qpu[static_cast<size_t>(g.qubits[1])];
        if (qa == qb) {
            push_event({t + lat_.t_2q, next_seq(), EventKind::GateComplete, ji, node, 0, false});
        } else {
            pending_.push_back({ji, node, 0});
        }
    }

    void arbitrate(Tick t) {
        if (pending_.empty()) return;
        std::vector<AllocRequest> requests;
        requests.reserve(pending_.size());
        for (const auto& p : pending_) {
            const JobState& j = jobs_[static_cast<size_t>(p.job)];
            int rid = j.remote_id_of_node[static_cast<size_t>(p.node)];
            const RemoteOp& op = j.remote.nodes[static_cast<size_t>(rid)];
            AllocRequest rq;
            rq.node_id = static_cast<int>(requests.size());
            rq.priority = op.priority;
            rq.qpu_a = op.qpu_a;
            rq.qpu_b = op.qpu_b;
            rq.age = p.age;
            requests.push_back(rq);
        }
        std::vector<int> budgets(static_cast<size_t>(topo_.size()));
        for (int q = 0; q < topo_.size(); ++q)
            budgets[static_cast<size_t>(q)] = topo_.qpus[static_cast<size_t>(q)].comm_free;

        AllocationRound round =
            allocate_round(requests, budgets, cfg_.policy, rng_, cfg_.aging_threshold);

        std::deque<PendingRemote> still;
        for (size_t i = 0; i < pending_.size(); ++i) {
            PendingRemote p = pending_[i];
            int x = round.pairs[i];
            if (x <= 0) {
                ++p.age;
                still.push_back(p);
                continue;
            }
            JobState& j = jobs_[static_cast<size_t>(p.job)];
            int rid = j.remote_id_of_node[static_cast<size_t>(p.node)];
            const RemoteOp& op = j.remote.nodes[static_cast<size_t>(rid)];
            topo_.reserve_comm(op.qpu_a, x);
            topo_.reserve_comm(op.qpu_b, x);
            j.epr_attempts += x;
            bool ok;
            if (cfg_.multihop == MultihopModel::Parallel && op.hops > 1) {
                int& stages = j.stages_left[static_cast<size_t>(p.node)];
                double q_stage = attempt_success_probability(x, 1, cfg_.p_epr);
                std::bernoulli_distribution stage_draw(q_stage);
                for (int s = stages; s > 0; --s)
                    if (stage_draw(rng_)) --stages;
                ok = stages == 0;
            } else {
                double p_round = attempt_success_probability(x, op.hops, cfg_.p_epr);
                std::bernoulli_distribution draw(p_round);
                ok = draw(rng_);
            }
            Tick dur = static_cast<Tick>(op.hops) * lat_.t_iep;
            push_event({t + dur, next_seq(), EventKind::EprRoundComplete, p.job, p.node, x, ok});
            if (cfg_.record_trace)
                result_.trace.push_back({from_ticks(t), j.id, rid, op.priority, op.qpu_a,
                                         op.qpu_b, x, ok});
        }
        pending_ = std::move(still);
    }

    void handle(const Event& ev) {
        switch (ev.kind) {
        case EventKind::JobArrival: {
            waiting_.push_back(ev.job);
            try_place_waiting(ev.time);
            break;
        }
        case EventKind::EprRoundComplete: {
            JobState& j = jobs_[static_cast<size_t>(ev.job)];
            int rid = j.remote_id_of_node[static_cast<size_t>(ev.node)];
            const RemoteOp& op = j.remote.nodes[static_cast<size_t>(rid)];
            topo_.release_comm(op.qpu_a, ev.pairs);
            topo_.release_comm(op.qpu_b, ev.pairs);
            if (ev.success) {
                push_event({ev.time + lat_.t_2q + lat_.t_ms, next_seq(),
                            EventKind::GateComplete, ev.job, ev.node, 0, false});
            } else {
                pending_.push_back({ev.job, ev.node, 0});
            }
            break;
        }
        case EventKind::GateComplete: {
            JobState& j = jobs_[static_cast<size_t>(ev.job)];
            --j.remaining;
            for (int v : j.dag.succ[static_cast<size_t>(ev.node)])
                if (--j.indeg[static_cast<size_t>(v)] == 0) dispatch_gate(ev.job, v, ev.time);
            if (j.remaining == 0) complete_job(ev.job, ev.time);
            break;
        }
        }
    }

    void complete_job(int ji, Tick t) {
        JobState& j = jobs_[static_cast<size_t>(ji)];
        j.done = true;
        j.completed = t;
        auto loads = j.placement.qpu_loads(topo_.size());
        for (int q = 0; q < topo_.size(); ++q)
            if (loads[static_cast<size_t>(q)] > 0) {
                topo_.release_comp(q, loads[static_cast<size_t>(q)]);
                note_usage_change(t, -loads[static_cast<size_t>(q)]);
            }
        // freed resources may admit deferred jobs
        if (!waiting_.empty()) try_place_waiting(t);
    }

    SimResult collect() {
        if (!waiting_.empty())
            fail(ErrorCode::NoFeasibleAssignment,
                 "jobs remain unplaceable after all completions");
        Tick makespan = 0;
        for (const auto& j : jobs_) {
            JobRecord r;
            r.circuit_id = j.id;
            r.name = j.circuit->name;
            r.arrival = from_ticks(j.arrival);
            r.start = from_ticks(j.started);
            r.completion = from_ticks(j.completed);
            r.remote_ops = j.placement.remote_ops;
            r.comm_cost = j.placement.comm_cost;
            r.epr_attempts = j.epr_attempts;
            result_.records.push_back(std::move(r));
            result_.total_comm_cost += j.placement.comm_cost;
            makespan = std::max(makespan, j.completed);
        }
        result_.makespan = from_ticks(makespan);
        long long total_cap = 0;
        for (const auto& q : topo_.qpus) total_cap += q.comp_capacity;
        if (makespan > 0 && total_cap > 0) {
            used_integral_ +=
                static_cast<double>(used_comp_) * static_cast<double>(makespan - last_usage_change_);
            result_.utilization =
                used_integral_ / (static_cast<double>(total_cap) * static_cast<double>(makespan));
        }
        return std::move(result_);
    }
};

}  // namespace

SimResult run_simulation(const std::vector<SimJob>& jobs, const CloudTopology& topology,
                         const SimConfig& config) {
    Simulator sim(jobs, topology, config);
    return sim.run();
}

Metrics compute_metrics(const std::vector<JobRecord>& records) {
    if (records.empty()) fail(ErrorCode::EmptyRun, "no job records");
    Metrics m;
    std::vector<double> jcts;
    for (const auto& r : records) {
        jcts.push_back(r.jct());
        m.total_comm_cost += r.comm_cost;
        m.total_remote_ops += r.remote_ops;
    }
    std::sort(jcts.begin(), jcts.end());
    double sum = 0.0;
    for (double v : jcts) sum += v;
    m.mean_jct = sum / static_cast<double>(jcts.size());
    size_t n = jcts.size();
    m.median_jct = n % 2 == 1 ? jcts[n / 2] : 0.5 * (jcts[n / 2 - 1] + jcts[n / 2]);
    for (size_t i = 0; i < n; ++i) {
        if (i + 1 < n && jcts[i + 1] == jcts[i]) continue;  // collapse ties
        m.cdf.emplace_back(jcts[i], static_cast<double>(i + 1) / static_cast<double>(n));
    }
    return m;
}

double percentile_jct(const std::vector<JobRecord>& records, double q) {
    if (records.empty()) fail(ErrorCode::EmptyRun, "no job records");
    std::vector<double> jcts;
    for (const auto& r : records) jcts.push_back(r.jct());
    std::sort(jcts.begin(), jcts.end());
    double idx = q * static_cast<double>(jcts.size() - 1);
    size_t lo = static_cast<size_t>(idx);
    size_t hi = std::min(lo + 1, jcts.size() - 1);
    double frac = idx - static_cast<double>(lo);
    return jcts[lo] * (1.0 - frac) + jcts[hi] * frac;
}

}  // namespace qcloud
