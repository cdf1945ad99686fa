#include "qcloud/cloud.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qcloud/error.hpp"

namespace qcloud {

int CloudTopology::total_comp_free() const {
    int s = 0;
    for (const auto& q : qpus) s += q.comp_free;
    return s;
}

int CloudTopology::max_comp_free() const {
    int m = 0;
    for (const auto& q : qpus) m = std::max(m, q.comp_free);
    return m;
}

int CloudTopology::max_comp_capacity() const {
    int m = 0;
    for (const auto& q : qpus) m = std::max(m, q.comp_capacity);
    return m;
}

void CloudTopology::reserve_comp(int qpu, int qubits) {
    auto& q = qpus.at(static_cast<size_t>(qpu));
    if (qubits > q.comp_free)
        fail(ErrorCode::InsufficientCapacity,
             "QPU " + std::to_string(qpu) + ": cannot reserve " + std::to_string(qubits) +
                 " computing qubits (" + std::to_string(q.comp_free) + " free)");
    q.comp_free -= qubits;
}

void CloudTopology::release_comp(int qpu, int qubits) {
    auto& q = qpus.at(static_cast<size_t>(qpu));
    if (q.comp_free + qubits > q.comp_capacity)
        fail(ErrorCode::InvariantViolation, "computing-qubit release exceeds capacity");
    q.comp_free += qubits;
}

void CloudTopology::reserve_comm(int qpu, int qubits) {
    auto& q = qpus.at(static_cast<size_t>(qpu));
    if (qubits > q.comm_free)
        fail(ErrorCode::InsufficientCapacity,
             "QPU " + std::to_string(qpu) + ": cannot reserve " + std::to_string(qubits) +
                 " communication qubits (" + std::to_string(q.comm_free) + " free)");
    q.comm_free -= qubits;
}

void CloudTopology::release_comm(int qpu, int qubits) {
    auto& q = qpus.at(static_cast<size_t>(qpu));
    if (q.comm_free + qubits > q.comm_capacity)
        fail(ErrorCode::InvariantViolation, "communication-qubit release exceeds capacity");
    q.comm_free += qubits;
}

void CloudTopology::finalize() {
    int n = size();
    neighbors.assign(static_cast<size_t>(n), {});
    for (auto [a, b] : links) {
        neighbors[static_cast<size_t>(a)].push_back(b);
        neighbors[static_cast<size_t>(b)].push_back(a);
    }
    for (auto& nb : neighbors) std::sort(nb.begin(), nb.end());

    distance.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), -1));
    for (int s = 0; s < n; ++s) {
        auto& row = distance[static_cast<size_t>(s)];
        row[static_cast<size_t>(s)] = 0;
        std::deque<int> q{s};
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int v : neighbors[static_cast<size_t>(u)]) {
                if (row[static_cast<size_t>(v)] < 0) {
                    row[static_cast<size_t>(v)] = row[static_cast<size_t>(u)] + 1;
                    q.push_back(v);
                }
            }
        }
    }
}

bool is_connected(int n, const std::vector<std::pair<int, int>>& links) {
    if (n == 0) return false;
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (auto [a, b] : links) {
        adj[static_cast<size_t>(a)].push_back(b);
        adj[static_cast<size_t>(b)].push_back(a);
    }
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::deque<int> q{0};
    seen[0] = true;
    int count = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : adj[static_cast<size_t>(u)])
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = true;
                ++count;
                q.push_back(v);
            }
    }
    return count == n;
}

CloudTopology random_topology(int num_qpus, double edge_prob, int comp_qubits,
                              int comm_qubits, std::uint64_t seed, int max_degree) {
    if (num_qpus < 2) fail(ErrorCode::BadParams, "topology needs at least 2 QPUs");
    if (edge_prob <= 0.0 || edge_prob > 1.0)
        fail(ErrorCode::BadParams, "edge probability must be in (0, 1]");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    constexpr int kMaxRetries = 1000;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        std::vector<std::pair<int, int>> links;
        std::vector<int> degree(static_cast<size_t>(num_qpus), 0);
        for (int a = 0; a < num_qpus; ++a)
            for (int b = a + 1; b < num_qpus; ++b) {
                if (coin(rng) >= edge_prob) continue;
                if (max_degree > 0 && (degree[static_cast<size_t>(a)] >= max_degree ||
                                       degree[static_cast<size_t>(b)] >= max_degree))
                    continue;
                links.emplace_back(a, b);
                ++degree[static_cast<size_t>(a)];
                ++degree[static_cast<size_t>(b)];
            }
        if (!is_connected(num_qpus, links)) continue;
        CloudTopology t;
        t.qpus.resize(static_cast<size_t>(num_qpus));
        for (int i = 0; i < num_qpus; ++i) {
            auto& q = t.qpus[static_cast<size_t>(i)];
            q.id = i;
            q.comp_capacity = q.comp_free = comp_qubits;
            q.comm_capacity = q.comm_free = comm_qubits;
        }
        t.links = std::move(links);
        t.finalize();
        return t;
    }
    fail(ErrorCode::ConnectivityFailure,
         "could not draw a connected topology (edge_prob too small?)");
}

CloudTopology topology_from_json(const std::string& json_text) {
    CloudTopology t;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
        for (const auto& jq : j.at("qpus")) {
            QpuState q;
            q.id = jq.at("id").get<int>();
            q.comp_capacity = q.comp_free = jq.at("comp").get<int>();
            q.comm_capacity = q.comm_free = jq.at("comm").get<int>();
            t.qpus.push_back(q);
        }
        if (!j.contains("links")) fail(ErrorCode::ConfigError, "topology needs a links array");
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorCode::ConfigError, std::string("bad topology JSON: ") + e.what());
    }
    if (t.size() < 2) fail(ErrorCode::ConfigError, "topology needs at least 2 QPUs");
    std::sort(t.qpus.begin(), t.qpus.end(),
              [](const QpuState& a, const QpuState& b) { return a.id < b.id; });
    for (int i = 0; i < t.size(); ++i)
        if (t.qpus[static_cast<size_t>(i)].id != i)
            fail(ErrorCode::ConfigError, "QPU ids must be 0..n-1");
    for (const auto& jl : j.at("links")) {
        int a = jl.at(0).get<int>();
        int b = jl.at(1).get<int>();
        if (a == b || a < 0 || b < 0 || a >= t.size() || b >= t.size())
            fail(ErrorCode::ConfigError, "bad link endpoint");
        if (a > b) std::swap(a, b);
        t.links.emplace_back(a, b);
    }
    if (!is_connected(t.size(), t.links))
        fail(ErrorCode::ConnectivityFailure, "topology file describes a disconnected graph");
    t.finalize();
    return t;
}

std::string topology_to_json(const CloudTopology& t) {
    nlohmann::json j;
    j["qpus"] = nlohmann::json::array();
    for (const auto& q : t.qpus)
        j["qpus"].push_back({{"id", q.id}, {"comp", q.comp_capacity}, {"comm", q.comm_capacity}});
    j["links"] = nlohmann::json::array();
    for (auto [a, b] : t.links) j["links"].push_back({a, b});
    return j.dump(2);
}

CloudTopology topology_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open topology file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return topology_from_json(ss.str());
}

}  // namespace qcloud
