#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qcloud {

struct QpuState {
    int id = 0;
    int comp_capacity = 0;
    int comp_free = 0;
    int comm_capacity = 0;
    int comm_free = 0;
};

struct CloudTopology {
    std::vector<QpuState> qpus;
    std::vector<std::pair<int, int>> links;       // undirected, (a < b)
    std::vector<std::vector<int>> neighbors;      // sorted adjacency
    std::vector<std::vector<int>> distance;       // BFS hop counts

    int size() const { return static_cast<int>(qpus.size()); }
    int dist(int a, int b) const { return distance[static_cast<size_t>(a)][static_cast<size_t>(b)]; }

    int total_comp_free() const;
    int max_comp_free() const;
    int max_comp_capacity() const;

    void reserve_comp(int qpu, int qubits);
    void release_comp(int qpu, int qubits);
    void reserve_comm(int qpu, int qubits);
    void release_comm(int qpu, int qubits);

    // Recomputes adjacency and the all-pairs hop matrix from `links`.
    void finalize();
};

// max_degree <= 0 leaves the per-QPU link count uncapped.
CloudTopology random_topology(int num_qpus, double edge_prob, int comp_qubits,
                              int comm_qubits, std::uint64_t seed, int max_degree = 0);

CloudTopology topology_from_json(const std::string& json_text);
std::string topology_to_json(const CloudTopology& t);
CloudTopology topology_from_file(const std::string& path);

bool is_connected(int n, const std::vector<std::pair<int, int>>& links);

}  // namespace qcloud
