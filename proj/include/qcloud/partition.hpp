#pragma once

#include <cstdint>
#include <vector>

#include "qcloud/analysis.hpp"

namespace qcloud {

struct PartitionResult {
    int k = 1;
    std::vector<int> assignment;  // qubit -> part
    long long cut_weight = 0;
    double imbalance = 0.0;
    std::vector<int> part_sizes;
};

// Multilevel k-way partitioning of the interaction graph: heavy-edge-matching
// coarsening, greedy region-growing bisection, Fiduccia-Mattheyses boundary
// refinement, recursive bisection. Max part size <= ceil((1+alpha) * n / k).
// Deterministic for a fixed (graph, k, alpha, seed).
PartitionResult graph_partition(const InteractionGraph& g, int k, double alpha,
                                std::uint64_t seed = 0);

// Recomputes cut weight and balance from scratch.
bool verify_partition(const InteractionGraph& g, const PartitionResult& r);

long long cut_weight_of(const InteractionGraph& g, const std::vector<int>& assignment);

}  // namespace qcloud
