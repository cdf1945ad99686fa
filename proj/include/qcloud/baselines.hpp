#pragma once

#include <cstdint>

#include "qcloud/placement.hpp"

namespace qcloud {

struct AnnealConfig {
    double initial_temperature = 0.0;  // <= 0: start at the initial placement cost
    double cooling_rate = 0.97;
    int moves_per_temperature = 200;
    double stop_ratio = 1e-3;  // stop at T0 * stop_ratio
    std::uint64_t seed = 0;
};

struct GaConfig {
    int population = 64;
    int generations = 300;
    double crossover_rate = 0.8;
    double mutation_rate = 0.05;
    int elitism = 2;
    std::uint64_t seed = 0;
};

// Random BFS-connected QPU set meeting capacity; qubits assigned round-robin.
Placement random_placement(const Circuit& c, const CloudTopology& t, std::uint64_t seed);

// Relocate/swap neighborhood over the full qubit->QPU map, Metropolis
// acceptance, energy = sum D_ij * hop distance. Returns the best state seen.
Placement sa_placement(const Circuit& c, const CloudTopology& t, const AnnealConfig& cfg);

// Chromosome = qubit->QPU vector, uniform crossover with capacity repair,
// relocate mutation, elitist selection.
Placement ga_placement(const Circuit& c, const CloudTopology& t, const GaConfig& cfg);

}  // namespace qcloud
