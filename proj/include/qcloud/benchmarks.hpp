#pragma once

#include <string>
#include <vector>

#include "qcloud/circuit.hpp"

namespace qcloud {

// Synthetic circuits for the named benchmark workloads (ghz_n127, adder_n64,
// multiplier_n75, ...). Families with exact generators (ghz, cat, bv, ising,
// qft) match the published gate counts; the remaining names are structural
// stand-ins that reproduce the interaction topology of the originals
// (star-shaped cc, ripple-carry adder chains, partial-product multipliers,
// swap-test knn, layered entangler qugan).
Circuit benchmark_circuit(const std::string& name);

bool is_known_benchmark(const std::string& name);

// Named workload mixes used by the multi-tenant evaluation.
std::vector<std::string> workload_mix(const std::string& mix_name);

}  // namespace qcloud
