#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qcloud {

enum class GateKind {
    OneQubit,
    TwoQubit,
    Measure,  // zero-cost marker, excluded from the dependency DAG
    Barrier,  // zero-cost marker, no operands recorded
};

struct Gate {
    GateKind kind = GateKind::OneQubit;
    std::string name;
    std::array<int, 2> qubits{-1, -1};
    int num_operands = 0;
    int seq = 0;  // ordinal position in program order

    bool is_computational() const {
        return kind == GateKind::OneQubit || kind == GateKind::TwoQubit;
    }
};

enum class CircuitSource { Parsed, Generated };

struct Circuit {
    std::string name;
    int num_qubits = 0;
    std::vector<Gate> gates;
    CircuitSource source = CircuitSource::Generated;

    int two_qubit_count() const {
        int c = 0;
        for (const auto& g : gates)
            if (g.kind == GateKind::TwoQubit) ++c;
        return c;
    }

    bool has_measure() const {
        for (const auto& g : gates)
            if (g.kind == GateKind::Measure) return true;
        return false;
    }
};

}  // namespace qcloud
