#pragma once

#include <string>
#include <string_view>

#include "qcloud/circuit.hpp"

namespace qcloud {

// Parses the OpenQASM 2.0 subset used by the benchmark corpus.
// Supported statements: qreg/creg declarations, the standard 1q gates
// (h x y z s t sdg tdg rx ry rz u1 u2 u3), 2q gates (cx cz swap cu1 crz cp),
// measure and barrier. Gate parameters are parsed and discarded.
Circuit parse_qasm(std::string_view text, std::string name = "circuit");

Circuit parse_qasm_file(const std::string& path);

// Serializes a circuit back to the same QASM subset; reparsing the output
// yields an identical gate list.
std::string write_qasm(const Circuit& c);

enum class CircuitFamily { Ghz, Cat, Bv, Ising, QftCoupling };

struct GenerateParams {
    std::string bv_secret;  // bitstring, length n-1; ones become CNOTs
    int ising_layers = 2;
};

Circuit generate_circuit(CircuitFamily family, int n, const GenerateParams& params = {});

CircuitFamily family_from_name(const std::string& name);

}  // namespace qcloud
