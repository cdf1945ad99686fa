#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <random>

#include "qcloud/analysis.hpp"
#include "qcloud/error.hpp"
#include "qcloud/qasm.hpp"

using namespace qcloud;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::SyntaxError;
}

const char* kHeader = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

}  // namespace

TEST_CASE("two-statement program") {
    Circuit c = parse_qasm(std::string(kHeader) + "qreg q[2]; h q[0]; cx q[0],q[1];");
    CHECK(c.num_qubits == 2);
    REQUIRE(c.gates.size() == 2);
    CHECK(c.gates[0].kind == GateKind::OneQubit);
    CHECK(c.gates[0].name == "h");
    CHECK(c.gates[0].qubits[0] == 0);
    CHECK(c.gates[1].kind == GateKind::TwoQubit);
    CHECK(c.gates[1].qubits[0] == 0);
    CHECK(c.gates[1].qubits[1] == 1);
}

TEST_CASE("duplicate operand is rejected") {
    ErrorCode code =
        code_of([] { parse_qasm(std::string(kHeader) + "qreg q[1]; cx q[0],q[0];"); });
    CHECK(code == ErrorCode::InvalidOperands);
}

TEST_CASE("parse errors carry codes") {
    CHECK(code_of([] { parse_qasm(std::string(kHeader) + "qreg q[2]; h q[5];"); }) ==
          ErrorCode::IndexOutOfRange);
    CHECK(code_of([] { parse_qasm(std::string(kHeader) + "qreg q[2]; frobnicate q[0];"); }) ==
          ErrorCode::UnsupportedGate);
    CHECK(code_of([] { parse_qasm(std::string(kHeader) + "qreg q[2]; h q[0"); }) ==
          ErrorCode::SyntaxError);
}

TEST_CASE("broadcast applies a 1q gate to every qubit") {
    Circuit c = parse_qasm(std::string(kHeader) + "qreg q[3]; h q;");
    REQUIRE(c.gates.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(c.gates[static_cast<size_t>(i)].qubits[0] == i);
}

TEST_CASE("measure and barrier are non-computational") {
    Circuit c = parse_qasm(std::string(kHeader) +
                           "qreg q[2]; creg c[2]; h q[0]; barrier q; measure q -> c;");
    CHECK(c.has_measure());
    int computational = 0;
    for (const auto& g : c.gates)
        if (g.is_computational()) ++computational;
    CHECK(computational == 1);
}

TEST_CASE("generated ghz_n127 matches published characteristics") {
    Circuit c = generate_circuit(CircuitFamily::Ghz, 127);
    CHECK(c.num_qubits == 127);
    CHECK(c.two_qubit_count() == 126);
    CHECK(circuit_depth(c) == 128);
}

TEST_CASE("generated cat_n65 matches published characteristics") {
    Circuit c = generate_circuit(CircuitFamily::Cat, 65);
    CHECK(c.num_qubits == 65);
    CHECK(c.two_qubit_count() == 64);
    CHECK(circuit_depth(c) == 66);
}

TEST_CASE("generated ising_n34 matches published characteristics") {
    Circuit c = generate_circuit(CircuitFamily::Ising, 34);
    CHECK(c.num_qubits == 34);
    CHECK(c.two_qubit_count() == 66);
    CHECK(circuit_depth(c) == 16);
}

TEST_CASE("bv generator follows its secret") {
    GenerateParams gp;
    gp.bv_secret = "1011";
    Circuit c = generate_circuit(CircuitFamily::Bv, 5, gp);
    CHECK(c.num_qubits == 5);
    CHECK(c.two_qubit_count() == 3);
}

TEST_CASE("round trip through write_qasm preserves the gate list") {
    std::mt19937_64 rng(42);
    std::vector<Circuit> cases = {
        generate_circuit(CircuitFamily::Ghz, 12),
        generate_circuit(CircuitFamily::Ising, 9),
        generate_circuit(CircuitFamily::QftCoupling, 7),
        parse_qasm(std::string(kHeader) +
                   "qreg q[4]; creg c[4]; h q; cx q[0],q[2]; rz(0.5) q[1]; swap q[2],q[3]; "
                   "measure q -> c;"),
    };
    for (const Circuit& c : cases) {
        Circuit back = parse_qasm(write_qasm(c), c.name);
        REQUIRE(back.num_qubits == c.num_qubits);
        REQUIRE(back.gates.size() == c.gates.size());
        for (size_t i = 0; i < c.gates.size(); ++i) {
            CHECK(back.gates[i].kind == c.gates[i].kind);
            CHECK(back.gates[i].name == c.gates[i].name);
            CHECK(back.gates[i].qubits == c.gates[i].qubits);
        }
    }
}

TEST_CASE("parse_qasm_file reads from disk") {
    std::string path = "tmp_roundtrip.qasm";
    {
        std::ofstream out(path);
        out << write_qasm(generate_circuit(CircuitFamily::Cat, 8));
    }
    Circuit c = parse_qasm_file(path);
    CHECK(c.num_qubits == 8);
    CHECK(c.two_qubit_count() == 7);
    std::remove(path.c_str());
    CHECK(code_of([] { parse_qasm_file("does_not_exist.qasm"); }) == ErrorCode::ConfigError);
}

TEST_CASE("multiple quantum registers are flattened in order") {
    Circuit c = parse_qasm(std::string(kHeader) + "qreg a[2]; qreg b[2]; cx a[1],b[0];");
    CHECK(c.num_qubits == 4);
    REQUIRE(c.gates.size() == 1);
    CHECK(c.gates[0].qubits[0] == 1);
    CHECK(c.gates[0].qubits[1] == 2);
}
