#include "qcloud/benchmarks.hpp"

#include <algorithm>

#include "qcloud/error.hpp"
#include "qcloud/qasm.hpp"

namespace qcloud {

namespace {

void g1(Circuit& c, const std::string& name, int q) {
    Gate g;
    g.kind = GateKind::OneQubit;
    g.name = name;
    g.qubits[0] = q;
    g.num_operands = 1;
    g.seq = static_cast<int>(c.gates.size());
    c.gates.push_back(g);
}

void g2(Circuit& c, const std::string& name, int a, int b) {
    Gate g;
    g.kind = GateKind::TwoQubit;
    g.name = name;
    g.qubits = {a, b};
    g.num_operands = 2;
    g.seq = static_cast<int>(c.gates.size());
    c.gates.push_back(g);
}

void measure_all(Circuit& c) {
    for (int q = 0; q < c.num_qubits; ++q) {
        Gate g;
        g.kind = GateKind::Measure;
        g.name = "measure";
        g.qubits[0] = q;
        g.num_operands = 1;
        g.seq = static_cast<int>(c.gates.size());
        c.gates.push_back(g);
    }
}

// standard 6-CX-free Toffoli decomposition (7 two-qubit gates)
void toffoli(Circuit& c, int a, int b, int t) {
    g1(c, "h", t);
    g2(c, "cx", b, t);
    g1(c, "tdg", t);
    g2(c, "cx", a, t);
    g1(c, "t", t);
    g2(c, "cx", b, t);
    g1(c, "tdg", t);
    g2(c, "cx", a, t);
    g1(c, "t", b);
    g1(c, "t", t);
    g1(c, "h", t);
    g2(c, "cx", a, b);
    g1(c, "t", a);
    g1(c, "tdg", b);
    g2(c, "cx", a, b);
}

// counterfeit-coin style star: every qubit interacts with one hub
Circuit make_cc(int n) {
    Circuit c;
    c.name = "cc_n" + std::to_string(n);
    c.num_qubits = n;
    int hub = n - 1;
    for (int q = 0; q < hub; ++q) g1(c, "h", q);
    for (int q = 0; q < hub; ++q) g2(c, "cx", q, hub);
    g1(c, "h", hub);
    g2(c, "cx", 0, hub);
    for (int q = 0; q < hub; ++q) g1(c, "h", q);
    measure_all(c);
    return c;
}

// ripple-carry adder: MAJ/UMA ladder over interleaved a/b registers
Circuit make_adder(int n) {
    Circuit c;
    c.name = "adder_n" + std::to_string(n);
    c.num_qubits = n;
    int m = (n - 2) / 2;  // bit count; layout: cin, a0, b0, a1, b1, ..., cout
    auto a = [&](int i) { return 1 + 2 * i; };
    auto b = [&](int i) { return 2 + 2 * i; };
    int cin = 0;
    int cout = 2 * m + 1;
    for (int i = 0; i < m; ++i) {
        int carry = i == 0 ? cin : a(i - 1);
        g2(c, "cx", a(i), b(i));
        g2(c, "cx", a(i), carry);
        toffoli(c, carry, b(i), a(i));
    }
    g2(c, "cx", a(m - 1), cout);
    for (int i = m - 1; i >= 0; --i) {
        int carry = i == 0 ? cin : a(i - 1);
        toffoli(c, carry, b(i), a(i));
        g2(c, "cx", a(i), carry);
        g2(c, "cx", carry, b(i));
    }
    measure_all(c);
    return c;
}

// partial-product multiplier: Toffoli between a_i, b_j and accumulator p_{i+j}
Circuit make_multiplier(int n) {
    Circuit c;
    c.name = "multiplier_n" + std::to_string(n);
    c.num_qubits = n;
    int m = n / 3;
    int p = n - 2 * m;
    auto a = [&](int i) { return i; };
    auto b = [&](int j) { return m + j; };
    auto acc = [&](int idx) { return 2 * m + idx % p; };
    for (int q = 0; q < m; ++q) g1(c, "h", a(q));
    for (int q = 0; q < m; ++q) g1(c, "h", b(q));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) toffoli(c, a(i), b(j), acc(i + j));
    measure_all(c);
    return c;
}

// swap-test knn: ancilla-controlled swaps between two feature registers
Circuit make_knn(int n) {
    Circuit c;
    c.name = "knn_n" + std::to_string(n);
    c.num_qubits = n;
    int m = (n - 1) / 2;
    int anc = 0;
    auto a = [&](int i) { return 1 + i; };
    auto b = [&](int i) { return 1 + m + i; };
    g1(c, "h", anc);
    for (int i = 0; i < m; ++i) {
        g1(c, "ry", a(i));
        g1(c, "ry", b(i));
    }
    for (int i = 0; i < m; ++i) {
        g2(c, "cx", b(i), a(i));
        toffoli(c, anc, a(i), b(i));
        g2(c, "cx", b(i), a(i));
    }
    g1(c, "h", anc);
    measure_all(c);
    return c;
}

// layered hardware-efficient entangler
Circuit make_qugan(int n, int layers = 6) {
    Circuit c;
    c.name = "qugan_n" + std::to_string(n);
    c.num_qubits = n;
    for (int l = 0; l < layers; ++l) {
        for (int q = 0; q < n; ++q) g1(c, "ry", q);
        for (int i = 0; i + 1 < n; i += 2) g2(c, "cx", i, i + 1);
        for (int i = 1; i + 1 < n; i += 2) g2(c, "cx", i, i + 1);
    }
    for (int q = 0; q < n; ++q) g1(c, "ry", q);
    measure_all(c);
    return c;
}

Circuit make_swap_test(int n) {
    Circuit c = make_knn(n);
    c.name = "swap_test_n" + std::to_string(n);
    return c;
}

std::pair<std::string, int> split_name(const std::string& name) {
    auto pos = name.rfind("_n");
    if (pos == std::string::npos) return {name, -1};
    try {
        int n = std::stoi(name.substr(pos + 2));
        return {name.substr(0, pos), n};
    } catch (...) {
        return {name, -1};
    }
}

}  // namespace

bool is_known_benchmark(const std::string& name) {
    auto [family, n] = split_name(name);
    if (n < 2) return false;
    static const char* kFamilies[] = {"ghz",  "cat",   "bv",     "ising",      "qft",
                                      "cc",   "adder", "multiplier", "knn",    "qugan",
                                      "swap_test", "qv"};
    return std::any_of(std::begin(kFamilies), std::end(kFamilies),
                       [&](const char* f) { return family == f; });
}

Circuit benchmark_circuit(const std::string& name) {
    auto [family, n] = split_name(name);
    if (n < 2) fail(ErrorCode::BadParams, "benchmark name must end in _n<count>: " + name);
    Circuit c;
    if (family == "ghz")
        c = generate_circuit(CircuitFamily::Ghz, n);
    else if (family == "cat")
        c = generate_circuit(CircuitFamily::Cat, n);
    else if (family == "bv") {
        GenerateParams p;
        // roughly half the data bits set, deterministic pattern
        p.bv_secret.assign(static_cast<size_t>(n - 1), '0');
        for (int i = 0; i < n - 1; i += 2) p.bv_secret[static_cast<size_t>(i)] = '1';
        c = generate_circuit(CircuitFamily::Bv, n, p);
    } else if (family == "ising")
        c = generate_circuit(CircuitFamily::Ising, n);
    else if (family == "qft")
        c = generate_circuit(CircuitFamily::QftCoupling, n);
    else if (family == "cc")
        c = make_cc(n);
    else if (family == "adder")
        c = make_adder(n);
    else if (family == "multiplier" || family == "qv")
        c = make_multiplier(n);
    else if (family == "knn")
        c = make_knn(n);
    else if (family == "qugan")
        c = make_qugan(n);
    else if (family == "swap_test")
        c = make_swap_test(n);
    else
        fail(ErrorCode::UnsupportedFamily, "unknown benchmark '" + name + "'");
    c.name = name;
    return c;
}

std::vector<std::string> workload_mix(const std::string& mix_name) {
    if (mix_name == "mixed")
        return {"knn_n129", "qugan_n111", "qugan_n71",
                "qft_n63",  "multiplier_n45", "multiplier_n75"};
    if (mix_name == "qft") return {"qft_n29", "qft_n63", "qft_n100"};
    if (mix_name == "qugan") return {"qugan_n39", "qugan_n71", "qugan_n111"};
    if (mix_name == "arithmetic")
        return {"adder_n64", "adder_n118", "multiplier_n45", "multiplier_n75"};
    fail(ErrorCode::ConfigError, "unknown workload mix '" + mix_name + "'");
}

}  // namespace qcloud
