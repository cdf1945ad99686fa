#include "qcloud/qasm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qcloud/error.hpp"

namespace qcloud {

namespace {

const std::set<std::string> kOneQubitGates = {
    "h", "x", "y", "z", "s", "t", "sdg", "tdg",
    "rx", "ry", "rz", "u1", "u2", "u3", "id", "u"};

const std::set<std::string> kTwoQubitGates = {"cx", "cz", "swap", "cu1", "crz", "cp"};

struct Lexer {
    std::string_view text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    void advance() {
        if (pos < text.size()) {
            if (text[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void skip_ws_and_comments() {
        while (pos < text.size()) {
            char c = text[pos];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
                while (pos < text.size() && text[pos] != '\n') advance();
            } else {
                break;
            }
        }
    }

    bool eof() {
        skip_ws_and_comments();
        return pos >= text.size();
    }

    char peek() {
        skip_ws_and_comments();
        return pos < text.size() ? text[pos] : '\0';
    }

    [[noreturn]] void error(const std::string& msg) const {
        fail(ErrorCode::SyntaxError,
             "qasm syntax error at line " + std::to_string(line) + ", col " +
                 std::to_string(col) + ": " + msg);
    }

    std::string ident() {
        skip_ws_and_comments();
        if (pos >= text.size() ||
            !(std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            error("expected identifier");
        std::string out;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            out.push_back(text[pos]);
            advance();
        }
        return out;
    }

    long integer() {
        skip_ws_and_comments();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            error("expected integer");
        long v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos] - '0');
            advance();
        }
        return v;
    }

    void expect(char c) {
        skip_ws_and_comments();
        if (pos >= text.size() || text[pos] != c)
            error(std::string("expected '") + c + "'");
        advance();
    }

    bool accept(char c) {
        skip_ws_and_comments();
        if (pos < text.size() && text[pos] == c) {
            advance();
            return true;
        }
        return false;
    }

    // Skips a balanced parenthesized parameter list. Angles are not consumed
    // by any downstream analysis.
    void skip_params() {
        if (!accept('(')) return;
        int depth = 1;
        while (pos < text.size() && depth > 0) {
            if (text[pos] == '(') ++depth;
            if (text[pos] == ')') --depth;
            advance();
        }
        if (depth != 0) error("unbalanced parameter list");
    }

    void skip_string() {
        expect('"');
        while (pos < text.size() && text[pos] != '"') advance();
        expect('"');
    }
};

struct Reg {
    int offset = 0;
    int size = 0;
};

struct Operand {
    std::string reg;
    int index = -1;  // -1 means whole register (broadcast)
};

Operand parse_operand(Lexer& lx) {
    Operand op;
    op.reg = lx.ident();
    if (lx.accept('[')) {
        op.index = static_cast<int>(lx.integer());
        lx.expect(']');
    }
    return op;
}

}  // namespace

Circuit parse_qasm(std::string_view text, std::string name) {
    Lexer lx{text};
    Circuit c;
    c.name = std::move(name);
    c.source = CircuitSource::Parsed;

    std::map<std::string, Reg> qregs;
    std::map<std::string, Reg> cregs;
    int total_qubits = 0;

    auto resolve = [&](const Operand& op) -> int {
        auto it = qregs.find(op.reg);
        if (it == qregs.end())
            fail(ErrorCode::SyntaxError, "unknown quantum register '" + op.reg + "'");
        if (op.index < 0 || op.index >= it->second.size)
            fail(ErrorCode::IndexOutOfRange,
                 "index " + std::to_string(op.index) + " out of range for register '" +
                     op.reg + "[" + std::to_string(it->second.size) + "]'");
        return it->second.offset + op.index;
    };

    bool saw_header = false;
    while (!lx.eof()) {
        std::string tok = lx.ident();
        if (tok == "OPENQASM") {
            lx.integer();
            lx.expect('.');
            lx.integer();
            lx.expect(';');
            saw_header = true;
            continue;
        }
        if (!saw_header) lx.error("missing OPENQASM 2.0 header");
        if (tok == "include") {
            lx.skip_string();
            lx.expect(';');
            continue;
        }
        if (tok == "qreg" || tok == "creg") {
            std::string rname = lx.ident();
            lx.expect('[');
            int size = static_cast<int>(lx.integer());
            lx.expect(']');
            lx.expect(';');
            if (size < 1) lx.error("register size must be >= 1");
            if (tok == "qreg") {
                qregs[rname] = Reg{total_qubits, size};
                total_qubits += size;
            } else {
                cregs[rname] = Reg{0, size};
            }
            continue;
        }
        if (tok == "barrier") {
            // operands irrelevant: barrier is a zero-cost marker
            while (lx.peek() != ';') {
                parse_operand(lx);
                if (!lx.accept(',')) break;
            }
            lx.expect(';');
            Gate g;
            g.kind = GateKind::Barrier;
            g.name = "barrier";
            g.seq = static_cast<int>(c.gates.size());
            c.gates.push_back(g);
            continue;
        }
        if (tok == "measure") {
            Operand src = parse_operand(lx);
            lx.expect('-');
            lx.expect('>');
            parse_operand(lx);
            lx.expect(';');
            std::vector<int> targets;
            if (src.index < 0) {
                auto it = qregs.find(src.reg);
                if (it == qregs.end())
                    fail(ErrorCode::SyntaxError, "unknown register '" + src.reg + "'");
                for (int i = 0; i < it->second.size; ++i)
                    targets.push_back(it->second.offset + i);
            } else {
                targets.push_back(resolve(src));
            }
            for (int q : targets) {
                Gate g;
                g.kind = GateKind::Measure;
                g.name = "measure";
                g.qubits[0] = q;
                g.num_operands = 1;
                g.seq = static_cast<int>(c.gates.size());
                c.gates.push_back(g);
            }
            continue;
        }

        // gate application
        bool one_q = kOneQubitGates.count(tok) > 0;
        bool two_q = kTwoQubitGates.count(tok) > 0;
        if (!one_q && !two_q)
            fail(ErrorCode::UnsupportedGate, "unsupported gate '" + tok + "'");
        lx.skip_params();
        std::vector<Operand> ops;
        ops.push_back(parse_operand(lx));
        while (lx.accept(',')) ops.push_back(parse_operand(lx));
        lx.expect(';');

        if (one_q) {
            if (ops.size() != 1) lx.error("gate '" + tok + "' takes one operand");
            std::vector<int> targets;
            if (ops[0].index < 0) {
                auto it = qregs.find(ops[0].reg);
                if (it == qregs.end())
                    fail(ErrorCode::SyntaxError, "unknown register '" + ops[0].reg + "'");
                for (int i = 0; i < it->second.size; ++i)
                    targets.push_back(it->second.offset + i);
            } else {
                targets.push_back(resolve(ops[0]));
            }
            for (int q : targets) {
                Gate g;
                g.kind = GateKind::OneQubit;
                g.name = tok;
                g.qubits[0] = q;
                g.num_operands = 1;
                g.seq = static_cast<int>(c.gates.size());
                c.gates.push_back(g);
            }
        } else {
            if (ops.size() != 2) lx.error("gate '" + tok + "' takes two operands");
            int a = resolve(ops[0]);
            int b = resolve(ops[1]);
            if (a == b)
                fail(ErrorCode::InvalidOperands,
                     "two-qubit gate '" + tok + "' with duplicate operand q[" +
                         std::to_string(a) + "]");
            Gate g;
            g.kind = GateKind::TwoQubit;
            g.name = tok;
            g.qubits = {a, b};
            g.num_operands = 2;
            g.seq = static_cast<int>(c.gates.size());
            c.gates.push_back(g);
        }
    }

    if (total_qubits < 1) fail(ErrorCode::SyntaxError, "no qreg declared");
    c.num_qubits = total_qubits;
    return c;
}

Circuit parse_qasm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open qasm file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string base = path;
    auto slash = base.find_last_of('/');
    if (slash != std::string::npos) base = base.substr(slash + 1);
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos) base = base.substr(0, dot);
    return parse_qasm(ss.str(), base);
}

std::string write_qasm(const Circuit& c) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "include \"qelib1.inc\";\n";
    out << "qreg q[" << c.num_qubits << "];\n";
    out << "creg m[" << c.num_qubits << "];\n";
    for (const auto& g : c.gates) {
        switch (g.kind) {
        case GateKind::Barrier:
            out << "barrier q;\n";
            break;
        case GateKind::Measure:
            out << "measure q[" << g.qubits[0] << "] -> m[" << g.qubits[0] << "];\n";
            break;
        case GateKind::OneQubit: {
            // parameterized gates need an angle expression to reparse
            bool parameterized = g.name == "rx" || g.name == "ry" || g.name == "rz" ||
                                 g.name == "u1" || g.name == "u2" || g.name == "u3" ||
                                 g.name == "u";
            out << g.name;
            if (parameterized) out << "(0)";
            out << " q[" << g.qubits[0] << "];\n";
            break;
        }
        case GateKind::TwoQubit: {
            bool parameterized = g.name == "cu1" || g.name == "crz" || g.name == "cp";
            out << g.name;
            if (parameterized) out << "(0)";
            out << " q[" << g.qubits[0] << "],q[" << g.qubits[1] << "];\n";
            break;
        }
        }
    }
    return out.str();
}

namespace {

void push1(Circuit& c, const std::string& name, int q) {
    Gate g;
    g.kind = GateKind::OneQubit;
    g.name = name;
    g.qubits[0] = q;
    g.num_operands = 1;
    g.seq = static_cast<int>(c.gates.size());
    c.gates.push_back(g);
}

void push2(Circuit& c, const std::string& name, int a, int b) {
    Gate g;
    g.kind = GateKind::TwoQubit;
    g.name = name;
    g.qubits = {a, b};
    g.num_operands = 2;
    g.seq = static_cast<int>(c.gates.size());
    c.gates.push_back(g);
}

void push_measure_all(Circuit& c) {
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

}  // namespace

Circuit generate_circuit(CircuitFamily family, int n, const GenerateParams& params) {
    if (n < 2) fail(ErrorCode::BadParams, "generator requires n >= 2");
    Circuit c;
    c.num_qubits = n;
    c.source = CircuitSource::Generated;

    switch (family) {
    case CircuitFamily::Ghz:
    case CircuitFamily::Cat: {
        c.name = (family == CircuitFamily::Ghz ? "ghz_n" : "cat_n") + std::to_string(n);
        push1(c, "h", 0);
        for (int i = 0; i + 1 < n; ++i) push2(c, "cx", i, i + 1);
        push_measure_all(c);
        break;
    }
    case CircuitFamily::Bv: {
        c.name = "bv_n" + std::to_string(n);
        std::string secret = params.bv_secret;
        if (secret.empty()) secret.assign(static_cast<size_t>(n - 1), '1');
        if (static_cast<int>(secret.size()) != n - 1)
            fail(ErrorCode::BadParams, "bv secret must have length n-1");
        int anc = n - 1;
        push1(c, "x", anc);
        for (int q = 0; q < n; ++q) push1(c, "h", q);
        for (int i = 0; i < n - 1; ++i) {
            char bit = secret[static_cast<size_t>(i)];
            if (bit == '1')
                push2(c, "cx", i, anc);
            else if (bit != '0')
                fail(ErrorCode::BadParams, "bv secret must be a bitstring");
        }
        for (int q = 0; q < n - 1; ++q) push1(c, "h", q);
        push_measure_all(c);
        break;
    }
    case CircuitFamily::Ising: {
        // Two rounds of nearest-neighbor couplings framed by rotation layers;
        // computational depth 15 regardless of n, matching the benchmark family.
        c.name = "ising_n" + std::to_string(n);
        int layers = params.ising_layers;
        if (layers < 1) fail(ErrorCode::BadParams, "ising requires layers >= 1");
        for (int q = 0; q < n; ++q) push1(c, "h", q);
        for (int l = 0; l < layers; ++l) {
            for (int q = 0; q < n; ++q) push1(c, "rx", q);
            for (int q = 0; q < n; ++q) push1(c, "rz", q);
            for (int i = 0; i + 1 < n; i += 2) push2(c, "cz", i, i + 1);
            for (int q = 0; q < n; ++q) push1(c, "rz", q);
            for (int q = 0; q < n; ++q) push1(c, "rx", q);
            for (int i = 1; i + 1 < n; i += 2) push2(c, "cz", i, i + 1);
            for (int q = 0; q < n; ++q) push1(c, "rz", q);
        }
        push_measure_all(c);
        break;
    }
    case CircuitFamily::QftCoupling: {
        c.name = "qft_n" + std::to_string(n);
        for (int i = 0; i < n; ++i) {
            push1(c, "h", i);
            for (int j = i + 1; j < n; ++j) push2(c, "cp", j, i);
        }
        push_measure_all(c);
        break;
    }
    }
    return c;
}

CircuitFamily family_from_name(const std::string& name) {
    if (name == "ghz") return CircuitFamily::Ghz;
    if (name == "cat") return CircuitFamily::Cat;
    if (name == "bv") return CircuitFamily::Bv;
    if (name == "ising") return CircuitFamily::Ising;
    if (name == "qft_coupling" || name == "qft") return CircuitFamily::QftCoupling;
    fail(ErrorCode::UnsupportedFamily, "unknown circuit family '" + name + "'");
}

}  // namespace qcloud
