#pragma once

// Gate-list circuit IR. Kinds are fixed: Clifford generators, the two
// three-qubit swaps, and first-class fanout (multi-target CX). Rotations are
// deliberately absent; angles only ever appear through catalyst states.

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace psik {

enum class GateKind { X, Z, H, S, CX, CZ, Swap, CCX, CSwap, Fanout, Unfanout };

inline const char* kind_name(GateKind k) {
    switch (k) {
        case GateKind::X: return "x";
        case GateKind::Z: return "z";
        case GateKind::H: return "h";
        case GateKind::S: return "s";
        case GateKind::CX: return "cx";
        case GateKind::CZ: return "cz";
        case GateKind::Swap: return "swap";
        case GateKind::CCX: return "ccx";
        case GateKind::CSwap: return "cswap";
        case GateKind::Fanout: return "fanout";
        case GateKind::Unfanout: return "unfanout";
    }
    return "?";
}

// Fixed operand count, or -1 for the variadic fanout kinds.
inline int kind_arity(GateKind k) {
    switch (k) {
        case GateKind::X:
        case GateKind::Z:
        case GateKind::H:
        case GateKind::S: return 1;
        case GateKind::CX:
        case GateKind::CZ:
        case GateKind::Swap: return 2;
        case GateKind::CCX:
        case GateKind::CSwap: return 3;
        default: return -1;
    }
}

inline bool is_toffoli_like(GateKind k) { return k == GateKind::CCX || k == GateKind::CSwap; }

struct Gate {
    GateKind kind;
    std::vector<std::uint32_t> qubits;  // fanout: source first, then targets

    bool operator==(const Gate&) const = default;
};

inline Gate g1(GateKind k, std::uint32_t q) { return {k, {q}}; }
inline Gate gate_cx(std::uint32_t c, std::uint32_t t) { return {GateKind::CX, {c, t}}; }
inline Gate gate_swap(std::uint32_t a, std::uint32_t b) { return {GateKind::Swap, {a, b}}; }
inline Gate gate_ccx(std::uint32_t c1, std::uint32_t c2, std::uint32_t t) { return {GateKind::CCX, {c1, c2, t}}; }
inline Gate gate_cswap(std::uint32_t c, std::uint32_t a, std::uint32_t b) { return {GateKind::CSwap, {c, a, b}}; }

// Registers are half-open index ranges [lo, hi); the text form prints them
// inclusive. Empty registers are simply left out of the map.
using Layout = std::map<std::string, std::pair<std::uint32_t, std::uint32_t>>;

struct Circuit {
    std::uint32_t num_qubits = 0;
    std::vector<Gate> gates;
    Layout layout;

    bool operator==(const Circuit&) const = default;
};

// Every violation, not just the first; empty result means well formed.
inline std::vector<std::string> validate(const Circuit& c) {
    std::vector<std::string> errors;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        std::string where = "gate " + std::to_string(i) + " (" + kind_name(g.kind) + "): ";
        int arity = kind_arity(g.kind);
        if (arity >= 0 && static_cast<int>(g.qubits.size()) != arity)
            errors.push_back(where + "expected " + std::to_string(arity) + " operands, got " +
                             std::to_string(g.qubits.size()));
        if (arity < 0 && g.qubits.empty())
            errors.push_back(where + "needs at least a source operand");
        for (std::uint32_t q : g.qubits)
            if (q >= c.num_qubits)
                errors.push_back(where + "operand " + std::to_string(q) + " out of range");
        auto sorted = g.qubits;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t j = 1; j < sorted.size(); ++j)
            if (sorted[j] == sorted[j - 1])
                errors.push_back(where + "duplicate operand " + std::to_string(sorted[j]));
    }
    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, std::string>> ranges;
    for (const auto& [name, range] : c.layout) {
        if (range.first >= range.second || range.second > c.num_qubits) {
            errors.push_back("layout " + name + ": bad range");
            continue;
        }
        ranges.push_back({range, name});
    }
    std::sort(ranges.begin(), ranges.end());
    for (std::size_t i = 1; i < ranges.size(); ++i)
        if (ranges[i].first.first < ranges[i - 1].first.second)
            errors.push_back("layout " + ranges[i].second + " overlaps " + ranges[i - 1].second);
    return errors;
}

inline void require_valid(const Circuit& c, const char* who) {
    auto errors = validate(c);
    if (!errors.empty()) throw std::invalid_argument(std::string(who) + ": invalid circuit: " + errors.front());
}

// Concatenation. The left layout wins when both sides carry one.
inline Circuit compose(const Circuit& a, const Circuit& b) {
    if (a.num_qubits != b.num_qubits) throw std::invalid_argument("compose: qubit count mismatch");
    Circuit out = a;
    out.gates.insert(out.gates.end(), b.gates.begin(), b.gates.end());
    if (out.layout.empty()) out.layout = b.layout;
    return out;
}

// Reversed gate order with each gate inverted. Everything in the kind set is
// self-inverse except S (inverted as S^3) and the fanout pair, which swap.
inline Circuit inverse(const Circuit& c) {
    Circuit out;
    out.num_qubits = c.num_qubits;
    out.layout = c.layout;
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::Fanout) g.kind = GateKind::Unfanout;
        else if (g.kind == GateKind::Unfanout) g.kind = GateKind::Fanout;
        if (g.kind == GateKind::S) {
            out.gates.push_back(g);
            out.gates.push_back(g);
        }
        out.gates.push_back(g);
    }
    return out;
}

// Fanout lowered to a balanced CX doubling tree: CX-depth ceil(log2 m) for m
// touched qubits. Matches the fanout gate on basis states whose targets start
// in |0>. Unfanout lowers to the mirror tree.
inline Circuit lower_fanout(const Circuit& c) {
    Circuit out;
    out.num_qubits = c.num_qubits;
    out.layout = c.layout;
    for (const Gate& g : c.gates) {
        if (g.kind != GateKind::Fanout && g.kind != GateKind::Unfanout) {
            out.gates.push_back(g);
            continue;
        }
        std::vector<Gate> tree;
        std::size_t have = 1;
        while (have < g.qubits.size()) {
            std::size_t add = std::min(have, g.qubits.size() - have);
            for (std::size_t i = 0; i < add; ++i)
                tree.push_back(gate_cx(g.qubits[i], g.qubits[have + i]));
            have += add;
        }
        if (g.kind == GateKind::Unfanout) std::reverse(tree.begin(), tree.end());
        out.gates.insert(out.gates.end(), tree.begin(), tree.end());
    }
    return out;
}

// CSWAP(c, a, b) = CX(b, a) . CCX(c, a, b) . CX(b, a): same unitary, one CCX.
inline Circuit expand_cswap(const Circuit& c) {
    Circuit out;
    out.num_qubits = c.num_qubits;
    out.layout = c.layout;
    for (const Gate& g : c.gates) {
        if (g.kind != GateKind::CSwap) {
            out.gates.push_back(g);
            continue;
        }
        out.gates.push_back(gate_cx(g.qubits[2], g.qubits[1]));
        out.gates.push_back(gate_ccx(g.qubits[0], g.qubits[1], g.qubits[2]));
        out.gates.push_back(gate_cx(g.qubits[2], g.qubits[1]));
    }
    return out;
}

struct DepthReport {
    int total_depth = 0;
    int toffoli_depth = 0;
    int clifford_depth = 0;
    std::map<std::string, std::size_t> gate_counts;
};

namespace detail {

// Greedy as-soon-as-possible layers over all gates. Returns per-gate layer
// numbers starting at 1.
inline std::vector<int> asap_layers(const Circuit& c, int* depth_out) {
    std::vector<int> frontier(c.num_qubits, 0);
    std::vector<int> layer(c.gates.size(), 0);
    int depth = 0;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        int m = 0;
        for (std::uint32_t q : c.gates[i].qubits) m = std::max(m, frontier[q]);
        layer[i] = m + 1;
        depth = std::max(depth, m + 1);
        for (std::uint32_t q : c.gates[i].qubits) frontier[q] = m + 1;
    }
    if (depth_out) *depth_out = depth;
    return layer;
}

// Greedy staging of the CCX/CSWAP gates alone. Clifford gates propagate the
// stage frontier across their operands but take no stage of their own, so
// the result counts exactly the layers that contain a Toffoli-class gate.
inline int toffoli_stages(const Circuit& c) {
    std::vector<int> frontier(c.num_qubits, 0);
    int depth = 0;
    for (const Gate& g : c.gates) {
        int m = 0;
        for (std::uint32_t q : g.qubits) m = std::max(m, frontier[q]);
        if (is_toffoli_like(g.kind)) ++m;
        depth = std::max(depth, m);
        for (std::uint32_t q : g.qubits) frontier[q] = m;
    }
    return depth;
}

}  // namespace detail

// Depth accounting. total_depth is the greedy ASAP layer count over all
// gates; toffoli_depth counts CCX/CSWAP stages (Cliffords, fanout included,
// do not add stages); clifford_depth counts the all-Clifford layers after
// fanout is lowered to CX trees.
inline DepthReport depth_metrics(const Circuit& c) {
    require_valid(c, "depth_metrics");
    DepthReport r;
    detail::asap_layers(c, &r.total_depth);
    r.toffoli_depth = detail::toffoli_stages(c);
    for (const Gate& g : c.gates) ++r.gate_counts[kind_name(g.kind)];

    Circuit lowered = lower_fanout(c);
    int lowered_depth = 0;
    auto layers = detail::asap_layers(lowered, &lowered_depth);
    std::vector<bool> has_toffoli(lowered_depth + 1, false);
    std::vector<bool> occupied(lowered_depth + 1, false);
    for (std::size_t i = 0; i < lowered.gates.size(); ++i) {
        occupied[layers[i]] = true;
        if (is_toffoli_like(lowered.gates[i].kind)) has_toffoli[layers[i]] = true;
    }
    for (int l = 1; l <= lowered_depth; ++l)
        if (occupied[l] && !has_toffoli[l]) ++r.clifford_depth;
    return r;
}

// Toffoli stages when at most kappa CCX/CSWAP gates may share a stage.
inline int kappa_toffoli_depth(const Circuit& c, int kappa) {
    if (kappa < 1) throw std::invalid_argument("kappa_toffoli_depth: kappa must be >= 1");
    require_valid(c, "kappa_toffoli_depth");
    std::vector<int> frontier(c.num_qubits, 0);
    std::map<int, int> occupancy;
    int depth = 0;
    for (const Gate& g : c.gates) {
        int m = 0;
        for (std::uint32_t q : g.qubits) m = std::max(m, frontier[q]);
        if (is_toffoli_like(g.kind)) {
            int s = m + 1;
            while (occupancy[s] >= kappa) ++s;
            ++occupancy[s];
            m = s;
            depth = std::max(depth, s);
        }
        for (std::uint32_t q : g.qubits) frontier[q] = m;
    }
    return depth;
}

// --- text form --------------------------------------------------------------
//
//   qubits 6
//   # layout control 0..0
//   fanout 0 1 2
//   ccx 0 5 3
//
// One gate per line, lowercase kinds, operands space separated. Layout lines
// are optional comments; other comment lines are ignored on input.

inline std::string to_text(const Circuit& c) {
    std::ostringstream out;
    out << "qubits " << c.num_qubits << "\n";
    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, std::string>> regs;
    for (const auto& [name, range] : c.layout) regs.push_back({range, name});
    std::sort(regs.begin(), regs.end());
    for (const auto& [range, name] : regs)
        out << "# layout " << name << " " << range.first << ".." << (range.second - 1) << "\n";
    for (const Gate& g : c.gates) {
        out << kind_name(g.kind);
        for (std::uint32_t q : g.qubits) out << " " << q;
        out << "\n";
    }
    return out.str();
}

inline Circuit from_text(const std::string& text) {
    auto fail = [](int line, const std::string& msg) {
        throw std::runtime_error("line " + std::to_string(line) + ": " + msg);
    };
    static const std::map<std::string, GateKind> kinds = {
        {"x", GateKind::X},         {"z", GateKind::Z},     {"h", GateKind::H},
        {"s", GateKind::S},         {"cx", GateKind::CX},   {"cz", GateKind::CZ},
        {"swap", GateKind::Swap},   {"ccx", GateKind::CCX}, {"cswap", GateKind::CSwap},
        {"fanout", GateKind::Fanout}, {"unfanout", GateKind::Unfanout}};

    Circuit c;
    bool saw_header = false;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::istringstream line(raw);
        std::string tok;
        if (!(line >> tok)) continue;  // blank
        if (tok == "#") {
            std::string marker;
            if (line >> marker && marker == "layout") {
                std::string name, range;
                if (!(line >> name >> range)) fail(line_no, "malformed layout comment");
                auto dots = range.find("..");
                if (dots == std::string::npos) fail(line_no, "layout range must be lo..hi");
                try {
                    std::uint32_t lo = std::stoul(range.substr(0, dots));
                    std::uint32_t hi = std::stoul(range.substr(dots + 2));
                    c.layout[name] = {lo, hi + 1};
                } catch (const std::exception&) {
                    fail(line_no, "layout range must be lo..hi");
                }
            }
            continue;
        }
        if (!saw_header) {
            if (tok != "qubits") fail(line_no, "expected 'qubits N' header");
            unsigned long nq;
            if (!(line >> nq)) fail(line_no, "expected qubit count after 'qubits'");
            c.num_qubits = static_cast<std::uint32_t>(nq);
            saw_header = true;
            continue;
        }
        auto it = kinds.find(tok);
        if (it == kinds.end()) fail(line_no, "unknown gate kind '" + tok + "'");
        Gate g{it->second, {}};
        long long q;
        while (line >> q) {
            if (q < 0) fail(line_no, "negative qubit index");
            g.qubits.push_back(static_cast<std::uint32_t>(q));
        }
        if (!line.eof()) fail(line_no, "trailing junk after operands");
        int arity = kind_arity(g.kind);
        if (arity >= 0 && static_cast<int>(g.qubits.size()) != arity)
            fail(line_no, std::string("expected ") + std::to_string(arity) + " operands for " + tok +
                              ", got " + std::to_string(g.qubits.size()));
        if (arity < 0 && g.qubits.empty()) fail(line_no, "fanout needs at least a source operand");
        c.gates.push_back(std::move(g));
    }
    if (!saw_header) throw std::runtime_error("line 1: missing 'qubits N' header");
    auto errors = validate(c);
    if (!errors.empty()) throw std::runtime_error("parsed circuit invalid: " + errors.front());
    return c;
}

}  // namespace psik
