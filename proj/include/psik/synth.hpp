#pragma once

// Circuit synthesis for the multiply-by-alpha step of a primitive field and
// for phase-kickback networks built from it. The controlled step costs
// (n-1) + |q_set| Toffoli-class gates at Toffoli depth exactly 3, independent
// of n: one CCX stage for the companion matrix's CX fan, two CSWAP stages for
// its cyclic shift written as two half reversals.

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psik/circuit.hpp"
#include "psik/gf2n.hpp"
#include "psik/numtheory.hpp"

namespace psik {

enum class ShiftStyle {
    rev_network,     // two SWAP layers (reverse all, reverse tail), no ancillas
    ancilla_ladder,  // two SWAP layers through n ancillas
};

struct ResourceReport {
    int n = 0;
    int toffoli_count = 0;
    int toffoli_depth = 0;
    int clifford_depth = 0;
    int qubits_total = 0;
    int ancillas = 0;
    std::optional<int> kappa;
};

struct SynthesisResult {
    Circuit circuit;
    ResourceReport report;

    const Layout& layout() const { return circuit.layout; }
};

// Decomposition of one bit of a rotation exponent b into catalyst kickbacks:
// with gcd(a, N) = 1 and m = b * a^-1 mod N, kicking back once against each
// catalyst with index a * 2^t for t in bits(m) accumulates exactly phase
// e^(2 pi i b / N).
struct KickbackPlan {
    u64 a = 1;
    u64 b = 0;
    u64 m = 0;
    u64 modulus = 0;
    std::vector<int> bits;  // ascending positions of set bits of m
};

inline KickbackPlan select_kickbacks(u64 b, u64 a, u64 modulus) {
    if (modulus < 3) throw std::invalid_argument("select_kickbacks: modulus must be 2^n - 1 for n >= 2");
    if (b >= modulus) throw std::invalid_argument("select_kickbacks: b out of range");
    KickbackPlan plan;
    plan.a = a % modulus;
    plan.b = b;
    plan.modulus = modulus;
    plan.m = mulmod(b, mod_inverse(a, modulus), modulus);  // throws when gcd(a, N) != 1
    for (int t = 0; t < 64; ++t)
        if ((plan.m >> t) & 1) plan.bits.push_back(t);
    return plan;
}

struct AngleFit {
    u64 b = 0;
    double err = 0;  // |theta - 2 pi b / N| folded into [0, pi]
};

// Nearest representable angle on the 2 pi / (2^n - 1) grid; the error is at
// most half a grid step, pi / (2^n - 1).
inline AngleFit approximate_angle(double theta, int n) {
    detail::check_degree(n);
    const u64 modulus = low_mask(n);
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    long double turns = (long double)theta / two_pi;
    turns -= std::floor(turns);
    if (turns < 0) turns += 1;  // floor rounding can leave a negative sliver
    u64 b = static_cast<u64>(turns * (long double)modulus + 0.5L) % modulus;
    long double diff = std::fmod((long double)theta - two_pi * (long double)b / (long double)modulus, two_pi);
    if (diff > two_pi / 2) diff -= two_pi;
    if (diff < -two_pi / 2) diff += two_pi;
    return {b, static_cast<double>(std::fabs((double)diff))};
}

// The plain (uncontrolled) step: CX fan from qubit n-1 onto the q_set
// targets, then the cyclic shift. With rev_network the shift is two SWAP
// layers on the data qubits alone; with ancilla_ladder it swaps through a
// zeroed n-qubit ancilla register, landing each value one slot over.
inline Circuit build_lfsr_step(const FieldPoly& f, ShiftStyle style = ShiftStyle::rev_network) {
    const int n = f.n;
    Circuit c;
    c.num_qubits = style == ShiftStyle::rev_network ? n : 2 * n;
    c.layout["catalyst"] = {0u, static_cast<std::uint32_t>(n)};
    if (style == ShiftStyle::ancilla_ladder)
        c.layout["shift_ancilla"] = {static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(2 * n)};

    for (int q : f.q_set) c.gates.push_back(gate_cx(n - 1, q));
    if (style == ShiftStyle::rev_network) {
        for (int i = 0; i < n - 1 - i; ++i) c.gates.push_back(gate_swap(i, n - 1 - i));
        for (int i = 1; i < n - i; ++i) c.gates.push_back(gate_swap(i, n - i));
    } else {
        for (int i = 0; i < n; ++i) c.gates.push_back(gate_swap(i, n + i));
        for (int i = 0; i < n; ++i) c.gates.push_back(gate_swap(n + i, (i + 1) % n));
    }
    return c;
}

namespace detail {

// Emits one controlled step on the given registers. ctrl_copies must provide
// max(floor(n/2), |q_set|) distinct control-valued qubits; cat is the data
// register; qf supplies |q_set| - 1 zeroed qubits (unused when |q_set| < 2),
// and shift_anc, when present, n zeroed qubits for the ladder style.
inline void emit_controlled_step(Circuit& c, const FieldPoly& f,
                                 const std::vector<std::uint32_t>& ctrl_copies,
                                 std::uint32_t cat, std::uint32_t qf,
                                 std::optional<std::uint32_t> shift_anc) {
    const int n = f.n;
    const int q = static_cast<int>(f.q_set.size());
    const std::uint32_t top = cat + n - 1;  // data qubit n-1

    if (q > 1) {
        Gate fan{GateKind::Fanout, {top}};
        for (int i = 0; i < q - 1; ++i) fan.qubits.push_back(qf + i);
        c.gates.push_back(fan);
    }
    for (int i = 0; i < q; ++i) {
        std::uint32_t source_copy = i == 0 ? top : qf + (i - 1);
        c.gates.push_back(gate_ccx(ctrl_copies[i], source_copy, cat + f.q_set[i]));
    }
    if (q > 1) {
        Gate unfan{GateKind::Unfanout, {top}};
        for (int i = 0; i < q - 1; ++i) unfan.qubits.push_back(qf + i);
        c.gates.push_back(unfan);
    }

    if (!shift_anc) {
        int used = 0;
        for (int i = 0; i < n - 1 - i; ++i)
            c.gates.push_back(gate_cswap(ctrl_copies[used++], cat + i, cat + (n - 1 - i)));
        used = 0;
        for (int i = 1; i < n - i; ++i)
            c.gates.push_back(gate_cswap(ctrl_copies[used++], cat + i, cat + (n - i)));
    } else {
        for (int i = 0; i < n; ++i)
            c.gates.push_back(gate_cswap(ctrl_copies[i % ctrl_copies.size()], cat + i, *shift_anc + i));
        for (int i = 0; i < n; ++i)
            c.gates.push_back(gate_cswap(ctrl_copies[i % ctrl_copies.size()], *shift_anc + i, cat + (i + 1) % n));
    }
}

// Reports are quoted for the Clifford+Toffoli form of the circuit, i.e.
// after expand_cswap; the stage metric makes that the same Toffoli depth as
// the emitted circuit.
inline ResourceReport measure_report(const Circuit& c, int n, int data_qubits) {
    DepthReport d = depth_metrics(expand_cswap(c));
    ResourceReport r;
    r.n = n;
    r.toffoli_count = static_cast<int>(d.gate_counts.count("ccx") ? d.gate_counts.at("ccx") : 0);
    r.toffoli_depth = d.toffoli_depth;
    r.clifford_depth = d.clifford_depth;
    r.qubits_total = static_cast<int>(c.num_qubits);
    r.ancillas = r.qubits_total - data_qubits;
    return r;
}

}  // namespace detail

// Controlled step: fan the control out to n-1 copies, run the CCX fan and the
// two controlled-shift CSWAP layers with per-gate control copies, then unfan.
// Copies are reused across the three stages, so Toffoli depth is 3 and the
// Toffoli count is (n-1) + |q_set|.
inline SynthesisResult build_controlled_lfsr_step(const FieldPoly& f,
                                                  ShiftStyle style = ShiftStyle::rev_network) {
    const int n = f.n;
    const int q = static_cast<int>(f.q_set.size());
    Circuit c;
    std::uint32_t cat = static_cast<std::uint32_t>(n);  // control 0, copies 1..n-1
    std::uint32_t qf = cat + n;
    std::uint32_t next = qf + (q > 1 ? q - 1 : 0);
    std::optional<std::uint32_t> shift_anc;
    if (style == ShiftStyle::ancilla_ladder) {
        shift_anc = next;
        next += n;
    }
    c.num_qubits = next;
    c.layout["control"] = {0u, 1u};
    if (n > 1) c.layout["control_fanout"] = {1u, static_cast<std::uint32_t>(n)};
    c.layout["catalyst"] = {cat, cat + n};
    if (q > 1) c.layout["qf_fanout"] = {qf, qf + (q - 1)};
    if (shift_anc) c.layout["shift_ancilla"] = {*shift_anc, *shift_anc + n};

    std::vector<std::uint32_t> copies(n);
    for (int i = 0; i < n; ++i) copies[i] = i;  // copy 0 is the control itself

    Gate fan{GateKind::Fanout, {0u}};
    for (int i = 1; i < n; ++i) fan.qubits.push_back(i);
    if (n > 1) c.gates.push_back(fan);
    detail::emit_controlled_step(c, f, copies, cat, qf, shift_anc);
    if (n > 1) {
        Gate unfan = fan;
        unfan.kind = GateKind::Unfanout;
        c.gates.push_back(unfan);
    }

    SynthesisResult out{c, detail::measure_report(c, n, n + 1)};
    return out;
}

// Kickback network for a full rotation exponent: one controlled step block
// per set bit of the plan, block t acting on a catalyst register meant to
// hold the index-(a 2^t) catalyst. parallel gives every block private
// control copies under a single control fanout (Toffoli depth stays 3);
// sequential shares one copy set across blocks (Toffoli depth 3 |bits|).
inline SynthesisResult build_kickback_network(const FieldPoly& f, const KickbackPlan& plan,
                                              bool parallel = true) {
    if (plan.modulus != f.order())
        throw std::invalid_argument("build_kickback_network: plan modulus does not match field");
    const int n = f.n;
    const int q = static_cast<int>(f.q_set.size());
    const int blocks = static_cast<int>(plan.bits.size());

    Circuit c;
    c.layout["control"] = {0u, 1u};
    if (blocks == 0) {
        c.num_qubits = 1;
        ResourceReport r;
        r.n = n;
        r.qubits_total = 1;
        return {c, r};
    }

    const int copy_count = parallel ? blocks * n : n;
    std::uint32_t cat0 = static_cast<std::uint32_t>(copy_count);
    std::uint32_t qf0 = cat0 + static_cast<std::uint32_t>(blocks * n);
    const int qf_total = q > 1 ? (parallel ? blocks * (q - 1) : q - 1) : 0;
    c.num_qubits = qf0 + static_cast<std::uint32_t>(qf_total);

    if (copy_count > 1) c.layout["control_fanout"] = {1u, static_cast<std::uint32_t>(copy_count)};
    for (int i = 0; i < blocks; ++i) {
        std::string suffix = "_t" + std::to_string(plan.bits[i]);
        c.layout["catalyst" + suffix] = {cat0 + i * n, cat0 + (i + 1) * n};
        if (q > 1 && parallel)
            c.layout["qf_fanout" + suffix] = {qf0 + i * (q - 1), qf0 + (i + 1) * (q - 1)};
    }
    if (q > 1 && !parallel) c.layout["qf_fanout"] = {qf0, qf0 + (q - 1)};

    Gate fan{GateKind::Fanout, {0u}};
    for (int i = 1; i < copy_count; ++i) fan.qubits.push_back(i);
    if (copy_count > 1) c.gates.push_back(fan);
    for (int i = 0; i < blocks; ++i) {
        std::vector<std::uint32_t> copies(n);
        for (int j = 0; j < n; ++j) copies[j] = parallel ? i * n + j : j;
        std::uint32_t qf = parallel ? qf0 + i * (q > 1 ? q - 1 : 0) : qf0;
        detail::emit_controlled_step(c, f, copies, cat0 + i * n, qf, std::nullopt);
    }
    if (copy_count > 1) {
        Gate unfan = fan;
        unfan.kind = GateKind::Unfanout;
        c.gates.push_back(unfan);
    }

    return {c, detail::measure_report(c, n, 1 + blocks * n)};
}

// Cost model for one controlled step. Without kappa the numbers are measured
// from the synthesized circuit. With kappa, at most kappa Toffoli-class gates
// run per stage using kappa control copies, and the stage count becomes
// 2 ceil((n-1)/(kappa-1)) + ceil(4/kappa) at unchanged Toffoli count.
inline ResourceReport estimate_resources(const FieldPoly& f, std::optional<int> kappa = std::nullopt) {
    SynthesisResult base = build_controlled_lfsr_step(f);
    ResourceReport r = base.report;
    if (!kappa) return r;
    int k = *kappa;
    if (k < 2) throw std::invalid_argument("estimate_resources: kappa must be >= 2");
    const int n = f.n;
    const int q = static_cast<int>(f.q_set.size());
    r.kappa = k;
    r.toffoli_depth = 2 * ((n - 2) / (k - 1) + 1) + (4 + k - 1) / k;
    int qf_copies = std::min(q, k);
    r.qubits_total = 1 + (k - 1) + n + std::max(0, qf_copies - 1);
    r.ancillas = (k - 1) + std::max(0, qf_copies - 1);
    return r;
}

// Degrees with a shipped default modulus: 3..20 from the deterministic
// search, plus the fixed degree-27 and degree-36 polynomials.
inline const std::vector<int>& builtin_degrees() {
    static const std::vector<int> degrees = [] {
        std::vector<int> d;
        for (int n = 3; n <= 20; ++n) d.push_back(n);
        d.push_back(27);
        d.push_back(36);
        return d;
    }();
    return degrees;
}

inline FieldPoly builtin_polynomial(int n) {
    static std::map<int, FieldPoly> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    FieldPoly f;
    if (n == 27) {
        f = certify_primitive(27, (1ull << 20) | (1ull << 13) | (1ull << 7) | 1ull);
    } else if (n == 36) {
        f = certify_primitive(36, (1ull << 11) | 1ull);
    } else if (n >= 3 && n <= 20) {
        f = find_primitive(n, 5);
    } else {
        throw std::invalid_argument("builtin_polynomial: no default modulus for degree " +
                                    std::to_string(n) + "; pass one explicitly");
    }
    cache.emplace(n, f);
    return f;
}

}  // namespace psik
