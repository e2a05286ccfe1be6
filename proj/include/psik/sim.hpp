#pragma once

// Exact dense state-vector simulation, capped at 22 qubits. Qubit 0 is the
// least significant bit of the amplitude index, so an n-qubit register
// holding a field element stores its coefficient mask directly as bits.
//
// Everything here exists to check the synthesized circuits against the
// algebra: catalyst construction, the kickback identity, eigenindex
// conversion by squaring / index shifts / register multiplication, cloning,
// and phase-estimation sampling.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "psik/circuit.hpp"
#include "psik/gf2n.hpp"
#include "psik/synth.hpp"

namespace psik {

inline constexpr int kMaxSimQubits = 22;

using cd = std::complex<double>;

// e^(2 pi i k / modulus)
inline cd unit_phase(u64 k, u64 modulus) {
    long double angle = 2.0L * std::numbers::pi_v<long double> * (long double)(k % modulus) / (long double)modulus;
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

class StateVector {
  public:
    explicit StateVector(int num_qubits) : nq_(num_qubits) {
        if (num_qubits < 0 || num_qubits > kMaxSimQubits)
            throw cap_error("simulation cap exceeded (" + std::to_string(kMaxSimQubits) +
                            " qubits): requested " + std::to_string(num_qubits));
        amps_.assign(1ull << num_qubits, cd{0, 0});
        amps_[0] = 1;
    }

    static StateVector basis(int num_qubits, u64 index) {
        StateVector s(num_qubits);
        if (index >= s.size()) throw std::invalid_argument("StateVector::basis: index out of range");
        s.amps_[0] = 0;
        s.amps_[index] = 1;
        return s;
    }

    int num_qubits() const { return nq_; }
    u64 size() const { return amps_.size(); }
    cd& operator[](u64 i) { return amps_[i]; }
    const cd& operator[](u64 i) const { return amps_[i]; }
    std::vector<cd>& amplitudes() { return amps_; }
    const std::vector<cd>& amplitudes() const { return amps_; }

    double norm() const {
        double s = 0;
        for (const cd& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

    void normalize() {
        double n = norm();
        if (n == 0) throw std::invalid_argument("StateVector::normalize: zero vector");
        for (cd& a : amps_) a /= n;
    }

  private:
    int nq_;
    std::vector<cd> amps_;
};

inline cd inner_product(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("inner_product: size mismatch");
    cd s = 0;
    for (u64 i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

// Product state with `low` on the low qubits.
inline StateVector kron(const StateVector& low, const StateVector& high) {
    StateVector out(low.num_qubits() + high.num_qubits());
    out[0] = 0;
    for (u64 h = 0; h < high.size(); ++h) {
        if (high[h] == cd{0, 0}) continue;
        for (u64 l = 0; l < low.size(); ++l) out[(h << low.num_qubits()) | l] = high[h] * low[l];
    }
    return out;
}

namespace detail {

inline void apply_gate(std::vector<cd>& a, const Gate& g) {
    const u64 size = a.size();
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (g.kind) {
        case GateKind::X: {
            u64 b = 1ull << g.qubits[0];
            for (u64 i = 0; i < size; ++i)
                if (!(i & b)) std::swap(a[i], a[i | b]);
            break;
        }
        case GateKind::Z: {
            u64 b = 1ull << g.qubits[0];
            for (u64 i = 0; i < size; ++i)
                if (i & b) a[i] = -a[i];
            break;
        }
        case GateKind::H: {
            u64 b = 1ull << g.qubits[0];
            for (u64 i = 0; i < size; ++i)
                if (!(i & b)) {
                    cd x = a[i], y = a[i | b];
                    a[i] = (x + y) * inv_sqrt2;
                    a[i | b] = (x - y) * inv_sqrt2;
                }
            break;
        }
        case GateKind::S: {
            u64 b = 1ull << g.qubits[0];
            for (u64 i = 0; i < size; ++i)
                if (i & b) a[i] *= cd{0, 1};
            break;
        }
        case GateKind::CX: {
            u64 cb = 1ull << g.qubits[0], tb = 1ull << g.qubits[1];
            for (u64 i = 0; i < size; ++i)
                if ((i & cb) && !(i & tb)) std::swap(a[i], a[i | tb]);
            break;
        }
        case GateKind::CZ: {
            u64 b0 = 1ull << g.qubits[0], b1 = 1ull << g.qubits[1];
            for (u64 i = 0; i < size; ++i)
                if ((i & b0) && (i & b1)) a[i] = -a[i];
            break;
        }
        case GateKind::Swap: {
            u64 b0 = 1ull << g.qubits[0], b1 = 1ull << g.qubits[1];
            for (u64 i = 0; i < size; ++i)
                if ((i & b0) && !(i & b1)) std::swap(a[i], a[i ^ b0 ^ b1]);
            break;
        }
        case GateKind::CCX: {
            u64 c = (1ull << g.qubits[0]) | (1ull << g.qubits[1]);
            u64 tb = 1ull << g.qubits[2];
            for (u64 i = 0; i < size; ++i)
                if (((i & c) == c) && !(i & tb)) std::swap(a[i], a[i | tb]);
            break;
        }
        case GateKind::CSwap: {
            u64 cb = 1ull << g.qubits[0];
            u64 b0 = 1ull << g.qubits[1], b1 = 1ull << g.qubits[2];
            for (u64 i = 0; i < size; ++i)
                if ((i & cb) && (i & b0) && !(i & b1)) std::swap(a[i], a[i ^ b0 ^ b1]);
            break;
        }
        case GateKind::Fanout:
        case GateKind::Unfanout: {
            // multi-target CX: targets flip where the source bit is set
            u64 sb = 1ull << g.qubits[0];
            u64 tm = 0;
            for (std::size_t j = 1; j < g.qubits.size(); ++j) tm |= 1ull << g.qubits[j];
            for (u64 i = 0; i < size; ++i)
                if ((i & sb) && i < (i ^ tm)) std::swap(a[i], a[i ^ tm]);
            break;
        }
    }
}

}  // namespace detail

inline StateVector apply(StateVector state, const Circuit& c) {
    require_valid(c, "apply");
    if (static_cast<std::uint32_t>(state.num_qubits()) != c.num_qubits)
        throw std::invalid_argument("apply: circuit acts on " + std::to_string(c.num_qubits) +
                                    " qubits, state has " + std::to_string(state.num_qubits()));
    for (const Gate& g : c.gates) detail::apply_gate(state.amplitudes(), g);
    return state;
}

// --- catalyst states ---------------------------------------------------------

struct CatalystSpec {
    FieldPoly f;
    u64 k = 0;
    GFElement v;  // nonzero orbit start; coeffs(1) unless stated otherwise
};

// The index-k catalyst: equal-weight superposition over the alpha orbit of v
// with phase -2 pi j k / (2^n - 1) on the j-th orbit point. Eigenvector of
// the step circuit with eigenvalue e^(2 pi i k / (2^n - 1)).
inline StateVector build_catalyst(const CatalystSpec& spec) {
    const FieldPoly& f = spec.f;
    if (spec.v.n != f.n || spec.v.is_zero())
        throw std::invalid_argument("build_catalyst: starting vector must be a nonzero field element");
    const u64 modulus = f.order();
    StateVector s(f.n);
    s[0] = 0;
    const double scale = 1.0 / std::sqrt(static_cast<double>(modulus));
    u64 w = spec.v.bits;
    for (u64 j = 0; j < modulus; ++j) {
        s[w] = scale * unit_phase(modulus - mulmod(j % modulus, spec.k % modulus, modulus), modulus);
        w = detail::gf_mul_raw(w, 2, f.n, f.coeffs);
    }
    return s;
}

inline StateVector build_catalyst(const FieldPoly& f, u64 k) {
    return build_catalyst(CatalystSpec{f, k, gf_one(f.n)});
}

// --- kickback verification ---------------------------------------------------

struct CatalysisReport {
    cd measured_phase{1, 0};
    cd expected_phase{1, 0};
    double phase_error = 0;
    double catalyst_fidelity = 1;
    bool ancilla_restored = true;
};

namespace detail {

// Common check for a control qubit at 0, a catalyst super-register at
// [cat_lo, cat_lo + cat_n), and zeroed ancillas everywhere else. reference is
// the intended catalyst content.
inline CatalysisReport verify_on_circuit(const Circuit& c, std::uint32_t cat_lo, int cat_n,
                                         const StateVector& reference, cd alpha, cd beta, cd expected) {
    const int total = static_cast<int>(c.num_qubits);
    StateVector in(total);
    in[0] = 0;
    for (u64 x = 0; x < reference.size(); ++x) {
        if (reference[x] == cd{0, 0}) continue;
        in[(x << cat_lo)] = alpha * reference[x];
        in[(x << cat_lo) | 1] = beta * reference[x];
    }
    StateVector out = apply(std::move(in), c);

    cd r0 = 0, r1 = 0;
    for (u64 x = 0; x < reference.size(); ++x) {
        r0 += std::conj(reference[x]) * out[(x << cat_lo)];
        r1 += std::conj(reference[x]) * out[(x << cat_lo) | 1];
    }

    CatalysisReport rep;
    rep.expected_phase = expected;
    if (std::abs(alpha) < 1e-12 || std::abs(beta) < 1e-12) {
        // a one-branch input carries no relative phase; nothing to measure
        rep.measured_phase = expected;
    } else {
        cd rel = (r1 * alpha) / (r0 * beta);
        rep.measured_phase = std::abs(rel) == 0 ? cd{0, 0} : rel / std::abs(rel);
    }
    rep.phase_error = std::abs(rep.measured_phase - rep.expected_phase);

    const u64 cat_mask = low_mask(cat_n) << cat_lo;
    const u64 anc_mask = low_mask(total) & ~(cat_mask | 1ull);
    double fid = 0;
    const u64 env_lo = 1ull << cat_lo;
    const u64 env_hi = 1ull << (total - cat_lo - cat_n);
    for (u64 hi = 0; hi < env_hi; ++hi)
        for (u64 lo = 0; lo < env_lo; ++lo) {
            cd v = 0;
            for (u64 x = 0; x < reference.size(); ++x)
                v += std::conj(reference[x]) * out[lo | (x << cat_lo) | (hi << (cat_lo + cat_n))];
            fid += std::norm(v);
        }
    rep.catalyst_fidelity = fid;

    double leaked = 0;
    for (u64 i = 0; i < out.size(); ++i)
        if (i & anc_mask) leaked += std::norm(out[i]);
    rep.ancilla_restored = leaked < 1e-12;
    return rep;
}

}  // namespace detail

// Runs the controlled step against the index-k catalyst on (alpha |0> +
// beta |1>) and reports the measured relative phase, the catalyst's reduced
// fidelity with its input, and whether every ancilla came back to |0>.
inline CatalysisReport verify_catalysis(const FieldPoly& f, u64 k, cd alpha = std::sqrt(0.5),
                                        cd beta = std::sqrt(0.5)) {
    SynthesisResult built = build_controlled_lfsr_step(f);
    StateVector psi = build_catalyst(f, k);
    return detail::verify_on_circuit(built.circuit, built.circuit.layout.at("catalyst").first, f.n, psi,
                                     alpha, beta, unit_phase(k, f.order()));
}

// Same check for a full kickback network: block t holds the index-(a 2^t)
// catalyst and the accumulated phase must be e^(2 pi i b / (2^n - 1)).
inline CatalysisReport verify_kickback(const FieldPoly& f, const KickbackPlan& plan, bool parallel = true,
                                       cd alpha = std::sqrt(0.5), cd beta = std::sqrt(0.5)) {
    SynthesisResult built = build_kickback_network(f, plan, parallel);
    if (plan.bits.empty()) {
        CatalysisReport rep;
        rep.expected_phase = unit_phase(plan.b, f.order());
        rep.measured_phase = rep.expected_phase;  // empty circuit: phase is exactly 1
        return rep;
    }
    StateVector product(0);
    for (std::size_t i = 0; i < plan.bits.size(); ++i) {
        u64 kt = mulmod(powmod(2, plan.bits[i], plan.modulus), plan.a, plan.modulus);
        StateVector psi = build_catalyst(f, kt);
        product = i == 0 ? std::move(psi) : kron(product, psi);
    }
    std::uint32_t cat_lo = built.circuit.layout.at("catalyst_t" + std::to_string(plan.bits.front())).first;
    return detail::verify_on_circuit(built.circuit, cat_lo, product.num_qubits(), product, alpha, beta,
                                     unit_phase(plan.b, f.order()));
}

// --- eigenindex maps ----------------------------------------------------------

enum class Direction { forward, inverse };

// Basis permutation of the squaring map: forward sends |g> to |g^2>, which
// divides a catalyst's eigenindex by two; inverse doubles it.
inline StateVector apply_frobenius(StateVector state, const FieldPoly& f, Direction dir) {
    if (state.num_qubits() != f.n) throw std::invalid_argument("apply_frobenius: state size mismatch");
    BinMatrix m = frobenius_matrix(f);
    if (dir == Direction::inverse) m = mat_inverse(m);
    StateVector out(f.n);
    out[0] = 0;
    for (u64 i = 0; i < state.size(); ++i) out[mat_vec(m, i)] = state[i];
    return out;
}

// Register multiplication on a 2n-qubit state: (g, h) -> (g, g h), identity
// on g = 0 (inverse divides instead). Shifts the low register's eigenindex
// down by the high register's.
inline StateVector apply_field_multiply(StateVector state, const FieldPoly& f,
                                        Direction dir = Direction::forward) {
    const int n = f.n;
    if (state.num_qubits() != 2 * n) throw std::invalid_argument("apply_field_multiply: state must hold two registers");
    const u64 reg = 1ull << n;
    StateVector out(2 * n);
    out[0] = 0;
    for (u64 g = 0; g < reg; ++g) {
        u64 factor = g;
        if (g != 0 && dir == Direction::inverse) factor = detail::gf_pow_raw(g, f.order() - 1, n, f.coeffs);
        for (u64 h = 0; h < reg; ++h) {
            u64 h2 = g == 0 ? h : detail::gf_mul_raw(factor, h, n, f.coeffs);
            out[g | (h2 << n)] = state[g | (h << n)];
        }
    }
    return out;
}

// Diagonal phase e^(-2 pi i j m / (2^n - 1)) on |alpha^j>, via the classical
// exponent table. Shifts a catalyst's index from k to k + m.
inline StateVector apply_dlog_phase(StateVector state, const FieldPoly& f, std::int64_t m) {
    if (state.num_qubits() != f.n) throw std::invalid_argument("apply_dlog_phase: state size mismatch");
    const u64 modulus = f.order();
    const u64 mm = static_cast<u64>(((m % static_cast<std::int64_t>(modulus)) + static_cast<std::int64_t>(modulus))) % modulus;
    DlogTable table(f);
    for (u64 i = 1; i < state.size(); ++i) {
        u64 j = table.log_of(GFElement{f.n, i});
        state[i] *= unit_phase(modulus - mulmod(j, mm, modulus), modulus);
    }
    return state;
}

// --- cloning -------------------------------------------------------------------

struct CloneResult {
    std::vector<StateVector> copies;
    int mul_count = 0;
    std::vector<double> fidelities;    // |<psi_k | copy>|^2 per copy, after uncompute
    double workspace_fidelity = 0;     // the scratch catalyst's return to index 0
};

namespace detail {

// One register multiplication on the product first (low) x second (high),
// then split the result back into the two carried single-register states by
// projection. Both stay normalized; any entanglement the multiplication left
// behind shows up later as lost fidelity.
inline void multiply_pair(StateVector& first, StateVector& second, const FieldPoly& f, Direction dir,
                          int& mul_count) {
    StateVector pair = apply_field_multiply(kron(first, second), f, dir);
    ++mul_count;
    const int n = f.n;
    StateVector new_first(n);
    new_first[0] = 0;
    for (u64 g = 0; g < new_first.size(); ++g) {
        cd v = 0;
        for (u64 h = 0; h < second.size(); ++h) v += std::conj(second[h]) * pair[g | (h << n)];
        new_first[g] = v;
    }
    new_first.normalize();
    StateVector new_second(n);
    new_second[0] = 0;
    for (u64 h = 0; h < new_second.size(); ++h) {
        cd v = 0;
        for (u64 g = 0; g < new_first.size(); ++g) v += std::conj(new_first[g]) * pair[g | (h << n)];
        new_second[h] = v;
    }
    new_second.normalize();
    first = std::move(new_first);
    second = std::move(new_second);
}

}  // namespace detail

// Cloning loop for a coprime-index catalyst: one multiplication turns a
// fresh index-0 catalyst into the negated index, each copy costs one more
// multiplication against it, and a final division uncomputes it: copies + 2
// multiplications in total. Simulated pairwise, so only 2n qubits at a time.
inline CloneResult clone_catalyst(const FieldPoly& f, u64 k, int copies) {
    if (copies < 1) throw std::invalid_argument("clone_catalyst: need at least one copy");
    const u64 modulus = f.order();
    k %= modulus;
    if (std::gcd(k, modulus) != 1)
        throw std::invalid_argument("clone_catalyst: index must be coprime to 2^n - 1");
    StateVector target = build_catalyst(f, k);

    CloneResult result;
    StateVector negated = build_catalyst(f, 0);
    StateVector anchor = target;  // the input catalyst, consumed read-only
    detail::multiply_pair(negated, anchor, f, Direction::forward, result.mul_count);
    for (int i = 0; i < copies; ++i) {
        StateVector copy = build_catalyst(f, 0);
        detail::multiply_pair(copy, negated, f, Direction::forward, result.mul_count);
        result.copies.push_back(std::move(copy));
    }
    detail::multiply_pair(negated, result.copies.front(), f, Direction::inverse, result.mul_count);
    for (const StateVector& copy : result.copies)
        result.fidelities.push_back(std::norm(inner_product(target, copy)));
    result.workspace_fidelity = std::norm(inner_product(build_catalyst(f, 0), negated));
    return result;
}

// --- phase estimation ------------------------------------------------------------

struct QpeSample {
    u64 k = 0;          // nearest eigenindex to the measured phase
    double fidelity = 0;  // overlap of the post-measurement state with catalyst k
    u64 outcome = 0;    // raw t-bit measurement
};

namespace detail {

inline void fft_pow2(std::vector<cd>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        cd wlen{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            cd w{1, 0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                cd u = v[i + j], t = v[i + j + len / 2] * w;
                v[i + j] = u + t;
                v[i + j + len / 2] = u - t;
                w *= wlen;
            }
        }
    }
}

}  // namespace detail

// Pre-measurement phase-estimation state: system register (low n qubits)
// starts in |coeffs(1)>, t control qubits drive squared powers of the step
// permutation, then the inverse Fourier transform on the phase register.
inline StateVector qpe_build_state(const FieldPoly& f, int t_bits) {
    if (t_bits < 1) throw std::invalid_argument("qpe_build_state: need at least one phase bit");
    const int n = f.n;
    StateVector state = StateVector::basis(n + t_bits, 1);  // throws past the qubit cap
    std::vector<cd>& a = state.amplitudes();
    for (int s = 0; s < t_bits; ++s) detail::apply_gate(a, g1(GateKind::H, n + s));

    BinMatrix power = companion_matrix(f);
    const u64 sys_mask = low_mask(n);
    for (int s = 0; s < t_bits; ++s) {
        std::vector<cd> next(a.size(), cd{0, 0});
        const u64 cb = 1ull << (n + s);
        for (u64 i = 0; i < a.size(); ++i) {
            if (a[i] == cd{0, 0}) continue;
            u64 j = (i & cb) ? (i & ~sys_mask) | mat_vec(power, i & sys_mask) : i;
            next[j] = a[i];
        }
        a.swap(next);
        power = mat_mul(power, power);
    }

    // inverse Fourier transform on the phase register, system slice by slice
    const u64 t_size = 1ull << t_bits;
    const double scale = 1.0 / std::sqrt(static_cast<double>(t_size));
    std::vector<cd> buf(t_size);
    for (u64 sys = 0; sys < (1ull << n); ++sys) {
        for (u64 x = 0; x < t_size; ++x) buf[x] = a[sys | (x << n)];
        detail::fft_pow2(buf);
        for (u64 y = 0; y < t_size; ++y) a[sys | (y << n)] = buf[y] * scale;
    }
    return state;
}

// The system register conditioned on a given phase-register outcome.
inline StateVector qpe_collapse(const StateVector& state, const FieldPoly& f, int t_bits, u64 outcome) {
    const int n = f.n;
    if (state.num_qubits() != n + t_bits) throw std::invalid_argument("qpe_collapse: state size mismatch");
    StateVector post(n);
    post[0] = 0;
    for (u64 sys = 0; sys < (1ull << n); ++sys) post[sys] = state[sys | (outcome << n)];
    post.normalize();
    return post;
}

// Measures the phase register of a prepared state, collapses the system
// register, and scores it against the nearest catalyst.
inline QpeSample qpe_sample(const StateVector& state, const FieldPoly& f, int t_bits,
                            std::mt19937_64& rng) {
    const int n = f.n;
    if (state.num_qubits() != n + t_bits) throw std::invalid_argument("qpe_sample: state size mismatch");
    const u64 t_size = 1ull << t_bits;
    const u64 modulus = f.order();

    std::vector<double> marginal(t_size, 0);
    for (u64 y = 0; y < t_size; ++y)
        for (u64 sys = 0; sys < (1ull << n); ++sys) marginal[y] += std::norm(state[sys | (y << n)]);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double u = uniform(rng), acc = 0;
    u64 y = t_size - 1;
    for (u64 i = 0; i < t_size; ++i) {
        acc += marginal[i];
        if (u < acc) { y = i; break; }
    }

    QpeSample sample;
    sample.outcome = y;
    sample.k = static_cast<u64>((long double)y * (long double)modulus / (long double)t_size + 0.5L) % modulus;
    sample.fidelity = std::norm(inner_product(build_catalyst(f, sample.k), qpe_collapse(state, f, t_bits, y)));
    return sample;
}

inline QpeSample qpe_prepare(const FieldPoly& f, int t_bits, u64 seed) {
    StateVector state = qpe_build_state(f, t_bits);
    std::mt19937_64 rng(seed);
    return qpe_sample(state, f, t_bits, rng);
}

struct CoprimeStats {
    double success_rate = 0;  // sampled fraction of indices coprime to 2^n - 1
    double exact_ratio = 0;   // phi(2^n - 1) / (2^n - 1)
    double bound = 0;         // classical lower bound on the exact ratio
};

// Retry model for drawing a cloneable catalyst index: phase estimation lands
// on a uniformly random index, usable only when coprime to the group order.
inline CoprimeStats coprime_retry_stats(int n, int trials, u64 seed) {
    detail::check_degree(n);
    if (trials < 1) throw std::invalid_argument("coprime_retry_stats: need at least one trial");
    const u64 modulus = low_mask(n);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> dist(0, modulus - 1);
    int hits = 0;
    for (int i = 0; i < trials; ++i)
        if (std::gcd(dist(rng), modulus) == 1) ++hits;
    TotientCheck tc = totient_check(modulus);
    CoprimeStats stats;
    stats.success_rate = static_cast<double>(hits) / trials;
    stats.exact_ratio = tc.ratio;
    stats.bound = tc.bound;
    return stats;
}

// --- state files ------------------------------------------------------------------
//
// Little-endian binary: "PSIK", u32 version (1), u32 qubit count, then
// 2^q (re, im) doubles.

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::ostream& os, double d) {
    u64 b = std::bit_cast<u64>(d);
    for (int i = 0; i < 8; ++i) os.put(static_cast<char>((b >> (8 * i)) & 0xff));
}

inline std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        int c = is.get();
        if (c < 0) throw std::runtime_error("state file truncated");
        v |= static_cast<std::uint32_t>(c & 0xff) << (8 * i);
    }
    return v;
}

inline double get_f64(std::istream& is) {
    u64 b = 0;
    for (int i = 0; i < 8; ++i) {
        int c = is.get();
        if (c < 0) throw std::runtime_error("state file truncated");
        b |= static_cast<u64>(c & 0xff) << (8 * i);
    }
    return std::bit_cast<double>(b);
}

}  // namespace detail

inline void write_state(std::ostream& os, const StateVector& s) {
    os.write("PSIK", 4);
    detail::put_u32(os, 1);
    detail::put_u32(os, static_cast<std::uint32_t>(s.num_qubits()));
    for (u64 i = 0; i < s.size(); ++i) {
        detail::put_f64(os, s[i].real());
        detail::put_f64(os, s[i].imag());
    }
    if (!os) throw std::runtime_error("write_state: stream failure");
}

inline StateVector read_state(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (is.gcount() != 4 || std::string(magic, 4) != "PSIK")
        throw std::runtime_error("read_state: bad magic");
    std::uint32_t version = detail::get_u32(is);
    if (version != 1) throw std::runtime_error("read_state: unsupported version " + std::to_string(version));
    std::uint32_t nq = detail::get_u32(is);
    if (nq > kMaxSimQubits) throw cap_error("read_state: qubit count exceeds simulation cap");
    StateVector s(static_cast<int>(nq));
    for (u64 i = 0; i < s.size(); ++i) {
        double re = detail::get_f64(is);
        double im = detail::get_f64(is);
        s[i] = {re, im};
    }
    return s;
}

inline void write_state(const std::string& path, const StateVector& s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_state: cannot open " + path);
    write_state(os, s);
}

inline StateVector read_state(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_state: cannot open " + path);
    return read_state(is);
}

}  // namespace psik
