#pragma once

// Command layer behind the psik tool. Each cmd_* function takes parsed flag
// values and returns a CommandResult envelope; the tool serializes it as one
// JSON document on stdout. Kept header-only and CLI11-free so tests can call
// commands in-process.
//
// Exit codes: 0 success, 2 usage error, 3 certification or tolerance
// failure, 4 capability cap (simulation size, search budget).

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "psik/circuit.hpp"
#include "psik/gf2n.hpp"
#include "psik/sim.hpp"
#include "psik/synth.hpp"

namespace psik {

using ordered_json = nlohmann::ordered_json;

struct CommandResult {
    std::string status = "ok";
    ordered_json payload = ordered_json::object();
    std::vector<std::string> diagnostics;
    int exit_code = 0;
};

// Floats pass through a 15-significant-digit round trip before entering a
// payload, so identical invocations serialize byte-identically.
inline double round15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

namespace detail {

inline CommandResult fail(int code, const std::string& message) {
    CommandResult r;
    r.status = "error";
    r.exit_code = code;
    r.diagnostics.push_back(message);
    return r;
}

template <typename Body>
CommandResult guarded(Body&& body) {
    try {
        return body();
    } catch (const cap_error& e) {
        return fail(4, e.what());
    } catch (const std::exception& e) {
        return fail(2, e.what());
    }
}

inline FieldPoly resolve_poly(int n, const std::string& poly_text) {
    if (!poly_text.empty()) return certify_primitive(parse_poly(poly_text));
    return builtin_polynomial(n);
}

inline ordered_json json_poly(const FieldPoly& f) {
    ordered_json j;
    j["n"] = f.n;
    j["polynomial"] = poly_to_text(f);
    j["hex"] = poly_to_hex(f);
    j["q_set"] = f.q_set;
    j["q_set_size"] = f.q_set.size();
    return j;
}

inline ordered_json json_complex(std::complex<double> z) {
    return ordered_json{{"re", round15(z.real())}, {"im", round15(z.imag())}};
}

inline ordered_json json_report(const ResourceReport& r) {
    ordered_json j;
    j["n"] = r.n;
    j["toffoli_count"] = r.toffoli_count;
    j["toffoli_depth"] = r.toffoli_depth;
    j["clifford_depth"] = r.clifford_depth;
    j["qubits_total"] = r.qubits_total;
    j["ancillas"] = r.ancillas;
    if (r.kappa) j["kappa"] = *r.kappa;
    return j;
}

inline ordered_json json_layout(const Layout& layout) {
    ordered_json j = ordered_json::object();
    for (const auto& [name, range] : layout) j[name] = {range.first, range.second};
    return j;
}

inline ordered_json json_plan(const KickbackPlan& p) {
    ordered_json j;
    j["a"] = p.a;
    j["b"] = p.b;
    j["m"] = p.m;
    j["modulus"] = p.modulus;
    j["bits"] = p.bits;
    return j;
}

inline ordered_json json_catalysis(const CatalysisReport& r) {
    ordered_json j;
    j["measured_phase"] = json_complex(r.measured_phase);
    j["expected_phase"] = json_complex(r.expected_phase);
    j["phase_error"] = round15(r.phase_error);
    j["catalyst_fidelity"] = round15(r.catalyst_fidelity);
    j["ancilla_restored"] = r.ancilla_restored;
    return j;
}

// A fixed-angle rotation is one kickback against the index-b catalyst, well
// defined for every b; no modular inversion involved.
inline KickbackPlan fixed_plan(u64 b, u64 modulus) {
    KickbackPlan plan;
    plan.a = b;
    plan.b = b;
    plan.modulus = modulus;
    if (b != 0) {
        plan.m = 1;
        plan.bits.push_back(0);
    }
    return plan;
}

// "b=<integer>" or "theta=<radians>"
struct ParsedAngle {
    u64 b = 0;
    std::optional<AngleFit> fit;
    std::optional<double> theta;
};

inline ParsedAngle parse_angle(const std::string& text, int n) {
    ParsedAngle out;
    auto eq = text.find('=');
    const std::string key = text.substr(0, eq);
    if (eq == std::string::npos || (key != "b" && key != "theta"))
        throw std::invalid_argument("angle must be b=<integer> or theta=<radians>, got '" + text + "'");
    const std::string value = text.substr(eq + 1);
    std::size_t used = 0;
    try {
        if (key == "b") {
            out.b = std::stoull(value, &used);
        } else {
            out.theta = std::stod(value, &used);
            out.fit = approximate_angle(*out.theta, n);
            out.b = out.fit->b;
        }
    } catch (const std::invalid_argument&) {
        used = std::string::npos;
    } catch (const std::out_of_range&) {
        used = std::string::npos;
    }
    if (used != value.size()) throw std::invalid_argument("bad angle value '" + value + "'");
    return out;
}

inline std::pair<double, double> parse_amplitudes(const std::string& text) {
    if (text.empty()) return {std::sqrt(0.5), std::sqrt(0.5)};
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("amplitudes must be '<alpha>,<beta>', got '" + text + "'");
    double a = 0, b = 0;
    std::size_t ua = 0, ub = 0;
    try {
        a = std::stod(text.substr(0, comma), &ua);
        b = std::stod(text.substr(comma + 1), &ub);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad amplitudes '" + text + "'");
    }
    if (ua != comma || ub != text.size() - comma - 1)
        throw std::invalid_argument("bad amplitudes '" + text + "'");
    double norm = std::sqrt(a * a + b * b);
    if (norm == 0) throw std::invalid_argument("amplitudes cannot both be zero");
    return {a / norm, b / norm};
}

}  // namespace detail

// --- primpoly -----------------------------------------------------------------

// Search for (or certify) a primitive modulus. A polynomial that parses but
// fails certification exits 3 with the reason; an exhausted search budget
// exits 4.
inline CommandResult cmd_primpoly(int n, int max_terms = 5, const std::string& check = "") {
    return detail::guarded([&] {
        CommandResult r;
        if (!check.empty()) {
            RawPoly raw = parse_poly(check);
            try {
                FieldPoly f = certify_primitive(raw);
                r.payload = detail::json_poly(f);
                r.payload["certified"] = true;
            } catch (const std::invalid_argument& e) {
                r = detail::fail(3, e.what());
                r.payload["polynomial"] = check;
                r.payload["certified"] = false;
            }
            return r;
        }
        FieldPoly f = find_primitive(n, max_terms);
        r.payload = detail::json_poly(f);
        r.payload["certified"] = true;
        r.payload["max_terms"] = max_terms;
        return r;
    });
}

// --- synth ---------------------------------------------------------------------

struct SynthOptions {
    int n = 0;
    std::string poly;           // overrides n when nonempty
    std::string angle = "b=1";  // b=<int> or theta=<radians>
    std::string mode = "fixed";
    u64 a = 1;                  // variable mode: kickback basis index
    bool parallel = false;
    std::string out;            // circuit text file
};

inline CommandResult cmd_synth(const SynthOptions& opt) {
    return detail::guarded([&] {
        FieldPoly f = detail::resolve_poly(opt.n, opt.poly);
        detail::ParsedAngle angle = detail::parse_angle(opt.angle, f.n);
        angle.b %= f.order();  // the phase grid is periodic
        if (opt.mode != "fixed" && opt.mode != "variable")
            throw std::invalid_argument("mode must be fixed or variable");
        KickbackPlan plan = opt.mode == "fixed" ? detail::fixed_plan(angle.b, f.order())
                                                : select_kickbacks(angle.b, opt.a, f.order());
        SynthesisResult built = build_kickback_network(f, plan, opt.parallel);

        CommandResult r;
        r.payload = detail::json_poly(f);
        r.payload["mode"] = opt.mode;
        r.payload["parallel"] = opt.parallel;
        ordered_json ja;
        ja["b"] = angle.b;
        if (angle.theta) {
            ja["theta"] = round15(*angle.theta);
            ja["fit_error"] = round15(angle.fit->err);
        }
        r.payload["angle"] = ja;
        r.payload["plan"] = detail::json_plan(plan);
        r.payload["report"] = detail::json_report(built.report);
        r.payload["layout"] = detail::json_layout(built.circuit.layout);
        if (!opt.out.empty()) {
            std::ofstream os(opt.out);
            if (!os) throw std::runtime_error("cannot open " + opt.out);
            os << to_text(built.circuit);
            r.payload["circuit_file"] = opt.out;
        }
        return r;
    });
}

// --- verify ---------------------------------------------------------------------

struct VerifyOptions {
    int n = 0;
    std::string poly;
    u64 k = 1;                // fixed: catalyst index; variable: rotation exponent b
    u64 a = 1;                // variable mode basis index
    std::string mode = "fixed";
    std::string alpha_beta;   // "<alpha>,<beta>" real amplitudes, normalized
    bool parallel = false;
    double tolerance = 1e-9;
};

// Simulates the synthesized circuit against its catalyst and scores the
// kicked-back phase. Tolerance violations exit 3 and keep the report in the
// payload.
inline CommandResult cmd_verify(const VerifyOptions& opt) {
    return detail::guarded([&] {
        FieldPoly f = detail::resolve_poly(opt.n, opt.poly);
        auto [alpha, beta] = detail::parse_amplitudes(opt.alpha_beta);
        CatalysisReport rep;
        if (opt.mode == "fixed") {
            rep = verify_catalysis(f, opt.k, alpha, beta);
        } else if (opt.mode == "variable") {
            if (opt.k >= f.order()) throw std::invalid_argument("exponent must be below 2^n - 1");
            KickbackPlan plan = select_kickbacks(opt.k, opt.a, f.order());
            rep = verify_kickback(f, plan, opt.parallel, alpha, beta);
        } else {
            throw std::invalid_argument("mode must be fixed or variable");
        }

        bool passed = rep.phase_error < opt.tolerance &&
                      rep.catalyst_fidelity > 1 - opt.tolerance && rep.ancilla_restored;
        CommandResult r;
        r.payload = detail::json_poly(f);
        r.payload["mode"] = opt.mode;
        r.payload["k"] = opt.k;
        r.payload["tolerance"] = round15(opt.tolerance);
        r.payload["report"] = detail::json_catalysis(rep);
        r.payload["passed"] = passed;
        if (!passed) {
            r.status = "error";
            r.exit_code = 3;
            r.diagnostics.push_back("tolerance violated: phase_error=" + std::to_string(rep.phase_error) +
                                    " catalyst_fidelity=" + std::to_string(rep.catalyst_fidelity) +
                                    " ancilla_restored=" + (rep.ancilla_restored ? "true" : "false"));
        }
        return r;
    });
}

// --- resources --------------------------------------------------------------------

inline CommandResult cmd_resources(int n, const std::string& poly = "",
                                   std::optional<int> kappa = std::nullopt) {
    return detail::guarded([&] {
        FieldPoly f = detail::resolve_poly(n, poly);
        CommandResult r;
        r.payload = detail::json_poly(f);
        r.payload["base"] = detail::json_report(estimate_resources(f));
        if (kappa) r.payload["constrained"] = detail::json_report(estimate_resources(f, kappa));
        return r;
    });
}

// --- prep ------------------------------------------------------------------------

struct PrepOptions {
    int n = 0;
    std::string poly;
    u64 k = 1;
    int copies = 1;
    std::string method = "frobenius";  // frobenius | dlog | qpe
    u64 seed = 0;
    int t_bits = 10;
    std::string out;                   // state file for the prepared catalyst
};

// Catalyst preparation. frobenius clones a coprime-index catalyst through
// register multiplications (copies + 2 of them), dlog stamps the index onto
// a fresh zero-index catalyst, qpe projects one out of phase estimation.
inline CommandResult cmd_prep(const PrepOptions& opt) {
    return detail::guarded([&] {
        FieldPoly f = detail::resolve_poly(opt.n, opt.poly);
        CommandResult r;
        r.payload = detail::json_poly(f);
        r.payload["method"] = opt.method;
        std::optional<StateVector> prepared;

        if (opt.method == "frobenius") {
            CloneResult clone = clone_catalyst(f, opt.k, opt.copies);
            r.payload["k"] = opt.k;
            r.payload["copies"] = opt.copies;
            r.payload["mul_count"] = clone.mul_count;
            ordered_json fids = ordered_json::array();
            for (double v : clone.fidelities) fids.push_back(round15(v));
            r.payload["fidelities"] = fids;
            r.payload["workspace_fidelity"] = round15(clone.workspace_fidelity);
            prepared = std::move(clone.copies.front());
        } else if (opt.method == "dlog") {
            StateVector state = apply_dlog_phase(build_catalyst(f, 0), f,
                                                 static_cast<std::int64_t>(opt.k % f.order()));
            double fid = std::norm(inner_product(build_catalyst(f, opt.k), state));
            r.payload["k"] = opt.k;
            r.payload["fidelity"] = round15(fid);
            prepared = std::move(state);
        } else if (opt.method == "qpe") {
            StateVector state = qpe_build_state(f, opt.t_bits);
            std::mt19937_64 rng(opt.seed);
            QpeSample sample = qpe_sample(state, f, opt.t_bits, rng);
            r.payload["t_bits"] = opt.t_bits;
            r.payload["seed"] = opt.seed;
            r.payload["k"] = sample.k;
            r.payload["outcome"] = sample.outcome;
            r.payload["fidelity"] = round15(sample.fidelity);
            prepared = qpe_collapse(state, f, opt.t_bits, sample.outcome);
        } else {
            throw std::invalid_argument("method must be frobenius, dlog or qpe");
        }

        if (!opt.out.empty()) {
            write_state(opt.out, *prepared);
            r.payload["state_file"] = opt.out;
        }
        return r;
    });
}

inline int emit(const CommandResult& r, std::ostream& os) {
    ordered_json doc;
    doc["status"] = r.status;
    doc["payload"] = r.payload;
    doc["diagnostics"] = r.diagnostics;
    os << doc.dump(2) << "\n";
    return r.exit_code;
}

}  // namespace psik
