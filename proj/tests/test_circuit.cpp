#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "psik/circuit.hpp"
#include "psik/sim.hpp"

using psik::Circuit;
using psik::Gate;
using psik::GateKind;

namespace {

// A random mixed-kind circuit on num_qubits qubits, always valid.
Circuit random_circuit(int num_qubits, int gates, std::mt19937_64& rng) {
    Circuit c;
    c.num_qubits = num_qubits;
    std::uniform_int_distribution<int> kind_pick(0, 10);
    auto pick_distinct = [&](int count) {
        std::vector<std::uint32_t> qs;
        while (static_cast<int>(qs.size()) < count) {
            std::uint32_t q = rng() % num_qubits;
            if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
        }
        return qs;
    };
    for (int i = 0; i < gates; ++i) {
        GateKind k = static_cast<GateKind>(kind_pick(rng));
        int arity = psik::kind_arity(k);
        if (arity < 0) arity = 2 + static_cast<int>(rng() % (num_qubits - 1));
        c.gates.push_back({k, pick_distinct(arity)});
    }
    return c;
}

double max_amp_diff(const psik::StateVector& a, const psik::StateVector& b) {
    double m = 0;
    for (psik::u64 i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("validate reports every violation") {
    Circuit c;
    c.num_qubits = 3;

    SECTION("well formed") {
        c.gates.push_back(psik::gate_ccx(0, 1, 2));
        c.layout["a"] = {0, 2};
        c.layout["b"] = {2, 3};
        REQUIRE(psik::validate(c).empty());
        REQUIRE_NOTHROW(psik::require_valid(c, "test"));
    }
    SECTION("operand arity") {
        c.gates.push_back({GateKind::CX, {0}});
        auto errors = psik::validate(c);
        REQUIRE(errors.size() == 1);
        REQUIRE_THAT(errors[0], Catch::Matchers::ContainsSubstring("expected 2 operands"));
    }
    SECTION("operand range") {
        c.gates.push_back({GateKind::X, {5}});
        REQUIRE_THAT(psik::validate(c).at(0), Catch::Matchers::ContainsSubstring("out of range"));
    }
    SECTION("duplicate operands") {
        c.gates.push_back({GateKind::Swap, {1, 1}});
        REQUIRE_THAT(psik::validate(c).at(0), Catch::Matchers::ContainsSubstring("duplicate"));
    }
    SECTION("fanout needs a source") {
        c.gates.push_back({GateKind::Fanout, {}});
        REQUIRE_FALSE(psik::validate(c).empty());
    }
    SECTION("layout overlap and bad ranges") {
        c.layout["a"] = {0, 2};
        c.layout["b"] = {1, 3};
        c.layout["c"] = {2, 2};
        auto errors = psik::validate(c);
        REQUIRE(errors.size() == 2);
    }
    SECTION("several at once") {
        c.gates.push_back({GateKind::CX, {0}});
        c.gates.push_back({GateKind::X, {5}});
        REQUIRE(psik::validate(c).size() == 2);
        REQUIRE_THROWS_AS(psik::require_valid(c, "test"), std::invalid_argument);
    }
}

TEST_CASE("compose concatenates") {
    Circuit a;
    a.num_qubits = 2;
    a.gates.push_back(psik::g1(GateKind::H, 0));
    a.layout["left"] = {0, 2};
    Circuit b;
    b.num_qubits = 2;
    b.gates.push_back(psik::gate_cx(0, 1));
    b.layout["right"] = {0, 2};

    Circuit ab = psik::compose(a, b);
    REQUIRE(ab.gates.size() == 2);
    REQUIRE(ab.gates[0].kind == GateKind::H);
    REQUIRE(ab.gates[1].kind == GateKind::CX);
    REQUIRE(ab.layout.count("left") == 1);
    REQUIRE(ab.layout.count("right") == 0);

    Circuit no_layout;
    no_layout.num_qubits = 2;
    REQUIRE(psik::compose(no_layout, b).layout.count("right") == 1);

    Circuit wrong;
    wrong.num_qubits = 3;
    REQUIRE_THROWS_AS(psik::compose(a, wrong), std::invalid_argument);
}

TEST_CASE("inverse reverses and flips what it must") {
    Circuit c;
    c.num_qubits = 4;
    c.gates.push_back(psik::gate_cx(0, 1));
    c.gates.push_back({GateKind::Fanout, {0, 1, 2, 3}});
    c.gates.push_back(psik::gate_ccx(0, 1, 2));

    Circuit inv = psik::inverse(c);
    REQUIRE(inv.gates.size() == 3);
    REQUIRE(inv.gates[0].kind == GateKind::CCX);
    REQUIRE(inv.gates[1].kind == GateKind::Unfanout);
    REQUIRE(inv.gates[2].kind == GateKind::CX);
    REQUIRE(psik::inverse(inv) == c);  // involution without S gates

    Circuit with_s;
    with_s.num_qubits = 1;
    with_s.gates.push_back(psik::g1(GateKind::S, 0));
    REQUIRE(psik::inverse(with_s).gates.size() == 3);
}

TEST_CASE("inverse undoes the circuit on states") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c = random_circuit(5, 30, rng);
        psik::StateVector in(5);
        // scramble the input so the check is not on |0...0> alone
        in = psik::apply(std::move(in), random_circuit(5, 10, rng));
        psik::StateVector out = psik::apply(psik::apply(in, c), psik::inverse(c));
        REQUIRE(max_amp_diff(in, out) < 1e-12);
    }
}

TEST_CASE("fanout lowers to a balanced tree") {
    Circuit c;
    c.num_qubits = 9;
    Gate fan{GateKind::Fanout, {0, 1, 2, 3, 4, 5, 6, 7, 8}};
    c.gates.push_back(fan);

    Circuit lowered = psik::lower_fanout(c);
    REQUIRE(lowered.gates.size() == 8);
    for (const Gate& g : lowered.gates) REQUIRE(g.kind == GateKind::CX);
    REQUIRE(psik::depth_metrics(lowered).total_depth == 4);  // ceil(log2 9)

    // zero-initialized targets: same action as the fanout gate
    for (psik::u64 source : {0ull, 1ull}) {
        psik::StateVector a = psik::apply(psik::StateVector::basis(9, source), c);
        psik::StateVector b = psik::apply(psik::StateVector::basis(9, source), lowered);
        REQUIRE(max_amp_diff(a, b) == 0.0);
    }

    // fanout then unfanout lowers to an exact identity on every state
    Gate unfan = fan;
    unfan.kind = GateKind::Unfanout;
    Circuit pair;
    pair.num_qubits = 9;
    pair.gates.push_back(fan);
    pair.gates.push_back(unfan);
    Circuit pair_lowered = psik::lower_fanout(pair);
    std::mt19937_64 rng(5);
    psik::StateVector in(9);
    in = psik::apply(std::move(in), random_circuit(9, 12, rng));
    REQUIRE(max_amp_diff(in, psik::apply(in, pair_lowered)) < 1e-12);
}

TEST_CASE("cswap expansion preserves the unitary") {
    Circuit c;
    c.num_qubits = 3;
    c.gates.push_back(psik::gate_cswap(0, 1, 2));
    Circuit expanded = psik::expand_cswap(c);
    REQUIRE(expanded.gates.size() == 3);
    REQUIRE(expanded.gates[1].kind == GateKind::CCX);

    for (psik::u64 basis = 0; basis < 8; ++basis) {
        psik::StateVector a = psik::apply(psik::StateVector::basis(3, basis), c);
        psik::StateVector b = psik::apply(psik::StateVector::basis(3, basis), expanded);
        REQUIRE(max_amp_diff(a, b) == 0.0);
    }

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit r = random_circuit(5, 25, rng);
        psik::StateVector in(5);
        in = psik::apply(std::move(in), random_circuit(5, 8, rng));
        psik::StateVector a = psik::apply(in, r);
        psik::StateVector b = psik::apply(in, psik::expand_cswap(r));
        REQUIRE(max_amp_diff(a, b) < 1e-12);
    }
}

TEST_CASE("toffoli depth is invariant under cswap expansion") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        Circuit c = random_circuit(6, 40, rng);
        REQUIRE(psik::depth_metrics(psik::expand_cswap(c)).toffoli_depth ==
                psik::depth_metrics(c).toffoli_depth);
    }
}

TEST_CASE("depth accounting") {
    SECTION("single toffoli") {
        Circuit c;
        c.num_qubits = 3;
        c.gates.push_back(psik::gate_ccx(0, 1, 2));
        psik::DepthReport d = psik::depth_metrics(c);
        REQUIRE(d.total_depth == 1);
        REQUIRE(d.toffoli_depth == 1);
        REQUIRE(d.clifford_depth == 0);
        REQUIRE(d.gate_counts.at("ccx") == 1);
    }
    SECTION("disjoint toffolis share a stage") {
        Circuit c;
        c.num_qubits = 6;
        c.gates.push_back(psik::gate_cswap(0, 1, 2));
        c.gates.push_back(psik::gate_cswap(3, 4, 5));
        REQUIRE(psik::depth_metrics(c).toffoli_depth == 1);
        REQUIRE(psik::depth_metrics(c).total_depth == 1);
    }
    SECTION("clifford gates chain toffoli stages without taking one") {
        Circuit c;
        c.num_qubits = 6;
        c.gates.push_back(psik::gate_ccx(0, 1, 2));
        c.gates.push_back(psik::gate_cx(2, 3));
        c.gates.push_back(psik::gate_ccx(3, 4, 5));
        psik::DepthReport d = psik::depth_metrics(c);
        REQUIRE(d.total_depth == 3);
        REQUIRE(d.toffoli_depth == 2);
    }
    SECTION("clifford-only layers") {
        Circuit c;
        c.num_qubits = 3;
        c.gates.push_back(psik::g1(GateKind::H, 0));
        c.gates.push_back(psik::gate_cx(0, 1));
        c.gates.push_back(psik::g1(GateKind::S, 1));
        psik::DepthReport d = psik::depth_metrics(c);
        REQUIRE(d.toffoli_depth == 0);
        REQUIRE(d.clifford_depth == 3);
    }
    SECTION("a layer with a toffoli is not a clifford layer") {
        Circuit c;
        c.num_qubits = 4;
        c.gates.push_back(psik::gate_ccx(0, 1, 2));
        c.gates.push_back(psik::g1(GateKind::H, 3));
        REQUIRE(psik::depth_metrics(c).clifford_depth == 0);
    }
    SECTION("toffoli depth never exceeds total depth") {
        std::mt19937_64 rng(41);
        for (int trial = 0; trial < 50; ++trial) {
            psik::DepthReport d = psik::depth_metrics(random_circuit(6, 30, rng));
            REQUIRE(d.toffoli_depth <= d.total_depth);
        }
    }
    SECTION("composition subadditivity") {
        std::mt19937_64 rng(43);
        for (int trial = 0; trial < 20; ++trial) {
            Circuit a = random_circuit(5, 15, rng);
            Circuit b = random_circuit(5, 15, rng);
            REQUIRE(psik::depth_metrics(psik::compose(a, b)).total_depth <=
                    psik::depth_metrics(a).total_depth + psik::depth_metrics(b).total_depth);
        }
    }
}

TEST_CASE("capped toffoli scheduling") {
    Circuit c;
    c.num_qubits = 12;
    for (int i = 0; i < 4; ++i) c.gates.push_back(psik::gate_ccx(3 * i, 3 * i + 1, 3 * i + 2));

    REQUIRE(psik::kappa_toffoli_depth(c, 1) == 4);
    REQUIRE(psik::kappa_toffoli_depth(c, 2) == 2);
    REQUIRE(psik::kappa_toffoli_depth(c, 4) == 1);
    REQUIRE(psik::kappa_toffoli_depth(c, 100) == psik::depth_metrics(c).toffoli_depth);
    REQUIRE_THROWS_AS(psik::kappa_toffoli_depth(c, 0), std::invalid_argument);

    Circuit chain;
    chain.num_qubits = 4;
    for (int i = 0; i < 5; ++i) chain.gates.push_back(psik::gate_ccx(0, 1, 2));
    REQUIRE(psik::kappa_toffoli_depth(chain, 8) == 5);  // data dependencies still serialize

    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        Circuit r = random_circuit(6, 25, rng);
        int unconstrained = psik::depth_metrics(r).toffoli_depth;
        REQUIRE(psik::kappa_toffoli_depth(r, 3) >= unconstrained);
    }
}

TEST_CASE("text form round trips") {
    Circuit c;
    c.num_qubits = 6;
    c.layout["control"] = {0, 1};
    c.layout["catalyst"] = {3, 6};
    c.gates.push_back({GateKind::Fanout, {0, 1, 2}});
    c.gates.push_back(psik::gate_ccx(0, 5, 3));
    c.gates.push_back(psik::gate_cswap(1, 3, 5));
    c.gates.push_back({GateKind::Unfanout, {0, 1, 2}});

    std::string text = psik::to_text(c);
    REQUIRE_THAT(text, Catch::Matchers::StartsWith("qubits 6\n"));
    REQUIRE_THAT(text, Catch::Matchers::ContainsSubstring("# layout control 0..0"));
    REQUIRE_THAT(text, Catch::Matchers::ContainsSubstring("# layout catalyst 3..5"));
    REQUIRE_THAT(text, Catch::Matchers::ContainsSubstring("fanout 0 1 2"));

    REQUIRE(psik::from_text(text) == c);
}

TEST_CASE("text parser rejects malformed input with line numbers") {
    using Catch::Matchers::ContainsSubstring;
    REQUIRE_THROWS_WITH(psik::from_text("ccx 0 1 2\n"), ContainsSubstring("line 1"));
    REQUIRE_THROWS_WITH(psik::from_text("qubits 3\nrx 0\n"), ContainsSubstring("unknown gate kind"));
    REQUIRE_THROWS_WITH(psik::from_text("qubits 3\ncx 0\n"), ContainsSubstring("expected 2 operands"));
    REQUIRE_THROWS_WITH(psik::from_text("qubits 3\ncx 0 1 junk\n"), ContainsSubstring("line 2"));
    REQUIRE_THROWS_WITH(psik::from_text("qubits 3\nx -1\n"), ContainsSubstring("negative"));
    REQUIRE_THROWS_WITH(psik::from_text("qubits 3\n# layout a 0-2\n"), ContainsSubstring("lo..hi"));
    REQUIRE_THROWS_WITH(psik::from_text("qubits 3\nswap 1 1\n"), ContainsSubstring("duplicate"));
    REQUIRE_THROWS_WITH(psik::from_text(""), ContainsSubstring("missing"));
    // stray comments and blank lines are fine
    REQUIRE_NOTHROW(psik::from_text("# note\n\nqubits 2\n# another\ncx 0 1\n"));
}
