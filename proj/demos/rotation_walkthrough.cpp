// Walks one z-rotation through the whole pipeline at n = 3: pick the field,
// fit the angle to the phase grid, synthesize the kickback network, simulate
// it against its catalysts, and print the resource picture for larger fields.

#include <cstdio>
#include <numbers>

#include "psik/sim.hpp"
#include "psik/synth.hpp"

int main() {
    using namespace psik;

    FieldPoly f = builtin_polynomial(3);
    std::printf("field:     GF(2^3) mod %s, q_set size %zu\n", poly_to_text(f).c_str(), f.q_set.size());

    double theta = 2 * std::numbers::pi * 3 / 7;
    AngleFit fit = approximate_angle(theta, f.n);
    std::printf("angle:     theta=%.6f fits b=%llu on the 2pi/7 grid (error %.2e)\n", theta,
                static_cast<unsigned long long>(fit.b), fit.err);

    KickbackPlan plan = select_kickbacks(fit.b, 1, f.order());
    std::printf("plan:      m=%llu, one kickback per set bit:", static_cast<unsigned long long>(plan.m));
    for (int t : plan.bits) std::printf(" t=%d", t);
    std::printf("\n");

    SynthesisResult built = build_kickback_network(f, plan, true);
    std::printf("circuit:   %zu gates on %d qubits, toffoli count %d, toffoli depth %d\n",
                built.circuit.gates.size(), built.report.qubits_total, built.report.toffoli_count,
                built.report.toffoli_depth);

    CatalysisReport rep = verify_kickback(f, plan, true);
    std::printf("simulated: phase %.6f%+.6fi vs expected %.6f%+.6fi (error %.2e)\n",
                rep.measured_phase.real(), rep.measured_phase.imag(), rep.expected_phase.real(),
                rep.expected_phase.imag(), rep.phase_error);
    std::printf("           catalyst fidelity %.12f, ancillas %s\n", rep.catalyst_fidelity,
                rep.ancilla_restored ? "restored" : "NOT restored");

    CloneResult clone = clone_catalyst(f, fit.b, 2);
    std::printf("cloning:   %d copies of the index-%llu catalyst in %d multiplications, fidelity %.12f\n",
                static_cast<int>(clone.copies.size()), static_cast<unsigned long long>(fit.b),
                clone.mul_count, clone.fidelities.front());

    std::printf("\nscaling (controlled step, built-in moduli):\n");
    std::printf("  %4s %8s %7s %7s %7s %16s\n", "n", "toffoli", "depth", "qubits", "kappa=2", "kappa=2 qubits");
    for (int n : {3, 8, 16, 27, 36}) {
        FieldPoly g = builtin_polynomial(n);
        ResourceReport base = estimate_resources(g);
        ResourceReport capped = estimate_resources(g, 2);
        std::printf("  %4d %8d %7d %7d %7d %16d\n", n, base.toffoli_count, base.toffoli_depth,
                    base.qubits_total, capped.toffoli_depth, capped.qubits_total);
    }
    return 0;
}
