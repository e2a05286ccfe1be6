// psik: synthesize, verify and cost catalytic z-rotation circuits over
// GF(2^n). Every subcommand prints one JSON document on stdout.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "psik/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"catalytic z-rotation synthesis over GF(2^n)"};
    app.require_subcommand(1);
    int code = 0;

    int pp_n = 0;
    int pp_terms = 5;
    std::string pp_check;
    CLI::App* pp = app.add_subcommand("primpoly", "search for or certify a primitive modulus");
    pp->add_option("n", pp_n, "degree to search, 2..64");
    pp->add_option("--max-terms", pp_terms, "term budget, 3 or 5")->capture_default_str();
    pp->add_option("--check", pp_check, "certify this polynomial (text or hex) instead of searching");
    pp->callback([&] { code = psik::emit(psik::cmd_primpoly(pp_n, pp_terms, pp_check), std::cout); });

    psik::SynthOptions so;
    CLI::App* sy = app.add_subcommand("synth", "synthesize a rotation kickback network");
    sy->add_option("n", so.n, "built-in modulus degree");
    sy->add_option("--poly", so.poly, "explicit modulus, text or hex");
    sy->add_option("--angle", so.angle, "b=<int> or theta=<radians>")->capture_default_str();
    sy->add_option("--mode", so.mode, "fixed or variable")
        ->check(CLI::IsMember({"fixed", "variable"}))
        ->capture_default_str();
    sy->add_option("--a", so.a, "variable mode: catalyst basis index, coprime to 2^n - 1");
    sy->add_flag("--parallel", so.parallel, "private control copies per kickback block");
    sy->add_option("--out", so.out, "write the circuit in text form here");
    sy->callback([&] { code = psik::emit(psik::cmd_synth(so), std::cout); });

    psik::VerifyOptions vo;
    CLI::App* ve = app.add_subcommand("verify", "simulate a synthesized circuit against its catalyst");
    ve->add_option("n", vo.n, "built-in modulus degree");
    ve->add_option("--poly", vo.poly, "explicit modulus, text or hex");
    ve->add_option("--k", vo.k, "catalyst index (fixed) or rotation exponent (variable)");
    ve->add_option("--a", vo.a, "variable mode: catalyst basis index");
    ve->add_option("--mode", vo.mode, "fixed or variable")
        ->check(CLI::IsMember({"fixed", "variable"}))
        ->capture_default_str();
    ve->add_option("--alpha-beta", vo.alpha_beta, "control amplitudes '<alpha>,<beta>', normalized");
    ve->add_flag("--parallel", vo.parallel, "private control copies per kickback block");
    ve->add_option("--tolerance", vo.tolerance, "phase and fidelity tolerance")->capture_default_str();
    ve->callback([&] { code = psik::emit(psik::cmd_verify(vo), std::cout); });

    int rs_n = 0;
    std::string rs_poly;
    std::optional<int> rs_kappa;
    CLI::App* rs = app.add_subcommand("resources", "cost report for one controlled step");
    rs->add_option("n", rs_n, "built-in modulus degree");
    rs->add_option("--poly", rs_poly, "explicit modulus, text or hex");
    rs->add_option("--kappa", rs_kappa, "also report under a Toffoli parallelism cap, kappa >= 2");
    rs->callback([&] { code = psik::emit(psik::cmd_resources(rs_n, rs_poly, rs_kappa), std::cout); });

    psik::PrepOptions po;
    po.n = 3;
    CLI::App* pr = app.add_subcommand("prep", "prepare catalyst states");
    pr->add_option("n", po.n, "built-in modulus degree")->capture_default_str();
    pr->add_option("--poly", po.poly, "explicit modulus, text or hex");
    pr->add_option("--k", po.k, "catalyst index")->capture_default_str();
    pr->add_option("--copies", po.copies, "frobenius: number of clones")->capture_default_str();
    pr->add_option("--method", po.method, "frobenius, dlog or qpe")
        ->check(CLI::IsMember({"frobenius", "dlog", "qpe"}))
        ->capture_default_str();
    pr->add_option("--seed", po.seed, "qpe: sampling seed")->capture_default_str();
    pr->add_option("--t-bits", po.t_bits, "qpe: phase register width")->capture_default_str();
    pr->add_option("--out", po.out, "write the prepared state here (binary)");
    pr->callback([&] { code = psik::emit(psik::cmd_prep(po), std::cout); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return code;
}
