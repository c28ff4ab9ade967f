#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqs/errors.hpp"
#include "sqs/io.hpp"

namespace fs = std::filesystem;
using namespace sqs;

namespace {

struct CommonArgs {
    std::string spec_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::uint64_t seed = 42;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool spec_required) {
    auto* spec_opt = cmd->add_option("--spec", args.spec_path, "problem spec file (key=value)");
    if (spec_required) spec_opt->required();
    cmd->add_option("--out", args.out_dir, "output directory (created if absent)");
    cmd->add_option("--set", args.overrides, "spec override KEY=VALUE (repeatable)");
    cmd->add_option("--seed", args.seed, "random seed");
}

ProblemSpec load_with_overrides(const CommonArgs& args) {
    ProblemSpec spec = load_spec(args.spec_path);
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidSpec("--set expects KEY=VALUE, got '" + kv + "'");
        apply_override(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return spec;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    fs::create_directories(args.out_dir);
    return (fs::path(args.out_dir) / name).string();
}

std::vector<double> parse_lambda_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const auto comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int run_verify_transform(const CommonArgs& args, int samples) {
    const PropertyReport rep = default_kernel().verify_properties(samples, 1e6, args.seed);
    write_json(to_json(rep), out_path(args, "report.json"));
    int passed = 0;
    for (const auto& it : rep.items) passed += it.pass ? 1 : 0;
    std::printf("verify-transform: %d/12 properties pass, k0=%.6f, worst round-trip=%.3e\n", passed,
                rep.k0_estimate, rep.worst_round_trip);
    return rep.all_pass() ? 0 : 4;
}

int run_check_compat(const CommonArgs& args, int levels) {
    const ProblemSpec spec = load_with_overrides(args);
    ensure_valid(spec);
    const GridFunction phi1 = first_eigenfunction(spec.mesh).first;
    const DualityReport rep = classify_duality(spec, phi1, levels);
    write_json(to_json(rep), out_path(args, "report.json"));
    const bool convergent = rep.plain.convergent();
    std::printf("check-compat: %s (duality agreement: %s)\n",
                convergent ? "convergent" : "divergent", rep.agree() ? "yes" : "no");
    return convergent ? 0 : 3;
}

int run_fiber_scan(const CommonArgs& args) {
    const ProblemSpec spec = load_with_overrides(args);
    ensure_valid(spec);
    const GridFunction phi1 = first_eigenfunction(spec.mesh).first;
    const FiberProfile prof = project_to_nehari(phi1, spec);
    write_fiber_csv(prof, out_path(args, "fiber.csv"));
    write_json({{"t_min", prof.t_min},
                {"phi_min", prof.phi_min},
                {"shape", prof.shape == FiberShape::SingleMin ? "SingleMin" : "MultiCritical"},
                {"bracket", {prof.bracket.first, prof.bracket.second}}},
               out_path(args, "report.json"));
    std::printf("fiber-scan: t_min=%.9g phi_min=%.9g shape=%s\n", prof.t_min, prof.phi_min,
                prof.shape == FiberShape::SingleMin ? "SingleMin" : "MultiCritical");
    return 0;
}

int run_solve(const CommonArgs& args) {
    const ProblemSpec spec = load_with_overrides(args);
    SolveOptions opts;
    opts.seed = args.seed;
    const SolveReport rep = solve(spec, std::nullopt, opts);
    write_json(to_json(rep), out_path(args, "report.json"));
    write_csv(rep.v, out_path(args, "solution_v.csv"));
    write_csv(rep.u, out_path(args, "solution_u.csv"));
    std::printf("solve: converged=%s iters=%d residual=%.3e nehari_gap=%.3e energy=%.9g\n",
                rep.converged ? "true" : "false", rep.iters, rep.residual_norm, rep.nehari_gap,
                rep.energy.total);
    return rep.converged ? 0 : 4;
}

int run_sweep(const CommonArgs& args, const std::string& lambdas_csv) {
    const ProblemSpec spec = load_with_overrides(args);
    SolveOptions opts;
    opts.seed = args.seed;
    const SweepReport rep = sweep_lambda(spec, parse_lambda_list(lambdas_csv), opts);
    write_json(to_json(rep), out_path(args, "report.json"));
    write_sweep_csv(rep, out_path(args, "sweep.csv"));
    bool all_converged = true;
    for (const auto& e : rep.entries) all_converged = all_converged && e.report.converged;
    std::printf("sweep-lambda: %zu points, ordering=%s energy_decreasing=%s h1_convergence=%s\n",
                rep.entries.size(), rep.monotone_ordering ? "true" : "false",
                rep.energy_decreasing ? "true" : "false", rep.h1_convergence ? "true" : "false");
    return all_converged ? 0 : 4;
}

int run_uniqueness(const CommonArgs& args, int starts) {
    const ProblemSpec spec = load_with_overrides(args);
    SolveOptions opts;
    opts.seed = args.seed;
    const UniquenessReport rep = uniqueness_probe(spec, starts, opts);
    write_json(to_json(rep), out_path(args, "report.json"));
    bool all_converged = true;
    for (const auto& r : rep.runs) all_converged = all_converged && r.converged;
    std::printf("uniqueness: starts=%d max_pairwise_h1=%.3e regime=%s pass=%s\n", starts,
                rep.max_pairwise_h1, rep.in_uniqueness_regime ? "asserted" : "exploratory",
                rep.uniqueness_pass ? "true" : "false");
    return all_converged ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational solver for the singular quasilinear Schrodinger problem "
                 "via the dual change of variables"};
    app.require_subcommand(1);

    CommonArgs args;
    int samples = 10000;
    int levels = 5;
    int starts = 5;
    std::string lambdas_csv = "0,0.01,0.1,1,10";

    auto* verify = app.add_subcommand("verify-transform", "check the analytic properties of g");
    add_common(verify, args, false);
    verify->add_option("--samples", samples, "number of log-uniform samples");

    auto* compat = app.add_subcommand("check-compat", "classify the compatibility integrals");
    add_common(compat, args, true);
    compat->add_option("--levels", levels, "mesh-doubling levels");

    auto* fiber = app.add_subcommand("fiber-scan", "scan the fiber map of the first eigenfunction");
    add_common(fiber, args, true);

    auto* solve_cmd = app.add_subcommand("solve", "minimize the dual energy");
    add_common(solve_cmd, args, true);

    auto* sweep = app.add_subcommand("sweep-lambda", "solve the lambda-family with warm starts");
    add_common(sweep, args, true);
    sweep->add_option("--lambdas", lambdas_csv, "comma-separated lambda grid (must include 0)");

    auto* uniq = app.add_subcommand("uniqueness", "multi-start uniqueness probe");
    add_common(uniq, args, true);
    uniq->add_option("--starts", starts, "number of random starts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return run_verify_transform(args, samples);
        if (compat->parsed()) return run_check_compat(args, levels);
        if (fiber->parsed()) return run_fiber_scan(args);
        if (solve_cmd->parsed()) return run_solve(args);
        if (sweep->parsed()) return run_sweep(args, lambdas_csv);
        if (uniq->parsed()) return run_uniqueness(args, starts);
    } catch (const InvalidSpec& e) {
        std::fprintf(stderr, "invalid spec: %s\n", e.what());
        return 2;
    } catch (const NoCompatibility& e) {
        std::fprintf(stderr, "no compatibility: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
