#include "cli.hpp"

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace qaoacut::cli {

int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"QAOA MaxCut performance and classical baseline toolkit", "qaoacut"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--seed", global.seed, "Base seed for every random choice");
    app.add_option("--out", global.out, "Output directory");
    app.add_option("--workers", global.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--mem-budget", global.mem_budget, "Contraction memory budget, e.g. 512M or 4G");
    app.add_option("--width-cap", global.width_cap, "Maximum contraction width")->check(CLI::PositiveNumber);

    GenerateOptions gen;
    auto *generate = app.add_subcommand("generate", "Random d-regular graphs as edge lists");
    generate->add_option("--n", gen.n, "Vertices")->required();
    generate->add_option("--d", gen.d, "Degree");
    generate->add_option("--count", gen.count, "Number of graphs");

    AnglesOptions ang;
    auto *angles = app.add_subcommand("angles", "Derive fixed angles on the p-tree");
    angles->add_option("--p", ang.p, "Depth")->required();
    angles->add_option("--restarts", ang.restarts, "Random restarts");
    angles->add_option("--stages", ang.stages, "Step-halving stages after pi/8");
    angles->add_flag("--chain", ang.chain, "Derive p = 1..P, warm-starting each from the previous depth");
    angles->add_option("--warm", ang.warm, "Angle file (depth p or p-1) used as an extra start");

    EvaluateOptions ev;
    auto *evaluate = app.add_subcommand("evaluate", "Expected cut via subgraph decomposition");
    evaluate->add_option("graphs", ev.graphs, "Edge-list files");
    evaluate->add_option("--sizes", ev.sizes, "Generate ensembles of these sizes instead")->delimiter(',');
    evaluate->add_option("--per-size", ev.per_size, "Graphs per ensemble size");
    evaluate->add_option("--angles", ev.angles, "Angle file")->required();
    evaluate->add_option("--p", ev.p, "Expected depth (checked against the angle file)");
    evaluate->add_option("--table", ev.table, "Expectation table CSV to start from");
    evaluate->add_flag("--no-fallback", ev.no_fallback, "Fail instead of contracting missing classes");
    evaluate->add_flag("--check-oracle", ev.check_oracle, "Compare against the statevector (small n)");

    ProfileOptions prof;
    auto *profile = app.add_subcommand("profile", "Anytime performance profiles of a classical solver");
    profile->add_option("--solver", prof.solver, "flip or external");
    profile->add_option("--command", prof.command, "External solver command ({seed} is substituted)");
    profile->add_option("graphs", prof.graphs, "Edge-list files");
    profile->add_option("--budget", prof.budget, "Seconds per run");
    profile->add_option("--repeats", prof.repeats, "Runs per graph");

    ThresholdOptions thr;
    double mu = 0.0;
    double gamma = 0.0;
    double fixed_delta = 0.0;
    auto *threshold = app.add_subcommand("threshold", "Threshold sampling frequencies from profiles");
    threshold->add_option("profiles", thr.profiles, "profile_trace.csv files");
    auto *mu_opt = threshold->add_option("--mu", mu, "Single-shot quantum cut fraction");
    threshold->add_option("--angles", thr.angles, "Angle file; mu is the p-tree value");
    threshold->add_option("--p", thr.p, "Depth reported in the output");
    auto *gamma_opt = threshold->add_option("--gamma", gamma, "Scaling constant gamma_p");
    threshold->add_option("--shot-seconds", thr.shot_seconds, "Quantum time per shot");
    threshold->add_flag("--printed-exponent", thr.printed_exponent,
                        "Use exp(n delta^2 / gamma^2) instead of the exact inverse");
    auto *delta_opt = threshold->add_option("--fixed-delta", fixed_delta, "Evaluate nu(n) at this gap using t0");

    BoundsOptions bnd;
    auto *bounds = app.add_subcommand("bounds", "With-high-probability cut fraction bounds");
    bounds->add_option("--n", bnd.ns, "Graph sizes")->delimiter(',');
    bounds->add_option("--n-min", bnd.n_min, "Smallest size (log-spaced range)");
    bounds->add_option("--n-max", bnd.n_max, "Largest size");
    bounds->add_option("--points", bnd.points, "Number of sizes in the range");
    bounds->add_option("--d", bnd.d, "Degree");
    bounds->add_option("--p", bnd.p, "Depth (defaults to the angle file)");
    bounds->add_option("--angles", bnd.angles, "Angle file")->required();
    bounds->add_option("--table", bnd.table, "Expectation table CSV (otherwise classes are contracted)");

    SampleOptions smp;
    auto *sample = app.add_subcommand("sample", "Statevector samples of the QAOA state");
    sample->add_option("--graph", smp.graph, "Edge-list file")->required();
    sample->add_option("--angles", smp.angles, "Angle file")->required();
    sample->add_option("--shots", smp.shots, "Number of samples");

    GammaOptions gam;
    auto *gamma_cmd = app.add_subcommand("gamma", "Estimate the scaling constant gamma_p");
    gamma_cmd->add_option("--angles", gam.angles, "Angle file")->required();
    gamma_cmd->add_option("--sizes", gam.sizes, "Graph sizes")->delimiter(',')->required();
    gamma_cmd->add_option("--per-size", gam.per_size, "Graphs per size");
    gamma_cmd->add_option("--route", gam.route, "tensor or statevector");

    std::vector<std::string> check_files;
    auto *check = app.add_subcommand("check-schema", "Validate output files");
    check->add_option("files", check_files, "Files to check")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::vector<std::string> args(argv, argv + argc);
    const std::string name = app.get_subcommands().front()->get_name();
    try {
        Manifest manifest(name, args, global.seed);
        manifest.global() = {{"seed", global.seed},
                             {"out", global.out},
                             {"workers", global.workers},
                             {"mem_budget", global.mem_budget},
                             {"width_cap", global.width_cap}};
        Context ctx{global, manifest, err};
        global.engine(); // validate --mem-budget early
        if (*generate) {
            cmd_generate(gen, ctx);
        } else if (*angles) {
            cmd_angles(ang, ctx);
        } else if (*evaluate) {
            cmd_evaluate(ev, ctx);
        } else if (*profile) {
            if (!cmd_profile(prof, ctx)) {
                err << "external solver violated the protocol\n";
                return kExitProtocol;
            }
        } else if (*threshold) {
            if (*mu_opt) {
                thr.mu = mu;
            }
            if (*gamma_opt) {
                thr.gamma = gamma;
            }
            if (*delta_opt) {
                thr.fixed_delta = fixed_delta;
            }
            cmd_threshold(thr, ctx);
        } else if (*bounds) {
            cmd_bounds(bnd, ctx);
        } else if (*sample) {
            cmd_sample(smp, ctx);
        } else if (*gamma_cmd) {
            cmd_gamma(gam, ctx);
        } else if (*check) {
            return cmd_check_schema(check_files, out) ? kExitOk : kExitFailure;
        }
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError &e) {
        err << "parameter error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapacityError &e) {
        err << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const ProtocolError &e) {
        err << "protocol error: " << e.what() << '\n';
        return kExitProtocol;
    } catch (const CoverageError &e) {
        err << "coverage error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace qaoacut::cli
