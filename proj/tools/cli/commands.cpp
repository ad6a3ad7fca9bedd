#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "qaoacut/advantage.hpp"
#include "qaoacut/classical.hpp"
#include "qaoacut/parallel.hpp"
#include "qaoacut/qaoa_eval.hpp"
#include "qaoacut/rng.hpp"
#include "qaoacut/statevector.hpp"

namespace qaoacut::cli {

namespace fs = std::filesystem;
using nlohmann::json;

EngineConfig GlobalOptions::engine() const {
    EngineConfig c;
    c.limits.width_cap = width_cap;
    c.limits.memory_budget_bytes = parse_bytes(mem_budget);
    c.seed = seed;
    return c;
}

std::uint64_t parse_bytes(const std::string &text) {
    if (text.empty()) {
        throw UsageError("empty memory budget");
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::logic_error &) {
        throw UsageError("bad memory budget '" + text + "'");
    }
    const std::string suffix = text.substr(used);
    double scale = 1.0;
    if (suffix == "K" || suffix == "k") {
        scale = 1024.0;
    } else if (suffix == "M" || suffix == "m") {
        scale = 1024.0 * 1024.0;
    } else if (suffix == "G" || suffix == "g") {
        scale = 1024.0 * 1024.0 * 1024.0;
    } else if (!suffix.empty()) {
        throw UsageError("bad memory budget suffix '" + suffix + "'");
    }
    if (!(value > 0.0)) {
        throw UsageError("memory budget must be positive");
    }
    return static_cast<std::uint64_t>(value * scale);
}

namespace {

fs::path out_dir(const Context &ctx) {
    fs::path dir(ctx.global.out);
    fs::create_directories(dir);
    return dir;
}

AngleFile load_angles(const std::string &path) {
    if (path.empty()) {
        throw UsageError("an angle file is required (--angles)");
    }
    if (!fs::exists(path)) {
        throw UsageError("angle file not found: " + path);
    }
    return read_angle_file(path);
}

RegularGraph load_graph(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open graph file " + path);
    }
    try {
        return read_edge_list(in);
    } catch (const InputError &e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string instance_name(const std::string &path) { return fs::path(path).stem().string(); }

json angles_json(const QaoaAngles &a) { return json{{"p", a.p()}, {"gammas", a.gammas()}, {"betas", a.betas()}}; }

void finish(Context &ctx, const fs::path &dir, const std::string &kind, const json &payload) {
    const fs::path manifest = ctx.manifest.write(dir);
    if (!kind.empty()) {
        append_record(dir, kind, payload, manifest);
    }
}

} // namespace

// ---------------------------------------------------------------------------

void cmd_generate(const GenerateOptions &o, Context &ctx) {
    const fs::path dir = out_dir(ctx);
    ctx.manifest.config() = {{"n", o.n}, {"d", o.d}, {"count", o.count}};
    for (std::size_t i = 0; i < o.count; ++i) {
        const std::uint64_t seed = CounterRng::derive(ctx.global.seed, o.n, i);
        const RegularGraph g = generate_regular(o.n, o.d, seed);
        char name[96];
        std::snprintf(name, sizeof name, "graph_n%zu_d%d_%03zu.txt", o.n, o.d, i);
        std::ofstream out(dir / name);
        write_edge_list(out, g);
        ctx.manifest.add_output(dir / name);
    }
    ctx.log << "wrote " << o.count << " graph(s) to " << dir.string() << '\n';
    finish(ctx, dir, "", {});
}

// ---------------------------------------------------------------------------

void cmd_angles(const AnglesOptions &o, Context &ctx) {
    if (o.p < 1) {
        throw UsageError("--p must be at least 1");
    }
    const fs::path dir = out_dir(ctx);
    ctx.manifest.config() = {{"p", o.p},         {"restarts", o.restarts}, {"stages", o.stages},
                             {"chain", o.chain}, {"warm", o.warm}};
    std::optional<QaoaAngles> warm;
    if (!o.warm.empty()) {
        const AngleFile prev = load_angles(o.warm);
        warm = prev.angles.p() == o.p ? prev.angles : interpolate_angles(prev.angles);
        if (warm->p() != o.p) {
            throw UsageError("warm-start file has p=" + std::to_string(prev.angles.p()) + ", need p or p-1");
        }
    }
    const int first = o.chain ? 1 : o.p;
    json payload = json::array();
    for (int p = first; p <= o.p; ++p) {
        AngleSearchOptions search;
        search.restarts = o.restarts;
        search.stages = o.stages;
        search.seed = CounterRng::derive(ctx.global.seed, static_cast<std::uint64_t>(p));
        search.engine = ctx.global.engine();
        if (o.chain && p > first && warm) {
            search.warm_start = interpolate_angles(*warm);
        } else if (!o.chain && warm) {
            search.warm_start = warm;
        }
        const FixedAngleSet set = derive_fixed_angles(p, search);
        warm = set.angles;
        json j = json::parse(angle_file_json(set.angles, "derived", set.tree_value));
        j["derivation"] = {{"method", "multi-start coordinate descent on the p-tree"},
                           {"seed", set.derivation.seed},
                           {"restarts", set.derivation.restarts},
                           {"evaluations", set.derivation.evaluations},
                           {"best_restart", set.derivation.best_restart},
                           {"agreeing_restarts", set.derivation.agreeing_restarts},
                           {"converged", set.derivation.converged},
                           {"width", set.derivation.width}};
        const fs::path path = dir / ("angles_p" + std::to_string(p) + ".json");
        std::ofstream(path) << j.dump(2) << '\n';
        ctx.manifest.add_output(path);
        payload.push_back({{"p", p}, {"tree_value", set.tree_value}, {"angles", angles_json(set.angles)},
                           {"converged", set.derivation.converged}});
        ctx.log << "p=" << p << " tree_value=" << format_real(set.tree_value)
                << (set.derivation.converged ? "" : " (restarts disagree; best kept)") << '\n';
    }
    finish(ctx, dir, "angles", payload);
}

// ---------------------------------------------------------------------------

void cmd_evaluate(const EvaluateOptions &o, Context &ctx) {
    const AngleFile af = load_angles(o.angles);
    const QaoaAngles &angles = af.angles;
    if (o.p != 0 && o.p != angles.p()) {
        throw UsageError("--p " + std::to_string(o.p) + " does not match the angle file (p=" +
                         std::to_string(angles.p()) + ")");
    }
    if (o.graphs.empty() && o.sizes.empty()) {
        throw UsageError("no graphs given (pass edge-list files or --sizes)");
    }
    const fs::path dir = out_dir(ctx);
    const EngineConfig engine = ctx.global.engine();
    ctx.manifest.config() = {{"graphs", o.graphs},       {"sizes", o.sizes},
                             {"per_size", o.per_size},   {"angles", angles_json(angles)},
                             {"table", o.table},         {"fallback", !o.no_fallback},
                             {"check_oracle", o.check_oracle}};
    ExpectationTable table;
    if (!o.table.empty()) {
        std::ifstream in(o.table);
        if (!in) {
            throw UsageError("table file not found: " + o.table);
        }
        table.read_csv(in, angles);
    }

    json payload = json::array();
    if (!o.graphs.empty()) {
        struct Row {
            RegularGraph g;
            GraphExpectation e;
            std::optional<double> oracle;
        };
        std::vector<std::optional<Row>> rows(o.graphs.size());
        parallel_for(o.graphs.size(), ctx.global.workers, [&](std::size_t i) {
            RegularGraph g = load_graph(o.graphs[i]);
            GraphExpectation e = graph_expectation(g, angles, table, !o.no_fallback, engine);
            std::optional<double> diff;
            if (o.check_oracle) {
                const CostMoments m = exact_expectation(simulate_state(g, angles), g);
                diff = std::abs(m.mean - e.expectation);
            }
            rows[i] = Row{std::move(g), e, diff};
        });
        const fs::path path = dir / "evaluate.csv";
        CsvWriter csv(path, schema("evaluate"));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Row &r = *rows[i];
            csv << instance_name(o.graphs[i]) << r.g.num_vertices() << r.g.num_edges() << angles.p()
                << r.e.expectation << r.e.cut_fraction << r.e.classes << static_cast<unsigned long long>(r.e.tree_count)
                << r.oracle;
            csv.end_row();
            json rec{{"graph", instance_name(o.graphs[i])}, {"expectation", r.e.expectation},
                     {"cut_fraction", r.e.cut_fraction}, {"classes", r.e.classes}, {"tree_count", r.e.tree_count}};
            if (r.oracle) {
                rec["oracle_diff"] = *r.oracle;
            }
            payload.push_back(rec);
        }
        ctx.manifest.add_output(path);
        ctx.log << "evaluated " << rows.size() << " graph(s)\n";
    }
    if (!o.sizes.empty()) {
        const auto stats = ensemble_median(angles, o.sizes, o.per_size, ctx.global.seed, table, ctx.global.workers,
                                           3, engine);
        const fs::path path = dir / "ensemble.csv";
        CsvWriter csv(path, schema("ensemble"));
        for (const auto &s : stats) {
            csv << s.n << angles.p() << s.graphs << s.median << s.variance << s.min << s.max;
            csv.end_row();
            payload.push_back({{"n", s.n}, {"graphs", s.graphs}, {"median", s.median}, {"variance", s.variance}});
            ctx.log << "n=" << s.n << " median=" << format_real(s.median) << '\n';
        }
        ctx.manifest.add_output(path);
    }
    const fs::path table_path = dir / "expectation_table.csv";
    {
        std::ofstream out(table_path);
        table.write_csv(out, angles);
    }
    ctx.manifest.add_output(table_path);
    finish(ctx, dir, "expectation", payload);
}

// ---------------------------------------------------------------------------

bool cmd_profile(const ProfileOptions &o, Context &ctx) {
    if (o.graphs.empty()) {
        throw UsageError("no graphs given to profile");
    }
    if (!(o.budget > 0.0)) {
        throw UsageError("--budget must be positive");
    }
    if (o.solver != "flip" && o.solver != "external") {
        throw UsageError("--solver must be 'flip' or 'external'");
    }
    if (o.solver == "external" && o.command.empty()) {
        throw UsageError("--solver external needs --command");
    }
    if (o.repeats == 0) {
        throw UsageError("--repeats must be positive");
    }
    const fs::path dir = out_dir(ctx);
    ctx.manifest.config() = {{"solver", o.solver},
                             {"command", o.command},
                             {"graphs", o.graphs},
                             {"budget", o.budget},
                             {"repeats", o.repeats}};
    const std::size_t total = o.graphs.size() * o.repeats;
    std::vector<PerformanceProfile> profiles(total);
    std::vector<std::size_t> vertices(total);
    parallel_for(total, ctx.global.workers, [&](std::size_t job) {
        const std::size_t gi = job / o.repeats;
        const std::size_t rep = job % o.repeats;
        const std::uint64_t seed = CounterRng::derive(ctx.global.seed, gi, rep);
        std::string name = instance_name(o.graphs[gi]);
        if (o.repeats > 1) {
            name += "#" + std::to_string(rep);
        }
        // The clock starts before the graph is read so t0 includes parsing.
        const auto start = Clock::now();
        const RegularGraph g = load_graph(o.graphs[gi]);
        vertices[job] = g.num_vertices();
        if (o.solver == "flip") {
            profiles[job] = flip_multistart(g, o.budget, seed, name, start);
        } else {
            profiles[job] = run_external(o.command, g, o.budget, seed, name);
        }
    });

    const fs::path trace_path = dir / "profile_trace.csv";
    const fs::path summary_path = dir / "profile_summary.csv";
    CsvWriter trace(trace_path, schema("profile_trace"));
    CsvWriter summary(summary_path, schema("profile_summary"));
    bool all_valid = true;
    json payload = json::array();
    for (std::size_t i = 0; i < total; ++i) {
        const PerformanceProfile &p = profiles[i];
        const double m = static_cast<double>(p.edges());
        for (const auto &pt : p.trace()) {
            trace << p.instance() << vertices[i] << p.edges() << pt.elapsed << pt.cut << pt.cut / m;
            trace.end_row();
        }
        const char *status = p.status() == ProfileStatus::Ok ? "ok" : p.status() == ProfileStatus::Empty ? "empty"
                                                                                                           : "invalid";
        std::optional<double> final_fraction;
        if (p.final_cut()) {
            final_fraction = *p.final_cut() / m;
        }
        summary << p.instance() << vertices[i] << p.edges() << p.t0() << p.zero_time_quality() << final_fraction
                << p.trace().size() << status;
        summary.end_row();
        for (const auto &d : p.diagnostics()) {
            ctx.log << p.instance() << ": " << d << '\n';
        }
        if (p.status() == ProfileStatus::Invalid) {
            all_valid = false;
        }
        json rec{{"instance", p.instance()}, {"seed", p.seed()}, {"status", status}, {"points", p.trace().size()}};
        if (p.final_cut()) {
            rec["final_cut"] = *p.final_cut();
        }
        payload.push_back(rec);
    }
    ctx.manifest.add_output(trace_path);
    ctx.manifest.add_output(summary_path);
    ctx.log << "profiled " << total << " run(s)\n";
    finish(ctx, dir, "profile", payload);
    return all_valid;
}

// ---------------------------------------------------------------------------

namespace {

struct LoadedProfile {
    std::size_t n = 0;
    PerformanceProfile profile;
};

std::vector<LoadedProfile> read_profiles(const std::vector<std::string> &files) {
    std::vector<LoadedProfile> out;
    std::map<std::string, std::size_t> index;
    const std::string header = schema("profile_trace").header();
    for (const auto &file : files) {
        std::ifstream in(file);
        if (!in) {
            throw UsageError("profile file not found: " + file);
        }
        std::string line;
        if (!std::getline(in, line) || line != header) {
            throw InputError(file + ": not a profile_trace CSV");
        }
        int lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) {
                continue;
            }
            std::stringstream ss(line);
            std::string inst, n, m, t, cut, frac;
            std::getline(ss, inst, ',');
            std::getline(ss, n, ',');
            std::getline(ss, m, ',');
            std::getline(ss, t, ',');
            std::getline(ss, cut, ',');
            std::getline(ss, frac);
            try {
                const std::string key = file + "\n" + inst;
                auto it = index.find(key);
                if (it == index.end()) {
                    it = index.emplace(key, out.size()).first;
                    out.push_back({std::stoul(n), PerformanceProfile(inst, 0, std::stoul(m))});
                }
                out[it->second].profile.record(std::stod(t), std::stoi(cut));
            } catch (const std::logic_error &e) {
                throw InputError(file + " line " + std::to_string(lineno) + ": " + e.what());
            }
        }
    }
    if (out.empty()) {
        throw UsageError("no profile rows found");
    }
    return out;
}

} // namespace

void cmd_threshold(const ThresholdOptions &o, Context &ctx) {
    if (!o.gamma) {
        throw UsageError("--gamma is required");
    }
    if (!(*o.gamma > 0.0)) {
        throw UsageError("--gamma must be positive");
    }
    if (o.profiles.empty()) {
        throw UsageError("no profile files given");
    }
    double mu = 0.0;
    int p = o.p;
    if (o.mu) {
        mu = *o.mu;
    } else if (!o.angles.empty()) {
        const AngleFile af = load_angles(o.angles);
        p = af.angles.p();
        mu = edge_expectation(tree_subgraph(3, p), af.angles, ctx.global.engine());
    } else {
        throw UsageError("give the quantum mean via --mu or --angles");
    }
    const fs::path dir = out_dir(ctx);
    const InversionMode mode = o.printed_exponent ? InversionMode::Printed : InversionMode::Consistent;
    ctx.manifest.config() = {{"profiles", o.profiles},         {"mu", mu},
                             {"p", p},                         {"gamma", *o.gamma},
                             {"shot_seconds", o.shot_seconds}, {"printed_exponent", o.printed_exponent}};
    if (o.fixed_delta) {
        ctx.manifest.config()["fixed_delta"] = *o.fixed_delta;
    }
    const std::vector<LoadedProfile> loaded = read_profiles(o.profiles);

    const fs::path path = dir / "threshold.csv";
    CsvWriter csv(path, schema("threshold"));
    json payload = json::array();
    auto emit = [&](std::size_t n, double t, double delta, const SampleRequirement &k, double nu, Region region) {
        csv << n << p << t << delta << static_cast<unsigned long long>(k.k) << nu << region_name(region);
        csv.end_row();
        payload.push_back({{"n", n}, {"t_seconds", t}, {"delta", delta}, {"k", k.k}, {"log_k", k.log_k},
                           {"saturated", k.saturated}, {"nu_hz", nu}, {"region", region_name(region)}});
    };

    if (o.fixed_delta) {
        // nu(n) at a fixed gap, with t the median first-solution time per size.
        std::map<std::size_t, std::vector<double>> t0_by_n;
        for (const auto &lp : loaded) {
            if (auto t0 = lp.profile.t0()) {
                t0_by_n[lp.n].push_back(*t0);
            }
        }
        for (const auto &[n, times] : t0_by_n) {
            const double t = median_of(times);
            const SampleRequirement k = required_samples(*o.gamma, static_cast<double>(n), *o.fixed_delta, mode);
            const double k_real = k.saturated ? std::exp(k.log_k) : static_cast<double>(k.k);
            const double nu = threshold_frequency(k_real, t);
            const bool better = *o.fixed_delta <= 0.0;
            const bool faster = k_real * o.shot_seconds <= t;
            const Region region = better ? (faster ? Region::BetterFaster : Region::BetterSlower)
                                         : (faster ? Region::WorseFaster : Region::WorseSlower);
            emit(n, t, *o.fixed_delta, k, nu, region);
        }
    } else {
        std::map<std::size_t, std::vector<PerformanceProfile>> by_n;
        for (const auto &lp : loaded) {
            by_n[lp.n].push_back(lp.profile);
        }
        AdvantageOptions opts;
        opts.shot_seconds = o.shot_seconds;
        opts.mode = mode;
        for (const auto &[n, profs] : by_n) {
            const AdvantageCurve curve = advantage_curve(profs, mu, *o.gamma, static_cast<double>(n), opts);
            for (const auto &q : curve.points) {
                emit(n, q.classical_t, q.delta, q.k, q.nu_hz, q.region);
            }
            const AdvantageQuery &best = curve.points[curve.argmin];
            ctx.log << "n=" << n << ": minimum nu " << format_real(best.nu_hz) << " Hz at t="
                    << format_real(best.classical_t) << " s\n";
            ctx.manifest.summary()["argmin_t_by_n"][std::to_string(n)] = best.classical_t;
        }
    }
    ctx.manifest.add_output(path);
    finish(ctx, dir, "threshold", payload);
}

// ---------------------------------------------------------------------------

void cmd_bounds(const BoundsOptions &o, Context &ctx) {
    const AngleFile af = load_angles(o.angles);
    const QaoaAngles &angles = af.angles;
    const int p = o.p == 0 ? angles.p() : o.p;
    const std::vector<NamedClass> classes = standard_classes(o.d, p);
    if (p != angles.p()) {
        std::vector<std::string> names;
        for (const auto &c : classes) {
            names.push_back(c.name);
        }
        std::string list;
        for (const auto &nm : names) {
            list += (list.empty() ? "" : ", ") + nm;
        }
        throw CoverageError("angles cover p=" + std::to_string(angles.p()) + " only; missing p=" +
                                std::to_string(p) + " classes: " + list,
                            names);
    }
    std::vector<double> ns = o.ns;
    if (ns.empty()) {
        if (!(o.n_min > 0) || !(o.n_max >= o.n_min) || o.points < 1) {
            throw UsageError("give --n values or --n-min/--n-max/--points");
        }
        for (int i = 0; i < o.points; ++i) {
            const double frac = o.points == 1 ? 0.0 : static_cast<double>(i) / (o.points - 1);
            double n = std::exp(std::log(o.n_min) + frac * (std::log(o.n_max) - std::log(o.n_min)));
            n = std::round(n);
            if (static_cast<long long>(n) * o.d % 2 != 0) {
                n += 1;
            }
            if (ns.empty() || n != ns.back()) {
                ns.push_back(n);
            }
        }
    }
    const fs::path dir = out_dir(ctx);
    ctx.manifest.config() = {{"n", ns}, {"d", o.d}, {"p", p}, {"angles", angles_json(angles)}, {"table", o.table}};
    ExpectationTable table;
    const bool from_file = !o.table.empty();
    if (from_file) {
        std::ifstream in(o.table);
        if (!in) {
            throw UsageError("table file not found: " + o.table);
        }
        table.read_csv(in, angles);
    } else {
        std::vector<AnchoredSubgraph> subs;
        for (const auto &c : classes) {
            subs.push_back(c.subgraph);
        }
        for (const auto &f : subgraph_table(angles, subs, table, ctx.global.engine())) {
            ctx.log << "class " << classes[f.index].name << " failed: " << f.message << '\n';
        }
    }
    WhpInputs inputs;
    std::vector<std::string> missing;
    const std::string digest = angles.digest();
    for (const auto &c : classes) {
        const auto entry = table.find(canonical_key(c.subgraph, 256), digest);
        if (!entry) {
            missing.push_back(c.name);
            continue;
        }
        if (c.name == "tree") {
            inputs.f_tree = entry->f;
        } else {
            inputs.f_cycle[std::stoi(c.name.substr(5))] = entry->f;
        }
    }
    if (!missing.empty() && missing.front() == "tree") {
        std::string list;
        for (const auto &nm : missing) {
            list += (list.empty() ? "" : ", ") + nm;
        }
        throw CoverageError("expectation table lacks classes: " + list, missing);
    }
    if (!missing.empty()) {
        ctx.log << "cycle classes missing; using tree-only bounds\n";
    }
    const fs::path path = dir / "bounds.csv";
    CsvWriter csv(path, schema("bounds"));
    json payload = json::array();
    for (double n : ns) {
        const WhpBounds b = whp_bounds(n, o.d, p, inputs);
        csv << static_cast<long long>(n) << o.d << p << b.m_tree_lower << b.cut_lower << b.cut_upper
            << (b.cycle_refined ? "cycle" : "tree");
        csv.end_row();
        payload.push_back({{"n", n}, {"cut_lower", b.cut_lower}, {"cut_upper", b.cut_upper},
                           {"refinement_dropped", b.refinement_dropped}});
    }
    ctx.manifest.add_output(path);
    finish(ctx, dir, "bounds", payload);
}

// ---------------------------------------------------------------------------

void cmd_sample(const SampleOptions &o, Context &ctx) {
    if (o.graph.empty()) {
        throw UsageError("--graph is required");
    }
    if (o.shots == 0) {
        throw UsageError("--shots must be positive");
    }
    const AngleFile af = load_angles(o.angles);
    const RegularGraph g = load_graph(o.graph);
    const fs::path dir = out_dir(ctx);
    ctx.manifest.config() = {{"graph", o.graph}, {"angles", angles_json(af.angles)}, {"shots", o.shots}};
    const StateVector sv = simulate_state(g, af.angles);
    const std::vector<BitMask> samples = sample_bitstrings(sv, o.shots, ctx.global.seed);
    const fs::path bits_path = dir / "samples.txt";
    {
        std::ofstream out(bits_path);
        write_bitstrings(out, samples, static_cast<int>(g.num_vertices()));
    }
    const double m = static_cast<double>(g.num_edges());
    double total = 0.0;
    int best = 0;
    for (BitMask z : samples) {
        const int c = cost_of(z, g);
        total += c;
        best = std::max(best, c);
    }
    const double exact = exact_expectation(sv, g).mean / m;
    const fs::path path = dir / "samples.csv";
    CsvWriter csv(path, schema("samples"));
    csv << g.num_vertices() << af.angles.p() << o.shots << total / o.shots / m << best / m << exact;
    csv.end_row();
    ctx.manifest.add_output(bits_path);
    ctx.manifest.add_output(path);
    ctx.log << "mean sampled cut fraction " << format_real(total / o.shots / m) << " (exact "
            << format_real(exact) << ")\n";
    finish(ctx, dir, "", {});
}

// ---------------------------------------------------------------------------

void cmd_gamma(const GammaOptions &o, Context &ctx) {
    const AngleFile af = load_angles(o.angles);
    if (o.sizes.empty() || o.per_size == 0) {
        throw UsageError("--sizes and a positive --per-size are required");
    }
    if (o.route != "tensor" && o.route != "statevector") {
        throw UsageError("--route must be 'tensor' or 'statevector'");
    }
    const fs::path dir = out_dir(ctx);
    ctx.manifest.config() = {
        {"angles", angles_json(af.angles)}, {"sizes", o.sizes}, {"per_size", o.per_size}, {"route", o.route}};
    const GammaEstimate est =
        estimate_gamma(af.angles, o.sizes, o.per_size, ctx.global.seed,
                       o.route == "tensor" ? GammaRoute::Tensor : GammaRoute::Statevector, ctx.global.workers, 3,
                       ctx.global.engine());
    const fs::path path = dir / "gamma.csv";
    CsvWriter csv(path, schema("gamma"));
    for (const auto &s : est.sizes) {
        csv << s.n << af.angles.p() << s.graphs << s.gamma << o.route;
        csv.end_row();
    }
    ctx.manifest.add_output(path);
    ctx.manifest.summary() = {{"pooled", est.pooled}, {"max_relative_spread", est.max_relative_spread}};
    ctx.log << "pooled gamma " << format_real(est.pooled) << ", max relative spread "
            << format_real(est.max_relative_spread) << '\n';
    finish(ctx, dir, "gamma",
           {{"p", af.angles.p()}, {"pooled", est.pooled}, {"max_relative_spread", est.max_relative_spread}});
}

// ---------------------------------------------------------------------------

bool cmd_check_schema(const std::vector<std::string> &files, std::ostream &out) {
    if (files.empty()) {
        throw UsageError("no files to check");
    }
    bool ok = true;
    for (const auto &f : files) {
        const SchemaReport r = check_file(f);
        if (r.problems.empty()) {
            out << f << ": ok (" << r.kind << ", " << r.rows << " rows)\n";
            continue;
        }
        ok = false;
        out << f << ": " << r.problems.size() << " problem(s)" << (r.kind.empty() ? "" : " (" + r.kind + ")")
            << '\n';
        for (const auto &pr : r.problems) {
            out << "  " << pr << '\n';
        }
    }
    return ok;
}

} // namespace qaoacut::cli
