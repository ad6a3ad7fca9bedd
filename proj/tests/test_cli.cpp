#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/cli.hpp"
#include "cli/output.hpp"
#include "qaoacut/graph.hpp"

using namespace qaoacut;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "qaoacut");
    std::vector<char *> argv;
    for (auto &a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out, err;
    CliRun r;
    r.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path fresh_dir(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("qaoacut_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Rows of a CSV as column-name maps.
std::vector<std::map<std::string, std::string>> read_csv(const fs::path &p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    auto split = [](const std::string &s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string f;
        while (std::getline(ss, f, ',')) {
            out.push_back(f);
        }
        if (!s.empty() && s.back() == ',') {
            out.emplace_back();
        }
        return out;
    };
    const auto header = split(line);
    std::vector<std::map<std::string, std::string>> rows;
    while (std::getline(in, line)) {
        const auto fields = split(line);
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) {
            row[header[i]] = fields[i];
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST(Cli, GenerateK4) {
    const fs::path dir = fresh_dir("k4");
    ASSERT_EQ(run({"--out", dir.string(), "generate", "--n", "4"}).code, cli::kExitOk);
    std::ifstream in(dir / "graph_n4_d3_000.txt");
    const RegularGraph g = read_edge_list(in);
    EXPECT_EQ(g.num_edges(), 6u);
    EXPECT_TRUE(fs::exists(dir / "generate_manifest.json"));
}

TEST(Cli, GenerateIsByteIdentical) {
    const fs::path a = fresh_dir("gen_a");
    const fs::path b = fresh_dir("gen_b");
    ASSERT_EQ(run({"--seed", "9", "--out", a.string(), "generate", "--n", "256", "--count", "100"}).code, 0);
    ASSERT_EQ(run({"--seed", "9", "--out", b.string(), "generate", "--n", "256", "--count", "100"}).code, 0);
    for (int i : {0, 42, 99}) {
        char name[64];
        std::snprintf(name, sizeof name, "graph_n256_d3_%03d.txt", i);
        EXPECT_EQ(slurp(a / name), slurp(b / name));
        EXPECT_FALSE(slurp(a / name).empty());
    }
}

TEST(Cli, GenerateParityError) {
    const fs::path dir = fresh_dir("parity");
    const CliRun r = run({"--out", dir.string(), "generate", "--n", "5"});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("even"), std::string::npos) << r.err;
}

TEST(Cli, AnglesTreeValueAndManifest) {
    const fs::path dir = fresh_dir("angles");
    ASSERT_EQ(run({"--seed", "1", "--out", dir.string(), "angles", "--p", "1"}).code, 0);
    const auto j = nlohmann::json::parse(slurp(dir / "angles_p1.json"));
    EXPECT_EQ(j["p"], 1);
    EXPECT_NEAR(j["tree_value"].get<double>(), 0.6925, 1e-3);
    const auto m = nlohmann::json::parse(slurp(dir / "angles_manifest.json"));
    EXPECT_EQ(m["command"], "angles");
    EXPECT_EQ(m["seed"], 1);
    EXPECT_TRUE(m.contains("versions"));
    EXPECT_EQ(run({"--out", dir.string(), "angles", "--p", "0"}).code, cli::kExitUsage);
}

TEST(Cli, EvaluateOracleCheck) {
    const fs::path dir = fresh_dir("eval");
    ASSERT_EQ(run({"--seed", "3", "--out", dir.string(), "generate", "--n", "12", "--count", "2"}).code, 0);
    ASSERT_EQ(run({"--seed", "1", "--out", dir.string(), "angles", "--p", "2", "--restarts", "4"}).code, 0);
    const CliRun r = run({"--out", dir.string(), "evaluate", "--angles", (dir / "angles_p2.json").string(),
                       "--check-oracle", (dir / "graph_n12_d3_000.txt").string(),
                       (dir / "graph_n12_d3_001.txt").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(dir / "evaluate.csv");
    ASSERT_EQ(rows.size(), 2u);
    for (const auto &row : rows) {
        EXPECT_LT(std::abs(std::stod(row.at("oracle_diff"))), 1e-8);
    }
    EXPECT_TRUE(run({"check-schema", (dir / "evaluate.csv").string(), (dir / "expectation_table.csv").string()})
                    .code == 0);
}

TEST(Cli, EvaluateUsageErrors) {
    const fs::path dir = fresh_dir("eval_err");
    ASSERT_EQ(run({"--out", dir.string(), "generate", "--n", "12"}).code, 0);
    const std::string graph = (dir / "graph_n12_d3_000.txt").string();
    EXPECT_EQ(run({"--out", dir.string(), "evaluate", "--angles", (dir / "none.json").string(), graph}).code,
              cli::kExitUsage);
    EXPECT_EQ(run({"--out", dir.string(), "evaluate", graph}).code, cli::kExitUsage);
}

TEST(Cli, ProfileFlipAndSchema) {
    const fs::path dir = fresh_dir("profile");
    ASSERT_EQ(run({"--out", dir.string(), "generate", "--n", "200", "--count", "3"}).code, 0);
    std::vector<std::string> args = {"--out", dir.string(), "profile", "--budget", "0.05"};
    for (int i = 0; i < 3; ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "graph_n200_d3_%03d.txt", i);
        args.push_back((dir / name).string());
    }
    const CliRun r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    const CliRun check =
        run({"check-schema", (dir / "profile_trace.csv").string(), (dir / "profile_summary.csv").string()});
    EXPECT_EQ(check.code, 0) << check.out;
    const auto summary = read_csv(dir / "profile_summary.csv");
    ASSERT_EQ(summary.size(), 3u);
    for (const auto &row : summary) {
        EXPECT_EQ(row.at("status"), "ok");
    }
    EXPECT_EQ(run({"--out", dir.string(), "profile"}).code, cli::kExitUsage);
}

TEST(Cli, ProfileExternalProtocolViolation) {
    const fs::path dir = fresh_dir("profile_ext");
    ASSERT_EQ(run({"--out", dir.string(), "generate", "--n", "10"}).code, 0);
    const fs::path script = dir / "liar.sh";
    std::ofstream(script) << "#!/bin/sh\ncat >/dev/null\necho 'IMPROVED 0.01 99'\n";
    fs::permissions(script, fs::perms::owner_all);
    const CliRun r = run({"--out", dir.string(), "profile", "--solver", "external", "--command", script.string(),
                       "--budget", "1", (dir / "graph_n10_d3_000.txt").string()});
    EXPECT_EQ(r.code, cli::kExitProtocol);
    const CliRun ok = run({"--out", dir.string(), "profile", "--solver", "external", "--command",
                        std::string(QAOACUT_FLIP_PATH) + " --seed {seed}", "--budget", "0.2",
                        (dir / "graph_n10_d3_000.txt").string()});
    EXPECT_EQ(ok.code, 0) << ok.err;
}

TEST(Cli, ThresholdBelowQuantumGivesSingleShot) {
    const fs::path dir = fresh_dir("threshold");
    ASSERT_EQ(run({"--out", dir.string(), "generate", "--n", "100", "--count", "2"}).code, 0);
    ASSERT_EQ(run({"--out", dir.string(), "profile", "--budget", "0.02", (dir / "graph_n100_d3_000.txt").string(),
                   (dir / "graph_n100_d3_001.txt").string()})
                  .code,
              0);
    const std::string trace = (dir / "profile_trace.csv").string();
    EXPECT_EQ(run({"--out", dir.string(), "threshold", "--mu", "0.99", trace}).code, cli::kExitUsage);
    const CliRun r = run({"--out", dir.string(), "threshold", "--mu", "0.99", "--gamma", "0.2", trace});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(dir / "threshold.csv");
    ASSERT_FALSE(rows.empty());
    for (const auto &row : rows) {
        EXPECT_EQ(row.at("k"), "1");
        EXPECT_NEAR(std::stod(row.at("nu_hz")) * std::stod(row.at("t_seconds")), 1.0, 1e-6);
    }
    EXPECT_EQ(run({"check-schema", (dir / "threshold.csv").string()}).code, 0);
}

TEST(Cli, BoundsCollapseAndCoverage) {
    const fs::path dir = fresh_dir("bounds");
    ASSERT_EQ(run({"--seed", "1", "--out", dir.string(), "angles", "--p", "2", "--restarts", "4"}).code, 0);
    const std::string angles = (dir / "angles_p2.json").string();
    const CliRun r = run({"--out", dir.string(), "bounds", "--angles", angles, "--n-min", "100", "--n-max", "1e6",
                       "--points", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(dir / "bounds.csv");
    ASSERT_EQ(rows.size(), 5u);
    const auto j = nlohmann::json::parse(slurp(dir / "angles_p2.json"));
    const double f = j["tree_value"].get<double>();
    EXPECT_NEAR(std::stod(rows.back().at("cut_lower")), f, 1e-3);
    EXPECT_NEAR(std::stod(rows.back().at("cut_upper")), f, 1e-3);
    EXPECT_EQ(run({"check-schema", (dir / "bounds.csv").string()}).code, 0);
    const CliRun cov = run({"--out", dir.string(), "bounds", "--angles", angles, "--p", "3", "--n", "1000"});
    EXPECT_EQ(cov.code, cli::kExitFailure);
    EXPECT_NE(cov.err.find("coverage"), std::string::npos) << cov.err;
}

TEST(Cli, SampleCapacity) {
    const fs::path dir = fresh_dir("sample");
    ASSERT_EQ(run({"--out", dir.string(), "generate", "--n", "26"}).code, 0);
    ASSERT_EQ(run({"--seed", "1", "--out", dir.string(), "angles", "--p", "1", "--restarts", "2"}).code, 0);
    const CliRun r = run({"--out", dir.string(), "sample", "--graph", (dir / "graph_n26_d3_000.txt").string(),
                       "--angles", (dir / "angles_p1.json").string()});
    EXPECT_EQ(r.code, cli::kExitCapacity);
}

TEST(Cli, SampleOutputsValidate) {
    const fs::path dir = fresh_dir("sample_ok");
    ASSERT_EQ(run({"--out", dir.string(), "generate", "--n", "12"}).code, 0);
    ASSERT_EQ(run({"--seed", "1", "--out", dir.string(), "angles", "--p", "1", "--restarts", "2"}).code, 0);
    const CliRun r = run({"--out", dir.string(), "sample", "--graph", (dir / "graph_n12_d3_000.txt").string(),
                       "--angles", (dir / "angles_p1.json").string(), "--shots", "50"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(run({"check-schema", (dir / "samples.csv").string(), (dir / "samples.txt").string()}).code, 0);
}

TEST(Cli, CheckSchemaRejectsBadFiles) {
    const fs::path dir = fresh_dir("schema");
    std::ofstream(dir / "bad.csv") << "n,d,p,m_tree_lower,cut_lower,cut_upper,mode\n10,3,2,1,0.9,0.5,tree\n";
    std::ofstream(dir / "unknown.csv") << "a,b\n1,2\n";
    std::ofstream(dir / "bits.txt") << "0101\n011\n";
    EXPECT_EQ(run({"check-schema", (dir / "bad.csv").string()}).code, cli::kExitFailure);
    EXPECT_EQ(run({"check-schema", (dir / "unknown.csv").string()}).code, cli::kExitFailure);
    EXPECT_EQ(run({"check-schema", (dir / "bits.txt").string()}).code, cli::kExitFailure);
}

TEST(Cli, UnknownSubcommandIsUsageError) {
    EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(run({}).code, cli::kExitUsage);
}
