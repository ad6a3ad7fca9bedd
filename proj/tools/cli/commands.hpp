#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "output.hpp"
#include "qaoacut/errors.hpp"
#include "qaoacut/qaoa_network.hpp"

namespace qaoacut::cli {

/// Bad command-line usage; maps to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string out = ".";
    int workers = 0;
    std::string mem_budget = "4G";
    int width_cap = 28;

    EngineConfig engine() const;
};

std::uint64_t parse_bytes(const std::string &text);

struct Context {
    GlobalOptions global;
    Manifest &manifest;
    std::ostream &log;
};

struct GenerateOptions {
    std::size_t n = 0;
    int d = 3;
    std::size_t count = 1;
};

struct AnglesOptions {
    int p = 0;
    int restarts = 32;
    int stages = 3;
    bool chain = false;
    std::string warm;
};

struct EvaluateOptions {
    std::vector<std::string> graphs;
    std::vector<std::size_t> sizes;
    std::size_t per_size = 10;
    std::string angles;
    int p = 0;
    std::string table;
    bool no_fallback = false;
    bool check_oracle = false;
};

struct ProfileOptions {
    std::string solver = "flip";
    std::string command;
    std::vector<std::string> graphs;
    double budget = 0.1;
    std::size_t repeats = 1;
};

struct ThresholdOptions {
    std::vector<std::string> profiles;
    std::optional<double> mu;
    std::string angles;
    int p = 0;
    std::optional<double> gamma;
    double shot_seconds = 1.0 / 5000.0;
    bool printed_exponent = false;
    std::optional<double> fixed_delta;
};

struct BoundsOptions {
    std::vector<double> ns;
    double n_min = 0;
    double n_max = 0;
    int points = 0;
    int d = 3;
    int p = 0;
    std::string angles;
    std::string table;
};

struct SampleOptions {
    std::string graph;
    std::string angles;
    std::size_t shots = 1000;
};

struct GammaOptions {
    std::string angles;
    std::vector<std::size_t> sizes;
    std::size_t per_size = 4;
    std::string route = "tensor";
};

void cmd_generate(const GenerateOptions &o, Context &ctx);
void cmd_angles(const AnglesOptions &o, Context &ctx);
void cmd_evaluate(const EvaluateOptions &o, Context &ctx);
/// Returns false if any external profile violated the protocol.
bool cmd_profile(const ProfileOptions &o, Context &ctx);
void cmd_threshold(const ThresholdOptions &o, Context &ctx);
void cmd_bounds(const BoundsOptions &o, Context &ctx);
void cmd_sample(const SampleOptions &o, Context &ctx);
void cmd_gamma(const GammaOptions &o, Context &ctx);
/// Returns false if any file failed validation.
bool cmd_check_schema(const std::vector<std::string> &files, std::ostream &out);

} // namespace qaoacut::cli
