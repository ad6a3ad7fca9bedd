#include "output.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "qaoacut/errors.hpp"

namespace qaoacut::cli {

namespace fs = std::filesystem;

std::string Schema::header() const {
    std::string h;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) {
            h += ',';
        }
        h += columns[i].name;
    }
    return h;
}

const std::vector<Schema> &schemas() {
    using T = ColumnType;
    static const std::vector<Schema> all = {
        {"evaluate",
         {{"graph", T::Text},
          {"n", T::Int},
          {"m", T::Int},
          {"p", T::Int},
          {"expectation", T::Real},
          {"cut_fraction", T::Fraction},
          {"classes", T::Int},
          {"tree_count", T::Int},
          {"oracle_diff", T::OptionalReal}}},
        {"ensemble",
         {{"n", T::Int},
          {"p", T::Int},
          {"graphs", T::Int},
          {"median", T::Fraction},
          {"variance", T::Real},
          {"min", T::Fraction},
          {"max", T::Fraction}}},
        {"expectation_table", {{"key", T::Hex}, {"p", T::Int}, {"f", T::Fraction}, {"width", T::Int}}},
        {"profile_trace",
         {{"instance", T::Text},
          {"n", T::Int},
          {"m", T::Int},
          {"elapsed_seconds", T::Real},
          {"cut", T::Int},
          {"cut_fraction", T::Fraction}}},
        {"profile_summary",
         {{"instance", T::Text},
          {"n", T::Int},
          {"m", T::Int},
          {"t0_seconds", T::OptionalReal},
          {"zero_time_quality", T::OptionalReal},
          {"final_cut_fraction", T::OptionalReal},
          {"points", T::Int},
          {"status", T::Status}}},
        {"threshold",
         {{"n", T::Int},
          {"p", T::Int},
          {"t_seconds", T::Real},
          {"delta", T::Real},
          {"k", T::Int},
          {"nu_hz", T::Real},
          {"region", T::Region}}},
        {"bounds",
         {{"n", T::Int},
          {"d", T::Int},
          {"p", T::Int},
          {"m_tree_lower", T::Real},
          {"cut_lower", T::Fraction},
          {"cut_upper", T::Fraction},
          {"mode", T::Mode}}},
        {"gamma", {{"n", T::Int}, {"p", T::Int}, {"graphs", T::Int}, {"gamma", T::Real}, {"route", T::Text}}},
        {"samples",
         {{"n", T::Int},
          {"p", T::Int},
          {"shots", T::Int},
          {"mean_cut_fraction", T::Fraction},
          {"best_cut_fraction", T::Fraction},
          {"exact_cut_fraction", T::Fraction}}},
    };
    return all;
}

const Schema &schema(const std::string &kind) {
    for (const auto &s : schemas()) {
        if (s.kind == kind) {
            return s;
        }
    }
    throw Error("unknown schema " + kind);
}

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

CsvWriter::CsvWriter(const fs::path &path, const Schema &schema) : out_(path), width_(schema.columns.size()) {
    if (!out_) {
        throw InputError("cannot write " + path.string());
    }
    out_ << schema.header() << '\n';
}

CsvWriter &CsvWriter::operator<<(const std::string &field) {
    if (field.find_first_of(",\n\"") != std::string::npos) {
        throw InputError("CSV field may not contain commas, quotes or newlines: " + field);
    }
    if (field_ > 0) {
        out_ << ',';
    }
    out_ << field;
    ++field_;
    return *this;
}

CsvWriter &CsvWriter::operator<<(double value) { return *this << format_real(value); }
CsvWriter &CsvWriter::operator<<(long long value) { return *this << std::to_string(value); }
CsvWriter &CsvWriter::operator<<(unsigned long long value) { return *this << std::to_string(value); }

CsvWriter &CsvWriter::operator<<(std::optional<double> value) {
    return *this << (value ? format_real(*value) : std::string{});
}

void CsvWriter::end_row() {
    if (field_ != width_) {
        throw Error("CSV row has " + std::to_string(field_) + " fields, schema has " + std::to_string(width_));
    }
    out_ << '\n';
    field_ = 0;
}

namespace {

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_real(const std::string &s, double &v) {
    if (s.empty()) {
        return false;
    }
    char *end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && !std::isnan(v);
}

bool parse_int(const std::string &s) {
    if (s.empty()) {
        return false;
    }
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) {
        return false;
    }
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
            return false;
        }
    }
    return true;
}

std::string check_field(const std::string &field, ColumnType type) {
    double v = 0.0;
    switch (type) {
    case ColumnType::Text:
        return field.empty() ? "empty text" : "";
    case ColumnType::Int:
        return parse_int(field) ? "" : "not an integer: '" + field + "'";
    case ColumnType::Real:
        return parse_real(field, v) ? "" : "not a number: '" + field + "'";
    case ColumnType::OptionalReal:
        return field.empty() || parse_real(field, v) ? "" : "not a number: '" + field + "'";
    case ColumnType::Fraction:
        if (!parse_real(field, v)) {
            return "not a number: '" + field + "'";
        }
        return v >= 0.0 && v <= 1.0 ? "" : "fraction outside [0,1]: " + field;
    case ColumnType::Region:
        return field == "better-faster" || field == "better-slower" || field == "worse-faster" ||
                       field == "worse-slower"
                   ? ""
                   : "unknown region '" + field + "'";
    case ColumnType::Mode:
        return field == "tree" || field == "cycle" ? "" : "unknown mode '" + field + "'";
    case ColumnType::Status:
        return field == "ok" || field == "empty" || field == "invalid" ? "" : "unknown status '" + field + "'";
    case ColumnType::Hex:
        return !field.empty() && field.size() % 2 == 0 && field.find_first_not_of("0123456789abcdef") == std::string::npos
                   ? ""
                   : "not a hex string";
    }
    return "";
}

void check_rows(const Schema &s, const std::vector<std::vector<std::string>> &rows, SchemaReport &report) {
    auto col = [&](const std::string &name) {
        for (std::size_t i = 0; i < s.columns.size(); ++i) {
            if (s.columns[i].name == name) {
                return i;
            }
        }
        return s.columns.size();
    };
    if (s.kind == "profile_trace") {
        std::map<std::string, std::pair<double, long long>> last;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const std::string &inst = rows[r][col("instance")];
            const double t = std::strtod(rows[r][col("elapsed_seconds")].c_str(), nullptr);
            const long long cut = std::strtoll(rows[r][col("cut")].c_str(), nullptr, 10);
            if (auto it = last.find(inst); it != last.end()) {
                if (!(t > it->second.first) || cut < it->second.second) {
                    report.problems.push_back("row " + std::to_string(r + 2) + ": trace of " + inst +
                                              " is not monotone");
                }
            }
            last[inst] = {t, cut};
        }
    } else if (s.kind == "bounds") {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (std::strtod(rows[r][col("cut_lower")].c_str(), nullptr) >
                std::strtod(rows[r][col("cut_upper")].c_str(), nullptr)) {
                report.problems.push_back("row " + std::to_string(r + 2) + ": cut_lower > cut_upper");
            }
        }
    }
}

SchemaReport check_samples(std::ifstream &in, const std::string &first) {
    SchemaReport report;
    report.kind = "bitstrings";
    std::string line = first;
    const std::size_t width = first.size();
    std::size_t lineno = 1;
    do {
        if (line.size() != width || line.empty() || line.find_first_not_of("01") != std::string::npos) {
            report.problems.push_back("line " + std::to_string(lineno) + ": not a 0/1 string of length " +
                                      std::to_string(width));
        }
        ++report.rows;
        ++lineno;
    } while (std::getline(in, line));
    return report;
}

} // namespace

SchemaReport check_file(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    SchemaReport report;
    std::string header;
    if (!std::getline(in, header)) {
        report.problems.push_back("empty file");
        return report;
    }
    if (!header.empty() && header.find_first_not_of("01") == std::string::npos) {
        return check_samples(in, header);
    }
    const Schema *match = nullptr;
    for (const auto &s : schemas()) {
        if (s.header() == header) {
            match = &s;
        }
    }
    if (match == nullptr) {
        report.problems.push_back("header matches no known schema: " + header);
        return report;
    }
    report.kind = match->kind;
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split(line);
        if (fields.size() != match->columns.size()) {
            report.problems.push_back("line " + std::to_string(lineno) + ": " + std::to_string(fields.size()) +
                                      " fields, expected " + std::to_string(match->columns.size()));
            continue;
        }
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const std::string why = check_field(fields[i], match->columns[i].type);
            if (!why.empty()) {
                report.problems.push_back("line " + std::to_string(lineno) + ", " + match->columns[i].name + ": " +
                                          why);
            }
        }
        rows.push_back(std::move(fields));
    }
    report.rows = rows.size();
    if (report.problems.empty()) {
        check_rows(*match, rows, report);
    }
    return report;
}

Manifest::Manifest(std::string command, std::vector<std::string> argv, std::uint64_t seed)
    : command_(std::move(command)), argv_(std::move(argv)), seed_(seed) {}

void Manifest::add_output(const fs::path &path) { outputs_.push_back(path.filename().string()); }

fs::path Manifest::write(const fs::path &out_dir) const {
    nlohmann::json j;
    j["command"] = command_;
    j["argv"] = argv_;
    j["seed"] = seed_;
    j["global"] = global_;
    j["config"] = config_;
    j["outputs"] = outputs_;
    j["summary"] = summary_;
    j["versions"] = {
        {"qaoacut", "0.1.0"},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"boost", BOOST_LIB_VERSION},
        {"compiler", __VERSION__},
    };
    const fs::path path = out_dir / (command_ + "_manifest.json");
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
    return path;
}

void append_record(const fs::path &out_dir, const std::string &kind, const nlohmann::json &payload,
                   const fs::path &manifest) {
    std::ofstream out(out_dir / "records.jsonl", std::ios::app);
    if (!out) {
        throw InputError("cannot append to " + (out_dir / "records.jsonl").string());
    }
    nlohmann::json j{{"kind", kind}, {"manifest", manifest.filename().string()}, {"payload", payload}};
    out << j.dump() << '\n';
}

} // namespace qaoacut::cli
