#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qaoacut::cli {

enum class ColumnType { Text, Int, Real, Fraction, OptionalReal, Region, Mode, Status, Hex };

struct Column {
    std::string name;
    ColumnType type;
};

struct Schema {
    std::string kind;
    std::vector<Column> columns;

    std::string header() const;
};

/// Every CSV the CLI writes, keyed by kind.
const std::vector<Schema> &schemas();
const Schema &schema(const std::string &kind);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path &path, const Schema &schema);

    CsvWriter &operator<<(const std::string &field);
    CsvWriter &operator<<(const char *field) { return *this << std::string(field); }
    CsvWriter &operator<<(double value);
    CsvWriter &operator<<(long long value);
    CsvWriter &operator<<(unsigned long long value);
    CsvWriter &operator<<(int value) { return *this << static_cast<long long>(value); }
    CsvWriter &operator<<(std::size_t value) { return *this << static_cast<unsigned long long>(value); }
    CsvWriter &operator<<(std::optional<double> value);
    void end_row();

private:
    std::ofstream out_;
    std::size_t width_;
    std::size_t field_ = 0;
};

std::string format_real(double value);

struct SchemaReport {
    std::string kind; // empty if the header matched nothing
    std::size_t rows = 0;
    std::vector<std::string> problems;
};

/// Validates a CSV (detected by header) or a bitstring sample file.
SchemaReport check_file(const std::filesystem::path &path);

/// Run metadata written next to the outputs of every command.
class Manifest {
public:
    Manifest(std::string command, std::vector<std::string> argv, std::uint64_t seed);

    nlohmann::json &config() { return config_; }
    nlohmann::json &global() { return global_; }
    void add_output(const std::filesystem::path &path);
    nlohmann::json &summary() { return summary_; }

    /// Writes <out>/<command>_manifest.json and returns its path.
    std::filesystem::path write(const std::filesystem::path &out_dir) const;

private:
    std::string command_;
    std::vector<std::string> argv_;
    std::uint64_t seed_;
    nlohmann::json config_ = nlohmann::json::object();
    nlohmann::json global_ = nlohmann::json::object();
    nlohmann::json summary_ = nlohmann::json::object();
    std::vector<std::string> outputs_;
};

/// Appends one JSON line to <out>/records.jsonl.
void append_record(const std::filesystem::path &out_dir, const std::string &kind, const nlohmann::json &payload,
                   const std::filesystem::path &manifest);

} // namespace qaoacut::cli
