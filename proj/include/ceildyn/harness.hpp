#pragma once

/**
 * @file harness.hpp
 * @brief Experiment plumbing behind the command-line tool: record searches,
 * row formatting (json, csv, b-file, table) and a content-addressed result cache.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ceildyn/arith.hpp"

namespace ceildyn {

inline constexpr const char* kEngineVersion = "ceildyn-1.0.0";

enum class OutputFormat { json, csv, bfile, table };

OutputFormat parse_format(const std::string& name);
std::string format_name(OutputFormat f);

struct ExperimentConfig {
    std::string command;
    std::optional<std::string> num;
    std::optional<std::string> den;
    std::optional<std::string> r;
    std::vector<std::int64_t> offsets;
    std::uint64_t scan = 0;
    std::uint64_t depth = 0;
    std::uint64_t window = 0;
    bool auto_grow = false;
    std::uint64_t max_steps = 0;
    unsigned workers = 1;
    OutputFormat format = OutputFormat::table;
    std::string cache_dir;  // empty disables caching
    std::string extra;      // subcommand-specific arguments such as a record kind

    /// Canonical JSON of every parameter that can change the output. The
    /// worker count and cache directory are left out: neither affects the bytes.
    std::string canonical() const;
    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

struct Row {
    std::string input;
    std::optional<BigInt> index;  // b-file index
    std::optional<std::uint64_t> theta;
    std::optional<std::string> reached;
    std::optional<std::uint64_t> digits;
    bool unresolved = false;
};

/// One row per line for table; a JSON array of {input, theta, reached?,
/// digits?, unresolved}; csv with a header; b-file "index theta" lines.
std::string format_rows(const std::vector<Row>& rows, OutputFormat format);

/// "index value\n" per entry. Rejects non-increasing indices and values
/// longer than 1000 decimal digits.
std::string export_bfile(const std::vector<std::pair<BigInt, BigInt>>& sequence);

enum class RecordKind { theta_d3, theta_succ, theta_mult };

RecordKind parse_record_kind(const std::string& name);

struct RecordList {
    std::vector<std::pair<BigInt, std::uint64_t>> entries;  // (argument, record value)
    std::vector<BigInt> unresolved;                         // arguments skipped as unresolved
    std::uint64_t scanned = 0;
};

/// Record values over the kind's natural range up to `bound`:
///   theta_d3    theta(l/3), l = 1..bound, windowed with `window` digits
///   theta_succ  theta((d+1)/d), d = 1..bound, windowed with automatic growth
///   theta_mult  first integer step of (4/3)ceil(x) from n, n = 0..bound
RecordList records(RecordKind kind, std::uint64_t bound, std::uint64_t window = 25, unsigned workers = 1);

/// Hex SHA-256 of the canonical config and engine version.
std::string cache_key(const ExperimentConfig& config);

/// Returns the cached output for `config` when present, otherwise runs
/// `compute` and stores its output atomically. Caching is skipped when the
/// config has no cache directory.
std::string cached_run(const ExperimentConfig& config, const std::function<std::string()>& compute, bool* hit = nullptr);

}  // namespace ceildyn
