#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hnswmerge/eval.hpp"

namespace hnswmerge {

/// Synthetic Gaussian-mixture data used when no base file is given. The last
/// `queries` rows are held out as the query set.
struct SyntheticSpec {
    std::size_t n = 20000;
    std::size_t queries = 100;
    std::size_t dim = 128;
    std::size_t clusters = 32;
};

/// Everything `bench-all` needs. Loaded from an INI-style file:
///
///   [data]    base, queries, ground_truth (paths; base empty => synthetic)
///             n, queries_n, dim, clusters (synthetic only)
///   [run]     seed, split, k, Ls (comma list), strategy, metric, output
///   [build]   M, M0, efc
///   [merge]   algorithms (comma list of sigm|ngm|igtm|cgtm), search_ef,
///             jump_ef, local_ef, next_step_k, next_step_ef, m_carry
///   [variant.NAME]  algo plus any [merge] key; adds one labelled grid entry
///
/// Missing keys keep their defaults. Environment variables are not read.
struct RunConfig {
    std::filesystem::path base;
    std::filesystem::path queries;
    std::optional<std::filesystem::path> ground_truth;
    SyntheticSpec synthetic;
    std::filesystem::path output = "report.csv";
    std::uint64_t seed = 42;
    BenchmarkSetup setup;
    std::vector<MergeVariant> grid;

    bool is_synthetic() const { return base.empty(); }

    /// Throws std::invalid_argument on a split outside (0, 1), an empty grid,
    /// bad merge parameters or a base file without a query file.
    void validate() const;

    /// Re-seeds everything from `seed`: the build, every grid entry and the
    /// synthetic data.
    void set_seed(std::uint64_t seed);
};

/// Parses the file. Throws std::runtime_error on unreadable or malformed
/// files and std::invalid_argument on bad values.
RunConfig load_run_config(const std::filesystem::path& path);

struct BenchmarkData {
    Dataset base;
    Dataset queries;
    GroundTruth truth;
};

/// Reads (or generates) base and queries and loads or computes the ground
/// truth. Computed truth is charged to a private "ground-truth" meter.
BenchmarkData load_benchmark_data(const RunConfig& cfg);

/// merge_benchmark over cfg.grid with cfg.setup.
BenchmarkResult run_benchmark(const RunConfig& cfg, const BenchmarkData& data);

/// Parses "32,40,50" into {32, 40, 50}. Throws std::invalid_argument.
std::vector<std::size_t> parse_size_list(const std::string& text);

}  // namespace hnswmerge
