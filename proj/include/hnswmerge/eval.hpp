#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hnswmerge/build.hpp"
#include "hnswmerge/graph.hpp"
#include "hnswmerge/merge.hpp"
#include "hnswmerge/neighborhood.hpp"
#include "hnswmerge/vecstore.hpp"

namespace hnswmerge {

/// True k nearest base ids per query, ascending by distance.
struct GroundTruth {
    std::size_t k = 0;
    std::vector<std::vector<VectorId>> lists;
};

/// Exact neighbors of every query row among `base_ids`, via brute_force_knn.
GroundTruth compute_ground_truth(const Dataset& queries, std::span<const VectorId> base_ids,
                                 std::size_t k, const MeteredDistance& dist);

/// Mean over queries of |truth ∩ first k answers| / k. Short answer lists
/// count the missing entries as misses.
///
/// Throws std::invalid_argument if k differs from truth.k or the number of
/// answer lists differs from the number of queries.
double recall_at_k(const GroundTruth& truth, const std::vector<std::vector<VectorId>>& answers,
                   std::size_t k);

struct SweepRow {
    std::string algorithm;
    std::uint64_t merge_dc = 0;
    std::size_t L = 0;
    double recall = 0.0;
    double avg_search_dc = 0.0;
};

struct SweepReport {
    std::string comment;  ///< written after "# " on the first CSV line
    std::size_t k = 5;
    std::vector<SweepRow> rows;
};

/// One row per L: hnsw_search from the entry for every query, recall@k and
/// the mean number of "search" distance evaluations per query.
std::vector<SweepRow> search_sweep(const HnswIndex& h, const Dataset& base, const Dataset& queries,
                                   const GroundTruth& truth, std::size_t k,
                                   std::span<const std::size_t> Ls, const std::string& label,
                                   std::uint64_t merge_dc);

enum class MergeKind { kSigm, kNgm, kIgtm, kCgtm };

struct MergeVariant {
    std::string label;
    MergeKind kind = MergeKind::kIgtm;
    MergeParams params;  ///< ignored for kSigm
};

struct BenchmarkSetup {
    BuildParams build;
    StrategyKind strategy = StrategyKind::kRng;
    MetricKind metric = MetricKind::kSquaredEuclidean;
    double split = 0.5;  ///< the first floor(split * n) ids go to index a
    std::size_t k = 5;
    std::vector<std::size_t> Ls{32, 40, 50, 64, 72};
};

struct MergeOutcome {
    std::string label;
    std::uint64_t merge_dc = 0;
    MergeStats stats;
    HnswIndex index;
};

struct BenchmarkResult {
    SweepReport report;
    std::vector<MergeOutcome> merges;  ///< one per grid entry, in grid order
    std::uint64_t build_dc = 0;
};

/// Splits base into two disjoint id ranges, builds an index on each, runs
/// every grid entry and a full search_sweep on each merged index.
BenchmarkResult merge_benchmark(const Dataset& base, const Dataset& queries,
                                const GroundTruth& truth, const BenchmarkSetup& setup,
                                std::span<const MergeVariant> grid);

/// Runs a merge of a and b according to `variant`; for SIGM, `build` supplies
/// the insertion parameters.
HnswIndex run_merge(const HnswIndex& a, const HnswIndex& b, const MergeVariant& variant,
                    const BuildParams& build, const NeighborhoodStrategy& strategy,
                    const MeteredDistance& dist, MergeStats* stats = nullptr);

std::string_view to_string(MergeKind kind);
MergeKind parse_merge_kind(std::string_view name);

/// The four variants with default parameters: sigm, ngm, igtm, cgtm.
std::vector<MergeVariant> default_grid(const BuildParams& build, std::uint64_t seed);

/// Header comment, column line `algorithm,merge_dc,L,recall_at_<k>,avg_search_dc`,
/// then one line per row. Numbers are printed with fixed precision so equal
/// reports give equal bytes.
void write_report_csv(std::ostream& out, const SweepReport& report);

/// Mixture of `clusters` isotropic Gaussians; deterministic in seed.
Dataset make_gaussian_mixture(std::size_t n, std::size_t dim, std::size_t clusters,
                              std::uint64_t seed);

}  // namespace hnswmerge
