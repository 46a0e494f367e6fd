#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "hnswmerge/graph.hpp"
#include "hnswmerge/neighborhood.hpp"
#include "hnswmerge/vecstore.hpp"

namespace hnswmerge {

enum class MergeAlgorithm { kNgm, kIgtm, kCgtm };

std::string_view to_string(MergeAlgorithm algo);
MergeAlgorithm parse_merge_algorithm(std::string_view name);

struct MergeParams {
    std::uint32_t m = 16;             ///< neighborhood size, layers >= 1
    std::uint32_t m0 = 32;            ///< neighborhood size, layer 0
    std::uint32_t search_ef = 20;     ///< NGM search beam
    std::uint32_t jump_ef = 20;       ///< beam of the top-down search at a random restart
    std::uint32_t local_ef = 32;      ///< beam of the per-vertex local search
    std::uint32_t next_step_k = 8;    ///< how many nearby vertices are considered as the next one
    std::uint32_t next_step_ef = 16;  ///< beam of the next-vertex local search (IGTM)
    std::uint32_t m_carry = 16;       ///< size of the candidate pool carried between iterations
    std::uint64_t seed = 42;

    std::size_t cap(int layer) const noexcept { return layer == 0 ? m0 : m; }

    /// Throws std::invalid_argument on zero values, next_step_ef < next_step_k
    /// or local_ef < m.
    void validate() const;
};

/// Counters collected while merging; mostly for tests and reports.
struct MergeStats {
    std::size_t restarts = 0;       ///< top-down searches started from a random vertex
    std::size_t constructions = 0;  ///< neighborhoods built
    std::vector<VectorId> processing_order;
};

// Layer merges. Each returns a graph over V^a ∪ V^b where every vertex gets
// exactly one neighborhood construction. If one side has no vertices on
// layer l, the other side's layer is returned unchanged.

/// For every vertex of either layer, candidates are its own out-list plus a
/// full top-down search into the other index.
LayerGraph ngm_layer(const HnswIndex& a, const HnswIndex& b, int layer, const MergeParams& params,
                     const NeighborhoodStrategy& strategy, const MeteredDistance& dist,
                     MergeStats* stats = nullptr);

/// Walks each layer in turn, choosing the next vertex near the current one
/// inside the same graph and reusing the previous candidates from the other
/// graph as local-search seeds. Falls back to a random restart with a
/// top-down search when no unprocessed neighbor is close.
LayerGraph igtm_layer(const HnswIndex& a, const HnswIndex& b, int layer, const MergeParams& params,
                      const NeighborhoodStrategy& strategy, const MeteredDistance& dist,
                      MergeStats* stats = nullptr);

/// Like igtm_layer, but keeps candidate pools in both graphs and picks the
/// next vertex from either one.
LayerGraph cgtm_layer(const HnswIndex& a, const HnswIndex& b, int layer, const MergeParams& params,
                      const NeighborhoodStrategy& strategy, const MeteredDistance& dist,
                      MergeStats* stats = nullptr);

/// Layer-by-layer merge of two indices with disjoint vertex sets.
///
/// The result has max(l_max^a, l_max^b) + 1 layers, keeps every vertex's
/// level, uses the lowest id on the top layer as entry, and caps degrees at
/// params.m / params.m0. Distances are charged to the "merge" phase.
/// Merging with an empty index returns a copy of the other one.
HnswIndex general_merge(const HnswIndex& a, const HnswIndex& b, MergeAlgorithm algo,
                        const MergeParams& params, const NeighborhoodStrategy& strategy,
                        const MeteredDistance& dist, MergeStats* stats = nullptr);

}  // namespace hnswmerge
