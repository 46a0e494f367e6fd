#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hnswmerge/graph.hpp"
#include "hnswmerge/vecstore.hpp"

namespace hnswmerge {

struct SearchParams {
    std::size_t k = 1;  ///< result count
    std::size_t L = 1;  ///< beam width (ef); raised to k when smaller
};

/// Beam search over one layer.
///
/// Repeatedly expands the nearest unexpanded candidate, keeping the pool to the
/// L best seen so far, and stops once every pooled candidate has been expanded.
/// Each vertex is charged at most one distance evaluation per call. Seeds given
/// as Neighbor carry an already-known distance to q and are not re-evaluated.
///
/// Returns min(k, pool size) entries ascending by (distance, id).
/// Throws std::invalid_argument on empty seeds, k == 0, or a seed outside g.
std::vector<Neighbor> local_search(const LayerGraph& g, std::span<const float> q,
                                   std::span<const VectorId> seeds, SearchParams p,
                                   const MeteredDistance& dist);
std::vector<Neighbor> local_search(const LayerGraph& g, std::span<const float> q,
                                   std::span<const Neighbor> seeds, SearchParams p,
                                   const MeteredDistance& dist);

/// Top-down search: a k=1 beam search on each layer from the top down to
/// target_layer + 1, then a (k, L) beam search on target_layer. The descent
/// uses the caller's L on every layer.
///
/// Throws NotFoundError on an empty index, std::invalid_argument when
/// target_layer is outside [0, max_level()] or v0 is not on the top layer.
std::vector<Neighbor> hnsw_search(const HnswIndex& h, std::span<const float> q, VectorId v0,
                                  SearchParams p, int target_layer, const MeteredDistance& dist);

/// hnsw_search from h.entry().
std::vector<Neighbor> hnsw_search(const HnswIndex& h, std::span<const float> q, SearchParams p,
                                  int target_layer, const MeteredDistance& dist);

}  // namespace hnswmerge
