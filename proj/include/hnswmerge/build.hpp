#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "hnswmerge/graph.hpp"
#include "hnswmerge/neighborhood.hpp"
#include "hnswmerge/vecstore.hpp"

namespace hnswmerge {

/// floor(-ln(u) * mL) for u in (0, 1].
int level_for_uniform(double u, double mL);

/// Draws u uniformly from (0, 1] (53-bit resolution) and maps it through
/// level_for_uniform. The sequence depends only on the generator state.
int assign_level(std::mt19937_64& rng, double mL);

/// Standard HNSW insertion of v at a fixed level, using h.params() for the
/// degree caps and the construction beam.
///
/// Descends with a k=1 beam of width ef_construction down to level + 1, then
/// on every layer <= level collects ef_construction candidates, picks v's
/// out-list with `strategy` and adds reverse links, re-pruning any neighbor
/// list that overflows its cap. v becomes the entry if it tops the index.
///
/// Throws std::invalid_argument if v is already in h.
void insert_at_level(HnswIndex& h, VectorId v, int level, const NeighborhoodStrategy& strategy,
                     const MeteredDistance& dist);

/// insert_at_level with a level drawn from `rng` and h.params().mL.
void insert(HnswIndex& h, VectorId v, std::mt19937_64& rng, const NeighborhoodStrategy& strategy,
            const MeteredDistance& dist);

/// Sequential insertion of `ids` in the given order. Levels come from a
/// generator seeded with params.seed, so the result is deterministic.
HnswIndex build_index(std::span<const VectorId> ids, const BuildParams& params,
                      const NeighborhoodStrategy& strategy, const MeteredDistance& dist);

/// Baseline merge: copies the larger index (ties go to `a`) and inserts every
/// vertex of the other one, in ascending id order, at its original level.
/// Distances are charged to the "merge" phase of dist's meter.
///
/// Throws std::invalid_argument if the vertex sets overlap.
HnswIndex sigm_merge(const HnswIndex& a, const HnswIndex& b, const BuildParams& params,
                     const NeighborhoodStrategy& strategy, const MeteredDistance& dist);

}  // namespace hnswmerge
