#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hnswmerge/vecstore.hpp"

namespace hnswmerge {

enum class StrategyKind { kKnn, kRng };

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);

// Candidate lists passed to the constructors below hold distances to v_star.
// They are normalized first: sorted by (distance, id), duplicate ids dropped,
// and v_star itself removed.

/// The k nearest candidates, ascending.
std::vector<VectorId> knn_construct(VectorId v_star, std::span<const Neighbor> candidates,
                                    std::size_t k);

/// Relative-neighborhood pruning. Walks candidates in ascending order and
/// admits v only if rho(v_star, v) < rho(v, w) for every admitted w; stops
/// after m admissions. The rho(v, w) evaluations go through `dist`.
std::vector<VectorId> rng_construct(VectorId v_star, std::span<const Neighbor> candidates,
                                    std::size_t m, const MeteredDistance& dist);

/// Attaches rho(v_star, id) to each id, one metered evaluation per id.
std::vector<Neighbor> score_candidates(VectorId v_star, std::span<const VectorId> ids,
                                       const MeteredDistance& dist);

struct NeighborhoodStrategy {
    StrategyKind kind = StrategyKind::kRng;

    std::vector<VectorId> select(VectorId v_star, std::span<const Neighbor> candidates,
                                 std::size_t limit, const MeteredDistance& dist) const;
};

}  // namespace hnswmerge
