#include "hnswmerge/neighborhood.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hnswmerge {

namespace {

std::vector<Neighbor> normalize(VectorId v_star, std::span<const Neighbor> candidates) {
    std::vector<Neighbor> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<Neighbor> out;
    out.reserve(sorted.size());
    for (const auto& c : sorted) {
        if (c.id == v_star) {
            continue;
        }
        const bool dup = std::any_of(out.begin(), out.end(),
                                     [&](const Neighbor& o) { return o.id == c.id; });
        if (!dup) {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
    return kind == StrategyKind::kKnn ? "knn" : "rng";
}

StrategyKind parse_strategy(std::string_view name) {
    if (name == "knn") {
        return StrategyKind::kKnn;
    }
    if (name == "rng") {
        return StrategyKind::kRng;
    }
    throw std::invalid_argument("unknown neighborhood strategy '" + std::string(name) + "'");
}

std::vector<VectorId> knn_construct(VectorId v_star, std::span<const Neighbor> candidates,
                                    std::size_t k) {
    const auto sorted = normalize(v_star, candidates);
    std::vector<VectorId> out;
    for (std::size_t i = 0; i < sorted.size() && i < k; ++i) {
        out.push_back(sorted[i].id);
    }
    return out;
}

std::vector<VectorId> rng_construct(VectorId v_star, std::span<const Neighbor> candidates,
                                    std::size_t m, const MeteredDistance& dist) {
    std::vector<VectorId> admitted;
    if (m == 0) {
        return admitted;
    }
    for (const auto& c : normalize(v_star, candidates)) {
        bool keep = true;
        for (VectorId w : admitted) {
            if (c.distance >= dist(c.id, w)) {
                keep = false;
                break;
            }
        }
        if (keep) {
            admitted.push_back(c.id);
            if (admitted.size() >= m) {
                break;
            }
        }
    }
    return admitted;
}

std::vector<Neighbor> score_candidates(VectorId v_star, std::span<const VectorId> ids,
                                       const MeteredDistance& dist) {
    std::vector<Neighbor> out;
    out.reserve(ids.size());
    for (VectorId id : ids) {
        out.push_back({id, dist(v_star, id)});
    }
    return out;
}

std::vector<VectorId> NeighborhoodStrategy::select(VectorId v_star,
                                                   std::span<const Neighbor> candidates,
                                                   std::size_t limit,
                                                   const MeteredDistance& dist) const {
    if (kind == StrategyKind::kKnn) {
        return knn_construct(v_star, candidates, limit);
    }
    return rng_construct(v_star, candidates, limit, dist);
}

}  // namespace hnswmerge
