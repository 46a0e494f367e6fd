#include "hnswmerge/build.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hnswmerge/search.hpp"

namespace hnswmerge {

int level_for_uniform(double u, double mL) {
    if (!(u > 0.0 && u <= 1.0)) {
        throw std::invalid_argument("uniform draw must lie in (0, 1]");
    }
    if (!(mL > 0.0)) {
        throw std::invalid_argument("mL must be positive");
    }
    return static_cast<int>(std::floor(-std::log(u) * mL));
}

int assign_level(std::mt19937_64& rng, double mL) {
    const double u = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
    return level_for_uniform(u, mL);
}

void insert_at_level(HnswIndex& h, VectorId v, int level, const NeighborhoodStrategy& strategy,
                     const MeteredDistance& dist) {
    if (h.contains(v)) {
        throw std::invalid_argument("vertex " + std::to_string(v) + " already in the index");
    }
    const auto q = dist.dataset().row(v);
    if (h.empty()) {
        h.add_vertex(v, level);
        return;
    }

    const BuildParams& p = h.params();
    const int top = h.max_level();
    const VectorId old_entry = h.entry();

    Neighbor current{old_entry, dist(v, old_entry)};
    for (int l = top; l > level; --l) {
        current = local_search(h.layer(l), q, std::span<const Neighbor>(&current, 1),
                               SearchParams{1, p.ef_construction}, dist)
                      .front();
    }

    h.add_vertex(v, level);
    std::vector<Neighbor> seeds{current};
    for (int l = std::min(level, top); l >= 0; --l) {
        LayerGraph& g = h.layer(l);
        const std::size_t cap = l == 0 ? p.M0 : p.M;
        auto found = local_search(g, q, seeds, SearchParams{p.ef_construction, p.ef_construction}, dist);

        const auto chosen = strategy.select(v, found, cap, dist);
        g.set_neighborhood(v, chosen);
        for (VectorId u : chosen) {
            const auto current_list = g.neighbors(u);
            std::vector<VectorId> list(current_list.begin(), current_list.end());
            list.push_back(v);
            if (list.size() > cap) {
                const auto scored = score_candidates(u, list, dist);
                list = strategy.select(u, scored, cap, dist);
            }
            g.set_neighborhood(u, std::move(list));
        }
        seeds = std::move(found);
    }

    if (level > top) {
        h.set_entry(v);
    }
}

void insert(HnswIndex& h, VectorId v, std::mt19937_64& rng, const NeighborhoodStrategy& strategy,
            const MeteredDistance& dist) {
    insert_at_level(h, v, assign_level(rng, h.params().mL), strategy, dist);
}

HnswIndex build_index(std::span<const VectorId> ids, const BuildParams& params,
                      const NeighborhoodStrategy& strategy, const MeteredDistance& dist) {
    params.validate();
    HnswIndex h(params, dist.metric());
    std::mt19937_64 rng(params.seed);
    for (VectorId v : ids) {
        insert(h, v, rng, strategy, dist);
    }
    return h;
}

HnswIndex sigm_merge(const HnswIndex& a, const HnswIndex& b, const BuildParams& params,
                     const NeighborhoodStrategy& strategy, const MeteredDistance& dist) {
    params.validate();
    require_disjoint(a, b);
    const bool a_is_big = a.size() >= b.size();
    HnswIndex out = a_is_big ? a : b;
    const HnswIndex& small = a_is_big ? b : a;
    out.set_params(params);

    const auto merge_dist = dist.with_phase(kPhaseMerge);
    for (const auto& [v, level] : small.levels()) {
        insert_at_level(out, v, level, strategy, merge_dist);
    }
    return out;
}

}  // namespace hnswmerge
