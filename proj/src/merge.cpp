#include "hnswmerge/merge.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "hnswmerge/search.hpp"

namespace hnswmerge {

namespace {

/// Unprocessed vertices with O(1) membership, removal and uniform pick.
class NotDoneSet {
public:
    explicit NotDoneSet(std::vector<VectorId> ids) : items_(std::move(ids)) {
        pos_.reserve(items_.size());
        for (std::size_t i = 0; i < items_.size(); ++i) {
            pos_.emplace(items_[i], i);
        }
    }

    bool empty() const noexcept { return items_.empty(); }
    bool contains(VectorId v) const { return pos_.contains(v); }

    VectorId pick(std::mt19937_64& rng) const { return items_[rng() % items_.size()]; }

    void erase(VectorId v) {
        auto it = pos_.find(v);
        if (it == pos_.end()) {
            return;
        }
        const std::size_t i = it->second;
        pos_.erase(it);
        if (i + 1 != items_.size()) {
            items_[i] = items_.back();
            pos_[items_[i]] = i;
        }
        items_.pop_back();
    }

private:
    std::vector<VectorId> items_;
    std::unordered_map<VectorId, std::size_t> pos_;
};

std::vector<VectorId> ids_of(std::span<const Neighbor> ns, std::size_t limit) {
    std::vector<VectorId> out;
    const std::size_t n = std::min(limit, ns.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(ns[i].id);
    }
    return out;
}

LayerGraph union_of(const LayerGraph& ga, const LayerGraph& gb) {
    LayerGraph out;
    for (VectorId v : ga.vertices()) {
        out.add_vertex(v);
    }
    for (VectorId v : gb.vertices()) {
        out.add_vertex(v);
    }
    return out;
}

/// Candidate set = v's own out-list in `own` plus `found` from the other graph.
void construct(LayerGraph& out, VectorId v, const LayerGraph& own, std::span<const Neighbor> found,
               std::size_t cap, const NeighborhoodStrategy& strategy, const MeteredDistance& dist,
               MergeStats* stats) {
    auto candidates = score_candidates(v, own.neighbors(v), dist);
    candidates.insert(candidates.end(), found.begin(), found.end());
    out.set_neighborhood(v, strategy.select(v, candidates, cap, dist));
    if (stats != nullptr) {
        ++stats->constructions;
        stats->processing_order.push_back(v);
    }
}

/// Local search from a pool that is either fresh (distances to q known) or
/// carried over from the previous processing vertex (distances stale).
std::vector<Neighbor> search_from_pool(const LayerGraph& g, std::span<const float> q,
                                       const std::vector<Neighbor>& fresh,
                                       const std::vector<VectorId>& carried, bool use_fresh,
                                       SearchParams p, const MeteredDistance& dist) {
    if (use_fresh) {
        return local_search(g, q, fresh, p, dist);
    }
    return local_search(g, q, carried, p, dist);
}

void ngm_pass(const HnswIndex& own, const HnswIndex& other, int layer, const MergeParams& params,
              const NeighborhoodStrategy& strategy, const MeteredDistance& dist, LayerGraph& out,
              MergeStats* stats) {
    const LayerGraph& g_own = own.layer(layer);
    const std::size_t cap = params.cap(layer);
    for (VectorId v : g_own.vertices()) {
        const auto q = dist.dataset().row(v);
        const auto found = hnsw_search(other, q, SearchParams{cap, params.search_ef}, layer, dist);
        construct(out, v, g_own, found, cap, strategy, dist, stats);
    }
}

void igtm_pass(const HnswIndex& own, const HnswIndex& other, int layer, const MergeParams& params,
               const NeighborhoodStrategy& strategy, const MeteredDistance& dist, LayerGraph& out,
               std::mt19937_64& rng, MergeStats* stats) {
    const LayerGraph& g_own = own.layer(layer);
    const LayerGraph& g_other = other.layer(layer);
    const std::size_t cap = params.cap(layer);
    NotDoneSet not_done(g_own.vertices());

    while (!not_done.empty()) {
        VectorId v = not_done.pick(rng);
        if (stats != nullptr) {
            ++stats->restarts;
        }
        auto q = dist.dataset().row(v);
        const auto restart_pool =
            hnsw_search(other, q, SearchParams{params.m_carry, params.jump_ef}, layer, dist);
        std::vector<VectorId> carried;
        bool fresh = true;

        while (true) {
            not_done.erase(v);
            const auto found = search_from_pool(g_other, q, restart_pool, carried, fresh,
                                                SearchParams{cap, params.local_ef}, dist);
            construct(out, v, g_own, found, cap, strategy, dist, stats);
            carried = ids_of(found, params.m_carry);

            const Neighbor self{v, 0.0};
            const auto nearby =
                local_search(g_own, q, std::span<const Neighbor>(&self, 1),
                             SearchParams{params.next_step_k, params.next_step_ef}, dist);
            const auto next = std::find_if(nearby.begin(), nearby.end(),
                                           [&](const Neighbor& n) { return not_done.contains(n.id); });
            if (next == nearby.end()) {
                break;
            }
            v = next->id;
            q = dist.dataset().row(v);
            fresh = false;
        }
    }
}

/// Layer `layer` of `h` when the other side contributes nothing there.
bool copy_if_one_sided(const HnswIndex& a, const HnswIndex& b, int layer, LayerGraph& out) {
    const LayerGraph& ga = get_layer(a, layer);
    const LayerGraph& gb = get_layer(b, layer);
    if (gb.empty()) {
        out = ga;
        return true;
    }
    if (ga.empty()) {
        out = gb;
        return true;
    }
    return false;
}

}  // namespace

std::string_view to_string(MergeAlgorithm algo) {
    switch (algo) {
        case MergeAlgorithm::kNgm:
            return "ngm";
        case MergeAlgorithm::kIgtm:
            return "igtm";
        case MergeAlgorithm::kCgtm:
            return "cgtm";
    }
    return "unknown";
}

MergeAlgorithm parse_merge_algorithm(std::string_view name) {
    if (name == "ngm") {
        return MergeAlgorithm::kNgm;
    }
    if (name == "igtm") {
        return MergeAlgorithm::kIgtm;
    }
    if (name == "cgtm") {
        return MergeAlgorithm::kCgtm;
    }
    throw std::invalid_argument("unknown merge algorithm '" + std::string(name) + "'");
}

void MergeParams::validate() const {
    if (m == 0 || m0 == 0 || search_ef == 0 || jump_ef == 0 || local_ef == 0 ||
        next_step_k == 0 || next_step_ef == 0 || m_carry == 0) {
        throw std::invalid_argument("merge parameters must be positive");
    }
    if (next_step_ef < next_step_k) {
        throw std::invalid_argument("next_step_ef must be >= next_step_k");
    }
    if (local_ef < m) {
        throw std::invalid_argument("local_ef must be >= m");
    }
}

LayerGraph ngm_layer(const HnswIndex& a, const HnswIndex& b, int layer, const MergeParams& params,
                     const NeighborhoodStrategy& strategy, const MeteredDistance& dist,
                     MergeStats* stats) {
    LayerGraph out;
    if (copy_if_one_sided(a, b, layer, out)) {
        return out;
    }
    out = union_of(a.layer(layer), b.layer(layer));
    ngm_pass(a, b, layer, params, strategy, dist, out, stats);
    ngm_pass(b, a, layer, params, strategy, dist, out, stats);
    return out;
}

LayerGraph igtm_layer(const HnswIndex& a, const HnswIndex& b, int layer, const MergeParams& params,
                      const NeighborhoodStrategy& strategy, const MeteredDistance& dist,
                      MergeStats* stats) {
    LayerGraph out;
    if (copy_if_one_sided(a, b, layer, out)) {
        return out;
    }
    out = union_of(a.layer(layer), b.layer(layer));
    std::mt19937_64 rng(params.seed + static_cast<std::uint64_t>(layer));
    igtm_pass(a, b, layer, params, strategy, dist, out, rng, stats);
    igtm_pass(b, a, layer, params, strategy, dist, out, rng, stats);
    return out;
}

LayerGraph cgtm_layer(const HnswIndex& a, const HnswIndex& b, int layer, const MergeParams& params,
                      const NeighborhoodStrategy& strategy, const MeteredDistance& dist,
                      MergeStats* stats) {
    LayerGraph out;
    if (copy_if_one_sided(a, b, layer, out)) {
        return out;
    }
    const LayerGraph& ga = a.layer(layer);
    const LayerGraph& gb = b.layer(layer);
    out = union_of(ga, gb);
    const std::size_t cap = params.cap(layer);
    std::mt19937_64 rng(params.seed + static_cast<std::uint64_t>(layer));
    NotDoneSet not_done(out.vertices());
    const SearchParams local{cap, params.local_ef};
    const SearchParams jump{params.m_carry, params.jump_ef};

    while (!not_done.empty()) {
        VectorId v = not_done.pick(rng);
        if (stats != nullptr) {
            ++stats->restarts;
        }
        auto q = dist.dataset().row(v);
        const auto restart_a = hnsw_search(a, q, jump, layer, dist);
        const auto restart_b = hnsw_search(b, q, jump, layer, dist);
        std::vector<VectorId> carried_a;
        std::vector<VectorId> carried_b;
        bool fresh = true;

        while (true) {
            not_done.erase(v);
            const auto found_a = search_from_pool(ga, q, restart_a, carried_a, fresh, local, dist);
            const auto found_b = search_from_pool(gb, q, restart_b, carried_b, fresh, local, dist);
            if (ga.contains(v)) {
                construct(out, v, ga, found_b, cap, strategy, dist, stats);
            } else {
                construct(out, v, gb, found_a, cap, strategy, dist, stats);
            }

            // Both lists hold distances to the current v, so the closest
            // unprocessed entry needs no further evaluations.
            const Neighbor* next = nullptr;
            for (const auto* found : {&found_a, &found_b}) {
                const std::size_t n = std::min<std::size_t>(params.next_step_k, found->size());
                for (std::size_t i = 0; i < n; ++i) {
                    const Neighbor& c = (*found)[i];
                    if (not_done.contains(c.id) && (next == nullptr || c < *next)) {
                        next = &c;
                    }
                }
            }
            if (next == nullptr) {
                break;
            }
            v = next->id;
            q = dist.dataset().row(v);
            carried_a = ids_of(found_a, found_a.size());
            carried_b = ids_of(found_b, found_b.size());
            fresh = false;
        }
    }
    return out;
}

HnswIndex general_merge(const HnswIndex& a, const HnswIndex& b, MergeAlgorithm algo,
                        const MergeParams& params, const NeighborhoodStrategy& strategy,
                        const MeteredDistance& dist, MergeStats* stats) {
    params.validate();
    require_disjoint(a, b);
    if (b.empty()) {
        return a;
    }
    if (a.empty()) {
        return b;
    }

    BuildParams merged_params = a.params();
    merged_params.M = params.m;
    merged_params.M0 = std::max(params.m0, params.m);
    HnswIndex out(merged_params, a.metric());
    for (const auto& [v, level] : a.levels()) {
        out.add_vertex(v, level);
    }
    for (const auto& [v, level] : b.levels()) {
        out.add_vertex(v, level);
    }

    const auto merge_dist = dist.with_phase(kPhaseMerge);
    for (int l = 0; l <= out.max_level(); ++l) {
        switch (algo) {
            case MergeAlgorithm::kNgm:
                out.layer(l) = ngm_layer(a, b, l, params, strategy, merge_dist, stats);
                break;
            case MergeAlgorithm::kIgtm:
                out.layer(l) = igtm_layer(a, b, l, params, strategy, merge_dist, stats);
                break;
            case MergeAlgorithm::kCgtm:
                out.layer(l) = cgtm_layer(a, b, l, params, strategy, merge_dist, stats);
                break;
        }
    }
    out.set_entry(out.layer(out.max_level()).vertices().front());
    return out;
}

}  // namespace hnswmerge
