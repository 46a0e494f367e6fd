#include "hnswmerge/search.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "hnswmerge/errors.hpp"

namespace hnswmerge {

namespace {

struct Candidate {
    Neighbor n;
    bool expanded = false;
};

class CandidatePool {
public:
    explicit CandidatePool(std::size_t capacity) : capacity_(capacity) { entries_.reserve(capacity + 1); }

    /// Returns the insertion position, or size() if n did not make the cut.
    std::size_t insert(const Neighbor& n) {
        if (entries_.size() >= capacity_ && !(n < entries_.back().n)) {
            return entries_.size();
        }
        auto it = std::upper_bound(entries_.begin(), entries_.end(), n,
                                   [](const Neighbor& a, const Candidate& c) { return a < c.n; });
        const auto pos = static_cast<std::size_t>(it - entries_.begin());
        entries_.insert(it, Candidate{n, false});
        if (entries_.size() > capacity_) {
            entries_.pop_back();
        }
        return pos;
    }

    std::vector<Candidate>& entries() { return entries_; }

private:
    std::size_t capacity_;
    std::vector<Candidate> entries_;
};

std::vector<Neighbor> run(const LayerGraph& g, std::span<const float> q, std::vector<Neighbor> seeds,
                          SearchParams p, const MeteredDistance& dist,
                          std::unordered_set<VectorId> seen) {
    const std::size_t beam = std::max(p.L, p.k);
    CandidatePool pool(beam);
    for (const auto& s : seeds) {
        pool.insert(s);
    }

    auto& entries = pool.entries();
    std::size_t cursor = 0;
    while (cursor < entries.size()) {
        if (entries[cursor].expanded) {
            ++cursor;
            continue;
        }
        entries[cursor].expanded = true;
        const VectorId u = entries[cursor].n.id;
        std::size_t lowest = entries.size();
        for (VectorId v : g.neighbors(u)) {
            if (!seen.insert(v).second) {
                continue;
            }
            const std::size_t pos = pool.insert({v, dist.to_query(q, v)});
            lowest = std::min(lowest, pos);
        }
        cursor = std::min(cursor, lowest);
    }

    std::vector<Neighbor> out;
    const std::size_t n = std::min(p.k, entries.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(entries[i].n);
    }
    return out;
}

void check_args(std::size_t n_seeds, SearchParams p) {
    if (n_seeds == 0) {
        throw std::invalid_argument("local_search needs at least one seed");
    }
    if (p.k == 0) {
        throw std::invalid_argument("k must be positive");
    }
}

void check_seed(const LayerGraph& g, VectorId v) {
    if (!g.contains(v)) {
        throw std::invalid_argument("seed " + std::to_string(v) + " is not in the layer");
    }
}

}  // namespace

std::vector<Neighbor> local_search(const LayerGraph& g, std::span<const float> q,
                                   std::span<const VectorId> seeds, SearchParams p,
                                   const MeteredDistance& dist) {
    check_args(seeds.size(), p);
    std::unordered_set<VectorId> seen;
    std::vector<Neighbor> scored;
    scored.reserve(seeds.size());
    for (VectorId s : seeds) {
        check_seed(g, s);
        if (seen.insert(s).second) {
            scored.push_back({s, dist.to_query(q, s)});
        }
    }
    return run(g, q, std::move(scored), p, dist, std::move(seen));
}

std::vector<Neighbor> local_search(const LayerGraph& g, std::span<const float> q,
                                   std::span<const Neighbor> seeds, SearchParams p,
                                   const MeteredDistance& dist) {
    check_args(seeds.size(), p);
    std::unordered_set<VectorId> seen;
    std::vector<Neighbor> scored;
    scored.reserve(seeds.size());
    for (const auto& s : seeds) {
        check_seed(g, s.id);
        if (seen.insert(s.id).second) {
            scored.push_back(s);
        }
    }
    return run(g, q, std::move(scored), p, dist, std::move(seen));
}

std::vector<Neighbor> hnsw_search(const HnswIndex& h, std::span<const float> q, VectorId v0,
                                  SearchParams p, int target_layer, const MeteredDistance& dist) {
    if (h.empty()) {
        throw NotFoundError("search on an empty index");
    }
    if (target_layer < 0 || target_layer > h.max_level()) {
        throw std::invalid_argument("target layer " + std::to_string(target_layer) +
                                    " outside [0, " + std::to_string(h.max_level()) + "]");
    }
    if (!h.layer(h.max_level()).contains(v0)) {
        throw std::invalid_argument("start vertex " + std::to_string(v0) +
                                    " is not on the top layer");
    }
    Neighbor current{v0, dist.to_query(q, v0)};
    for (int l = h.max_level(); l > target_layer; --l) {
        current = local_search(h.layer(l), q, std::span<const Neighbor>(&current, 1),
                               SearchParams{1, p.L}, dist)
                      .front();
    }
    return local_search(h.layer(target_layer), q, std::span<const Neighbor>(&current, 1), p, dist);
}

std::vector<Neighbor> hnsw_search(const HnswIndex& h, std::span<const float> q, SearchParams p,
                                  int target_layer, const MeteredDistance& dist) {
    if (h.empty()) {
        throw NotFoundError("search on an empty index");
    }
    return hnsw_search(h, q, h.entry(), p, target_layer, dist);
}

}  // namespace hnswmerge
