#include "hnswmerge/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "hnswmerge/errors.hpp"

namespace hnswmerge {

bool LayerGraph::add_vertex(VectorId v) {
    return adj_.try_emplace(v).second;
}

std::span<const VectorId> LayerGraph::neighbors(VectorId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) {
        throw NotFoundError("vertex " + std::to_string(v) + " is not in the layer");
    }
    return it->second;
}

void LayerGraph::set_neighborhood(VectorId v, std::vector<VectorId> ns) {
    auto it = adj_.find(v);
    if (it == adj_.end()) {
        throw std::invalid_argument("vertex " + std::to_string(v) + " is not in the layer");
    }
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const VectorId u = ns[i];
        if (u == v) {
            throw std::invalid_argument("self-loop on vertex " + std::to_string(v));
        }
        if (!adj_.contains(u)) {
            throw std::invalid_argument("neighbor " + std::to_string(u) + " is not in the layer");
        }
        if (std::find(ns.begin(), ns.begin() + static_cast<std::ptrdiff_t>(i), u) !=
            ns.begin() + static_cast<std::ptrdiff_t>(i)) {
            throw std::invalid_argument("duplicate neighbor " + std::to_string(u));
        }
    }
    it->second = std::move(ns);
}

std::vector<VectorId> LayerGraph::vertices() const {
    std::vector<VectorId> out;
    out.reserve(adj_.size());
    for (const auto& [v, _] : adj_) {
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t LayerGraph::max_degree() const {
    std::size_t d = 0;
    for (const auto& [_, ns] : adj_) {
        d = std::max(d, ns.size());
    }
    return d;
}

void BuildParams::validate() const {
    if (M == 0 || M0 == 0 || ef_construction == 0) {
        throw std::invalid_argument("M, M0 and ef_construction must be positive");
    }
    if (M0 < M) {
        throw std::invalid_argument("M0 must be >= M");
    }
    if (!(mL > 0.0)) {
        throw std::invalid_argument("mL must be positive");
    }
}

BuildParams BuildParams::with_defaults(std::uint32_t M, std::uint32_t M0, std::uint32_t efc,
                                       std::uint64_t seed) {
    BuildParams p;
    p.M = M;
    p.M0 = M0;
    p.ef_construction = efc;
    p.mL = M > 1 ? 1.0 / std::log(static_cast<double>(M)) : 1.0;
    p.seed = seed;
    return p;
}

int HnswIndex::level(VectorId v) const {
    auto it = levels_.find(v);
    if (it == levels_.end()) {
        throw NotFoundError("vertex " + std::to_string(v) + " is not in the index");
    }
    return it->second;
}

std::vector<VectorId> HnswIndex::ids() const {
    std::vector<VectorId> out;
    out.reserve(levels_.size());
    for (const auto& [v, _] : levels_) {
        out.push_back(v);
    }
    return out;
}

VectorId HnswIndex::entry() const {
    if (empty()) {
        throw NotFoundError("index is empty");
    }
    return entry_;
}

void HnswIndex::set_entry(VectorId v) {
    if (level(v) != max_level()) {
        throw std::invalid_argument("entry " + std::to_string(v) + " is not on the top layer");
    }
    entry_ = v;
}

const LayerGraph& HnswIndex::layer(int l) const {
    if (l < 0 || l > max_level()) {
        throw std::invalid_argument("layer " + std::to_string(l) + " outside [0, " +
                                    std::to_string(max_level()) + "]");
    }
    return layers_[static_cast<std::size_t>(l)];
}

LayerGraph& HnswIndex::layer(int l) {
    if (l < 0 || l > max_level()) {
        throw std::invalid_argument("layer " + std::to_string(l) + " outside [0, " +
                                    std::to_string(max_level()) + "]");
    }
    return layers_[static_cast<std::size_t>(l)];
}

void HnswIndex::add_vertex(VectorId v, int level) {
    if (level < 0) {
        throw std::invalid_argument("negative level");
    }
    if (!levels_.emplace(v, level).second) {
        throw std::invalid_argument("vertex " + std::to_string(v) + " already in the index");
    }
    const bool first = levels_.size() == 1;
    if (static_cast<int>(layers_.size()) <= level) {
        layers_.resize(static_cast<std::size_t>(level) + 1);
    }
    for (int l = 0; l <= level; ++l) {
        layers_[static_cast<std::size_t>(l)].add_vertex(v);
    }
    if (first) {
        entry_ = v;
    }
}

void require_disjoint(const HnswIndex& a, const HnswIndex& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& big = a.size() <= b.size() ? b : a;
    for (const auto& [v, _] : small.levels()) {
        if (big.contains(v)) {
            throw std::invalid_argument("indices share vertex " + std::to_string(v));
        }
    }
}

const LayerGraph& get_layer(const HnswIndex& h, int l) {
    static const LayerGraph kEmpty;
    if (l < 0) {
        throw std::invalid_argument("negative layer index");
    }
    if (l > h.max_level()) {
        return kEmpty;
    }
    return h.layer(l);
}

GraphStats graph_stats(const HnswIndex& h) {
    GraphStats s;
    s.max_level = h.max_level();
    for (int l = 0; l <= h.max_level(); ++l) {
        const auto& g = h.layer(l);
        s.vertices_per_layer.push_back(g.size());
        auto& hist = s.degree_histogram.emplace_back();
        for (VectorId v : g.vertices()) {
            ++hist[g.neighbors(v).size()];
        }
    }
    return s;
}

std::vector<std::string> check_invariants(const HnswIndex& h) {
    std::vector<std::string> errors;
    auto fail = [&](std::string msg) { errors.push_back(std::move(msg)); };

    for (const auto& [v, lvl] : h.levels()) {
        if (lvl > h.max_level()) {
            fail("vertex " + std::to_string(v) + " level above max_level");
            continue;
        }
        for (int l = 0; l <= h.max_level(); ++l) {
            if (h.layer(l).contains(v) != (l <= lvl)) {
                fail("nesting broken for vertex " + std::to_string(v) + " at layer " +
                     std::to_string(l));
            }
        }
    }
    for (int l = 0; l <= h.max_level(); ++l) {
        const auto& g = h.layer(l);
        const std::size_t cap = l == 0 ? h.params().M0 : h.params().M;
        if (g.empty()) {
            fail("layer " + std::to_string(l) + " is empty");
        }
        for (VectorId v : g.vertices()) {
            if (!h.contains(v)) {
                fail("layer " + std::to_string(l) + " holds unknown vertex " + std::to_string(v));
            }
            const auto ns = g.neighbors(v);
            if (ns.size() > cap) {
                fail("vertex " + std::to_string(v) + " has degree " + std::to_string(ns.size()) +
                     " > " + std::to_string(cap) + " at layer " + std::to_string(l));
            }
            std::unordered_set<VectorId> seen;
            for (VectorId u : ns) {
                if (u == v) {
                    fail("self-loop at vertex " + std::to_string(v));
                }
                if (!g.contains(u)) {
                    fail("edge to non-member " + std::to_string(u));
                }
                if (!seen.insert(u).second) {
                    fail("duplicate edge " + std::to_string(v) + "->" + std::to_string(u));
                }
            }
        }
    }
    if (!h.empty()) {
        const VectorId e = h.entry();
        if (!h.contains(e) || h.level(e) != h.max_level()) {
            fail("entry " + std::to_string(e) + " is not on the top layer");
        }
    }
    return errors;
}

}  // namespace hnswmerge
