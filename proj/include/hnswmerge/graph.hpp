#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hnswmerge/vecstore.hpp"

namespace hnswmerge {

/// Directed out-adjacency over a subset of vector ids. One HNSW layer.
///
/// Lists keep the order they were assigned in; nothing re-sorts them on read.
class LayerGraph {
public:
    /// Adds an isolated vertex. Returns false if it was already present.
    bool add_vertex(VectorId v);
    bool contains(VectorId v) const { return adj_.contains(v); }

    /// Throws NotFoundError if v is not in the graph.
    std::span<const VectorId> neighbors(VectorId v) const;

    /// Replaces v's out-list. Every entry must be a vertex of this graph,
    /// distinct, and different from v.
    void set_neighborhood(VectorId v, std::vector<VectorId> ns);

    /// Vertex ids in ascending order.
    std::vector<VectorId> vertices() const;
    std::size_t size() const noexcept { return adj_.size(); }
    bool empty() const noexcept { return adj_.empty(); }
    std::size_t max_degree() const;

    friend bool operator==(const LayerGraph&, const LayerGraph&) = default;

private:
    std::unordered_map<VectorId, std::vector<VectorId>> adj_;
};

struct BuildParams {
    std::uint32_t M = 16;                ///< degree cap, layers >= 1
    std::uint32_t M0 = 32;               ///< degree cap, layer 0
    std::uint32_t ef_construction = 32;
    double mL = 1.0 / std::log(16.0);    ///< level-generation scale
    std::uint64_t seed = 42;

    /// Throws std::invalid_argument on zero sizes, M0 < M, or mL <= 0.
    void validate() const;

    /// Params with mL reset to 1/ln(M).
    static BuildParams with_defaults(std::uint32_t M, std::uint32_t M0, std::uint32_t efc,
                                     std::uint64_t seed);

    friend bool operator==(const BuildParams&, const BuildParams&) = default;
};

/// Stack of layers, per-vertex levels and an entry point.
///
/// Layer membership is nested: a vertex at level l is present in layers 0..l.
/// max_level() is -1 for an index without vertices.
class HnswIndex {
public:
    HnswIndex() = default;
    explicit HnswIndex(BuildParams params, MetricKind metric = MetricKind::kSquaredEuclidean)
        : params_(params), metric_(metric) {}

    int max_level() const noexcept { return static_cast<int>(layers_.size()) - 1; }
    std::size_t size() const noexcept { return levels_.size(); }
    bool empty() const noexcept { return levels_.empty(); }
    bool contains(VectorId v) const { return levels_.contains(v); }

    /// Throws NotFoundError if v is absent.
    int level(VectorId v) const;
    const std::map<VectorId, int>& levels() const noexcept { return levels_; }
    /// All vertex ids, ascending.
    std::vector<VectorId> ids() const;

    /// Throws NotFoundError on an empty index.
    VectorId entry() const;
    /// v must be a vertex of the top layer.
    void set_entry(VectorId v);

    /// Throws std::invalid_argument for l outside [0, max_level()].
    const LayerGraph& layer(int l) const;
    LayerGraph& layer(int l);

    /// Inserts v as an isolated vertex into layers 0..level, growing the layer
    /// stack as needed. The first vertex of an empty index becomes the entry;
    /// otherwise the entry is left alone.
    void add_vertex(VectorId v, int level);

    const BuildParams& params() const noexcept { return params_; }
    void set_params(const BuildParams& p) { params_ = p; }
    MetricKind metric() const noexcept { return metric_; }

    friend bool operator==(const HnswIndex&, const HnswIndex&) = default;

private:
    std::vector<LayerGraph> layers_;
    std::map<VectorId, int> levels_;
    VectorId entry_ = 0;
    BuildParams params_;
    MetricKind metric_ = MetricKind::kSquaredEuclidean;
};

/// Layer l of h, or an empty graph when l is above h's top layer.
/// Throws std::invalid_argument for negative l.
const LayerGraph& get_layer(const HnswIndex& h, int l);

/// Throws std::invalid_argument if a and b share a vertex id.
void require_disjoint(const HnswIndex& a, const HnswIndex& b);

struct GraphStats {
    int max_level = -1;
    std::vector<std::size_t> vertices_per_layer;
    /// Per layer: out-degree -> number of vertices with that degree.
    std::vector<std::map<std::size_t, std::size_t>> degree_histogram;
};

GraphStats graph_stats(const HnswIndex& h);

/// Checks nesting, degree caps (params().M / M0), adjacency legality and entry
/// validity. Returns one message per violation; empty means consistent.
std::vector<std::string> check_invariants(const HnswIndex& h);

}  // namespace hnswmerge
