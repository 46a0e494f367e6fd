#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hnswmerge {

/// Global vector id. Ids of a Dataset are dense in [0, size()).
using VectorId = std::uint32_t;

// Phase labels used by the library.
inline constexpr std::string_view kPhaseBuild = "build";
inline constexpr std::string_view kPhaseMerge = "merge";
inline constexpr std::string_view kPhaseSearch = "search";
inline constexpr std::string_view kPhaseGroundTruth = "ground-truth";

enum class MetricKind : std::uint32_t {
    kSquaredEuclidean = 0,
    kEuclidean = 1,
};

std::string_view to_string(MetricKind kind);
MetricKind parse_metric(std::string_view name);

/// Row-major n x dim matrix of float components.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::size_t dim) : dim_(dim) {}
    Dataset(std::size_t dim, std::vector<float> values);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
    bool empty() const noexcept { return size() == 0; }

    std::span<const float> row(VectorId id) const;
    std::span<const float> values() const noexcept { return values_; }

    VectorId append(std::span<const float> v);
    /// Grows the dataset with zero rows if `id` is past the end.
    void set_row(VectorId id, std::span<const float> v);

    /// Rows [lo, hi) as a new dataset; ids are shifted down by lo.
    Dataset slice(std::size_t lo, std::size_t hi) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<float> values_;
};

/// Counts distance evaluations per phase label.
///
/// Not synchronized. Parallel callers keep one meter per execution context
/// and fold them together with merge_from() at the join point.
class DistanceMeter {
public:
    using Snapshot = std::map<std::string, std::uint64_t, std::less<>>;

    /// Stable reference to the counter for `phase`, created at zero if absent.
    std::uint64_t& counter(std::string_view phase);

    std::uint64_t count(std::string_view phase) const;
    std::uint64_t total() const;
    Snapshot snapshot() const { return counts_; }
    void merge_from(const DistanceMeter& other);

private:
    Snapshot counts_;
};

/// (id, distance) pair ordered by distance, ties by smaller id.
struct Neighbor {
    VectorId id = 0;
    double distance = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

inline bool operator<(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

/// The only route to the metric. Every call increments the bound phase counter once.
class MeteredDistance {
public:
    MeteredDistance(const Dataset& data, MetricKind metric, DistanceMeter& meter,
                    std::string_view phase);

    /// rho(a, b) between two stored vectors.
    double operator()(VectorId a, VectorId b) const;
    /// rho(q, b) for an external query vector.
    double to_query(std::span<const float> q, VectorId b) const;

    MeteredDistance with_phase(std::string_view phase) const;

    const Dataset& dataset() const noexcept { return *data_; }
    MetricKind metric() const noexcept { return metric_; }
    DistanceMeter& meter() const noexcept { return *meter_; }
    std::uint64_t count() const noexcept { return *counter_; }

private:
    const Dataset* data_;
    MetricKind metric_;
    DistanceMeter* meter_;
    std::uint64_t* counter_;
};

double distance(DistanceMeter& meter, std::string_view phase, VectorId a, VectorId b,
                const Dataset& data, MetricKind metric);

/// Exact k nearest ids to `q` among all dataset rows, ascending by (distance, id).
std::vector<Neighbor> brute_force_knn(std::span<const float> q, std::size_t k,
                                      const MeteredDistance& dist);

/// Exact k nearest among `ids` only.
std::vector<Neighbor> brute_force_knn(std::span<const float> q, std::span<const VectorId> ids,
                                      std::size_t k, const MeteredDistance& dist);

}  // namespace hnswmerge
