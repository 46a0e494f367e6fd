#include "hnswmerge/vecstore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hnswmerge {

namespace {

double squared_l2(std::span<const float> a, std::span<const float> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sum += d * d;
    }
    return sum;
}

double evaluate(std::span<const float> a, std::span<const float> b, MetricKind metric) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
    const double sq = squared_l2(a, b);
    return metric == MetricKind::kEuclidean ? std::sqrt(sq) : sq;
}

}  // namespace

std::string_view to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::kSquaredEuclidean:
            return "sqeuclidean";
        case MetricKind::kEuclidean:
            return "euclidean";
    }
    return "unknown";
}

MetricKind parse_metric(std::string_view name) {
    if (name == "sqeuclidean" || name == "squared-euclidean" || name == "l2sq") {
        return MetricKind::kSquaredEuclidean;
    }
    if (name == "euclidean" || name == "l2") {
        return MetricKind::kEuclidean;
    }
    throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

Dataset::Dataset(std::size_t dim, std::vector<float> values) : dim_(dim), values_(std::move(values)) {
    if (dim_ == 0 && !values_.empty()) {
        throw std::invalid_argument("dataset with dim 0 cannot hold values");
    }
    if (dim_ != 0 && values_.size() % dim_ != 0) {
        throw std::invalid_argument("value count is not a multiple of dim");
    }
}

std::span<const float> Dataset::row(VectorId id) const {
    if (id >= size()) {
        throw std::invalid_argument("vector id " + std::to_string(id) + " out of range [0, " +
                                    std::to_string(size()) + ")");
    }
    return std::span<const float>(values_).subspan(static_cast<std::size_t>(id) * dim_, dim_);
}

VectorId Dataset::append(std::span<const float> v) {
    if (dim_ == 0) {
        dim_ = v.size();
    }
    if (v.size() != dim_ || dim_ == 0) {
        throw std::invalid_argument("vector has " + std::to_string(v.size()) +
                                    " components, dataset dim is " + std::to_string(dim_));
    }
    const auto id = static_cast<VectorId>(size());
    values_.insert(values_.end(), v.begin(), v.end());
    return id;
}

void Dataset::set_row(VectorId id, std::span<const float> v) {
    if (dim_ == 0) {
        dim_ = v.size();
    }
    if (v.size() != dim_ || dim_ == 0) {
        throw std::invalid_argument("vector has " + std::to_string(v.size()) +
                                    " components, dataset dim is " + std::to_string(dim_));
    }
    if (id >= size()) {
        values_.resize((static_cast<std::size_t>(id) + 1) * dim_, 0.0f);
    }
    std::copy(v.begin(), v.end(), values_.begin() + static_cast<std::ptrdiff_t>(id * dim_));
}

Dataset Dataset::slice(std::size_t lo, std::size_t hi) const {
    if (lo > hi || hi > size()) {
        throw std::invalid_argument("slice [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                    ") outside dataset of size " + std::to_string(size()));
    }
    return Dataset(dim_, std::vector<float>(values_.begin() + static_cast<std::ptrdiff_t>(lo * dim_),
                                            values_.begin() + static_cast<std::ptrdiff_t>(hi * dim_)));
}

std::uint64_t& DistanceMeter::counter(std::string_view phase) {
    auto it = counts_.find(phase);
    if (it == counts_.end()) {
        it = counts_.emplace(std::string(phase), 0).first;
    }
    return it->second;
}

std::uint64_t DistanceMeter::count(std::string_view phase) const {
    auto it = counts_.find(phase);
    return it == counts_.end() ? 0 : it->second;
}

std::uint64_t DistanceMeter::total() const {
    std::uint64_t sum = 0;
    for (const auto& [_, n] : counts_) {
        sum += n;
    }
    return sum;
}

void DistanceMeter::merge_from(const DistanceMeter& other) {
    for (const auto& [phase, n] : other.counts_) {
        counter(phase) += n;
    }
}

MeteredDistance::MeteredDistance(const Dataset& data, MetricKind metric, DistanceMeter& meter,
                                 std::string_view phase)
    : data_(&data), metric_(metric), meter_(&meter), counter_(&meter.counter(phase)) {}

double MeteredDistance::operator()(VectorId a, VectorId b) const {
    const auto ra = data_->row(a);
    const auto rb = data_->row(b);
    ++*counter_;
    return evaluate(ra, rb, metric_);
}

double MeteredDistance::to_query(std::span<const float> q, VectorId b) const {
    const auto rb = data_->row(b);
    ++*counter_;
    return evaluate(q, rb, metric_);
}

MeteredDistance MeteredDistance::with_phase(std::string_view phase) const {
    return MeteredDistance(*data_, metric_, *meter_, phase);
}

double distance(DistanceMeter& meter, std::string_view phase, VectorId a, VectorId b,
                const Dataset& data, MetricKind metric) {
    return MeteredDistance(data, metric, meter, phase)(a, b);
}

std::vector<Neighbor> brute_force_knn(std::span<const float> q, std::span<const VectorId> ids,
                                      std::size_t k, const MeteredDistance& dist) {
    if (k == 0) {
        throw std::invalid_argument("k must be positive");
    }
    if (k > ids.size()) {
        throw std::invalid_argument("k=" + std::to_string(k) + " exceeds the " +
                                    std::to_string(ids.size()) + " available vectors");
    }
    std::vector<Neighbor> all;
    all.reserve(ids.size());
    for (VectorId id : ids) {
        all.push_back({id, dist.to_query(q, id)});
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    all.resize(k);
    return all;
}

std::vector<Neighbor> brute_force_knn(std::span<const float> q, std::size_t k,
                                      const MeteredDistance& dist) {
    std::vector<VectorId> ids(dist.dataset().size());
    std::iota(ids.begin(), ids.end(), VectorId{0});
    return brute_force_knn(q, ids, k, dist);
}

}  // namespace hnswmerge
