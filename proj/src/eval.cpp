#include "hnswmerge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "hnswmerge/search.hpp"

namespace hnswmerge {

GroundTruth compute_ground_truth(const Dataset& queries, std::span<const VectorId> base_ids,
                                 std::size_t k, const MeteredDistance& dist) {
    GroundTruth gt;
    gt.k = k;
    gt.lists.reserve(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto knn = brute_force_knn(queries.row(static_cast<VectorId>(i)), base_ids, k, dist);
        auto& list = gt.lists.emplace_back();
        for (const auto& n : knn) {
            list.push_back(n.id);
        }
    }
    return gt;
}

double recall_at_k(const GroundTruth& truth, const std::vector<std::vector<VectorId>>& answers,
                   std::size_t k) {
    if (k == 0 || k != truth.k) {
        throw std::invalid_argument("recall k=" + std::to_string(k) +
                                    " does not match ground truth k=" + std::to_string(truth.k));
    }
    if (answers.size() != truth.lists.size()) {
        throw std::invalid_argument("answer count does not match query count");
    }
    if (answers.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        const auto& t = truth.lists[i];
        std::unordered_set<VectorId> true_set(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(std::min(k, t.size())));
        std::unordered_set<VectorId> hits;
        const std::size_t n = std::min(k, answers[i].size());
        for (std::size_t j = 0; j < n; ++j) {
            if (true_set.contains(answers[i][j])) {
                hits.insert(answers[i][j]);
            }
        }
        sum += static_cast<double>(hits.size()) / static_cast<double>(k);
    }
    return sum / static_cast<double>(answers.size());
}

std::vector<SweepRow> search_sweep(const HnswIndex& h, const Dataset& base, const Dataset& queries,
                                   const GroundTruth& truth, std::size_t k,
                                   std::span<const std::size_t> Ls, const std::string& label,
                                   std::uint64_t merge_dc) {
    std::vector<SweepRow> rows;
    for (std::size_t L : Ls) {
        DistanceMeter meter;
        const MeteredDistance dist(base, h.metric(), meter, kPhaseSearch);
        std::vector<std::vector<VectorId>> answers;
        answers.reserve(queries.size());
        for (std::size_t i = 0; i < queries.size(); ++i) {
            const auto found = hnsw_search(h, queries.row(static_cast<VectorId>(i)),
                                           SearchParams{k, L}, 0, dist);
            auto& ids = answers.emplace_back();
            for (const auto& n : found) {
                ids.push_back(n.id);
            }
        }
        SweepRow row;
        row.algorithm = label;
        row.merge_dc = merge_dc;
        row.L = L;
        row.recall = recall_at_k(truth, answers, k);
        row.avg_search_dc = queries.empty() ? 0.0
                                            : static_cast<double>(meter.count(kPhaseSearch)) /
                                                  static_cast<double>(queries.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string_view to_string(MergeKind kind) {
    switch (kind) {
        case MergeKind::kSigm:
            return "sigm";
        case MergeKind::kNgm:
            return "ngm";
        case MergeKind::kIgtm:
            return "igtm";
        case MergeKind::kCgtm:
            return "cgtm";
    }
    return "unknown";
}

MergeKind parse_merge_kind(std::string_view name) {
    if (name == "sigm") {
        return MergeKind::kSigm;
    }
    switch (parse_merge_algorithm(name)) {
        case MergeAlgorithm::kNgm:
            return MergeKind::kNgm;
        case MergeAlgorithm::kIgtm:
            return MergeKind::kIgtm;
        case MergeAlgorithm::kCgtm:
            return MergeKind::kCgtm;
    }
    throw std::invalid_argument("unknown merge algorithm");
}

HnswIndex run_merge(const HnswIndex& a, const HnswIndex& b, const MergeVariant& variant,
                    const BuildParams& build, const NeighborhoodStrategy& strategy,
                    const MeteredDistance& dist, MergeStats* stats) {
    switch (variant.kind) {
        case MergeKind::kSigm:
            return sigm_merge(a, b, build, strategy, dist);
        case MergeKind::kNgm:
            return general_merge(a, b, MergeAlgorithm::kNgm, variant.params, strategy, dist, stats);
        case MergeKind::kIgtm:
            return general_merge(a, b, MergeAlgorithm::kIgtm, variant.params, strategy, dist, stats);
        case MergeKind::kCgtm:
            return general_merge(a, b, MergeAlgorithm::kCgtm, variant.params, strategy, dist, stats);
    }
    throw std::invalid_argument("unknown merge kind");
}

std::vector<MergeVariant> default_grid(const BuildParams& build, std::uint64_t seed) {
    MergeParams p;
    p.m = build.M;
    p.m0 = build.M0;
    p.seed = seed;
    return {
        {"sigm", MergeKind::kSigm, p},
        {"ngm", MergeKind::kNgm, p},
        {"igtm", MergeKind::kIgtm, p},
        {"cgtm", MergeKind::kCgtm, p},
    };
}

BenchmarkResult merge_benchmark(const Dataset& base, const Dataset& queries,
                                const GroundTruth& truth, const BenchmarkSetup& setup,
                                std::span<const MergeVariant> grid) {
    if (!(setup.split > 0.0 && setup.split < 1.0)) {
        throw std::invalid_argument("split fraction must lie in (0, 1)");
    }
    const std::size_t n = base.size();
    const auto n_a = static_cast<std::size_t>(std::floor(setup.split * static_cast<double>(n)));
    std::vector<VectorId> ids_a(n_a);
    std::vector<VectorId> ids_b(n - n_a);
    std::iota(ids_a.begin(), ids_a.end(), VectorId{0});
    std::iota(ids_b.begin(), ids_b.end(), static_cast<VectorId>(n_a));

    const NeighborhoodStrategy strategy{setup.strategy};
    BenchmarkResult result;

    DistanceMeter build_meter;
    const MeteredDistance build_dist(base, setup.metric, build_meter, kPhaseBuild);
    BuildParams params_a = setup.build;
    BuildParams params_b = setup.build;
    params_b.seed = setup.build.seed + 1;
    const HnswIndex a = build_index(ids_a, params_a, strategy, build_dist);
    const HnswIndex b = build_index(ids_b, params_b, strategy, build_dist);
    result.build_dc = build_meter.count(kPhaseBuild);

    std::ostringstream comment;
    comment << "seed=" << setup.build.seed << ", params=M:" << setup.build.M
            << " M0:" << setup.build.M0 << " efc:" << setup.build.ef_construction
            << " strategy:" << to_string(setup.strategy) << " metric:" << to_string(setup.metric)
            << " n:" << n << " split:" << n_a << "/" << (n - n_a) << " queries:" << queries.size();
    result.report.comment = comment.str();
    result.report.k = setup.k;

    for (const auto& variant : grid) {
        DistanceMeter meter;
        const MeteredDistance dist(base, setup.metric, meter, kPhaseMerge);
        MergeOutcome outcome;
        outcome.label = variant.label;
        outcome.index = run_merge(a, b, variant, setup.build, strategy, dist, &outcome.stats);
        outcome.merge_dc = meter.count(kPhaseMerge);
        auto rows = search_sweep(outcome.index, base, queries, truth, setup.k, setup.Ls,
                                 variant.label, outcome.merge_dc);
        result.report.rows.insert(result.report.rows.end(), rows.begin(), rows.end());
        result.merges.push_back(std::move(outcome));
    }
    return result;
}

void write_report_csv(std::ostream& out, const SweepReport& report) {
    out << "# " << report.comment << '\n';
    out << "algorithm,merge_dc,L,recall_at_" << report.k << ",avg_search_dc\n";
    for (const auto& r : report.rows) {
        out << r.algorithm << ',' << r.merge_dc << ',' << r.L << ',' << std::fixed
            << std::setprecision(6) << r.recall << ',' << std::setprecision(3) << r.avg_search_dc
            << '\n';
    }
}

Dataset make_gaussian_mixture(std::size_t n, std::size_t dim, std::size_t clusters,
                              std::uint64_t seed) {
    if (dim == 0 || clusters == 0) {
        throw std::invalid_argument("dim and cluster count must be positive");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> centers(clusters * dim);
    for (auto& c : centers) {
        c = normal(rng);
    }
    std::vector<float> values(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = rng() % clusters;
        for (std::size_t j = 0; j < dim; ++j) {
            values[i * dim + j] = static_cast<float>(centers[c * dim + j] + normal(rng));
        }
    }
    return Dataset(dim, std::move(values));
}

}  // namespace hnswmerge
