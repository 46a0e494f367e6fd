// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "hnswmerge/build.hpp"
#include "hnswmerge/config.hpp"
#include "hnswmerge/io.hpp"
#include "hnswmerge/merge.hpp"
#include "hnswmerge/neighborhood.hpp"
#include "hnswmerge/search.hpp"
#include "oracles.hpp"

namespace hm = hnswmerge;
namespace fs = std::filesystem;

namespace {

// Criterion 1
constexpr double kIgtmOverNgmMax = 0.6;
// Criterion 2
constexpr double kTraversalRecallTol = 0.05;
constexpr double kNgmRecallTol = 0.02;
// Criterion 3
constexpr double kSearchCostSpreadMax = 0.10;
// Criterion 4
constexpr double kSigmOverIgtmMin = 2.0;
// Criterion 5
constexpr int kOracleGraphs = 50;
constexpr int kOracleQueries = 20;
constexpr std::size_t kOracleMaxN = 200;
// Criterion 6
constexpr int kInvariantSeeds = 200;
// Criterion 8
constexpr int kRngCases = 1000;
// Criterion 9
constexpr std::size_t kDegenerateMaxN = 50;
constexpr int kDegenerateTrials = 30;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  ["
              << o.detail << "]" << std::endl;
    if (!o.pass) {
        ++failures;
    }
}

Outcome guarded(const std::function<Outcome()>& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {false, std::string("exception: ") + e.what()};
    }
}

std::string fmt(double x, int prec = 3) {
    std::ostringstream s;
    s.precision(prec);
    s << std::fixed << x;
    return s.str();
}

/// The 2x10k desk-scale run shared by criteria 1 to 4.
struct DeskRun {
    hm::BenchmarkResult result;
    std::map<std::string, std::uint64_t> merge_dc;
    /// label -> L -> row
    std::map<std::string, std::map<std::size_t, hm::SweepRow>> rows;
};

DeskRun run_desk_scale() {
    hm::RunConfig cfg;
    cfg.synthetic = {20000, 100, 128, 32};
    cfg.setup.build = hm::BuildParams::with_defaults(16, 32, 32, 42);
    cfg.grid = hm::default_grid(cfg.setup.build, 42);
    cfg.set_seed(42);
    const auto data = hm::load_benchmark_data(cfg);
    DeskRun run;
    run.result = hm::run_benchmark(cfg, data);
    for (const auto& m : run.result.merges) {
        run.merge_dc[m.label] = m.merge_dc;
    }
    for (const auto& r : run.result.report.rows) {
        run.rows[r.algorithm][r.L] = r;
    }
    std::ofstream("acceptance_desk_report.csv") << [&] {
        std::ostringstream out;
        hm::write_report_csv(out, run.result.report);
        return out.str();
    }();
    return run;
}

Outcome cost_ordering(const DeskRun& run) {
    const double ngm = static_cast<double>(run.merge_dc.at("ngm"));
    const double igtm = static_cast<double>(run.merge_dc.at("igtm"));
    const double cgtm = static_cast<double>(run.merge_dc.at("cgtm"));
    const bool order = igtm < cgtm && cgtm < ngm;
    const bool ratio = igtm <= kIgtmOverNgmMax * ngm;
    return {order && ratio, "igtm=" + std::to_string(run.merge_dc.at("igtm")) +
                                " cgtm=" + std::to_string(run.merge_dc.at("cgtm")) +
                                " ngm=" + std::to_string(run.merge_dc.at("ngm")) +
                                " igtm/ngm=" + fmt(igtm / ngm) + " need igtm<cgtm<ngm and <= " +
                                fmt(kIgtmOverNgmMax, 2)};
}

Outcome recall_parity(const DeskRun& run) {
    double worst_traversal = 0.0;
    double worst_ngm = 0.0;
    for (const auto& [L, sigm] : run.rows.at("sigm")) {
        for (const char* algo : {"igtm", "cgtm"}) {
            worst_traversal = std::max(worst_traversal, std::abs(run.rows.at(algo).at(L).recall - sigm.recall));
        }
        worst_ngm = std::max(worst_ngm, std::abs(run.rows.at("ngm").at(L).recall - sigm.recall));
    }
    return {worst_traversal <= kTraversalRecallTol && worst_ngm <= kNgmRecallTol,
            "max |igtm/cgtm - sigm|=" + fmt(worst_traversal) + " (tol " + fmt(kTraversalRecallTol, 2) +
                "), max |ngm - sigm|=" + fmt(worst_ngm) + " (tol " + fmt(kNgmRecallTol, 2) + ")"};
}

Outcome search_cost_parity(const DeskRun& run) {
    double worst = 0.0;
    for (const auto& [L, _] : run.rows.at("sigm")) {
        double lo = INFINITY;
        double hi = 0.0;
        for (const auto& [label, by_l] : run.rows) {
            lo = std::min(lo, by_l.at(L).avg_search_dc);
            hi = std::max(hi, by_l.at(L).avg_search_dc);
        }
        worst = std::max(worst, (hi - lo) / lo);
    }
    return {worst <= kSearchCostSpreadMax,
            "max (max-min)/min over L=" + fmt(worst) + " (tol " + fmt(kSearchCostSpreadMax, 2) + ")"};
}

Outcome sigm_dominance(const DeskRun& run) {
    const double sigm = static_cast<double>(run.merge_dc.at("sigm"));
    const double igtm = static_cast<double>(run.merge_dc.at("igtm"));
    return {sigm >= kSigmOverIgtmMin * igtm, "sigm=" + std::to_string(run.merge_dc.at("sigm")) +
                                                 " igtm=" + std::to_string(run.merge_dc.at("igtm")) +
                                                 " sigm/igtm=" + fmt(sigm / igtm) + " need >= " +
                                                 fmt(kSigmOverIgtmMin, 1)};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(5005);
    int mismatches = 0;
    int checks = 0;
    for (int g = 0; g < kOracleGraphs; ++g) {
        const std::size_t n = 2 + rng() % (kOracleMaxN - 1);
        const std::size_t dim = 1 + rng() % 16;
        oracle::Fixture f(oracle::uniform_points(n, dim, rng()));
        const auto ids = oracle::iota_ids(n);
        const auto graph = oracle::random_connected_graph(ids, rng() % (2 * n + 1), rng);
        const auto queries = oracle::uniform_points(kOracleQueries, dim, rng());
        for (hm::VectorId qi = 0; qi < kOracleQueries; ++qi) {
            const std::size_t k = 1 + rng() % std::min<std::size_t>(n, 10);
            const hm::VectorId seed[] = {static_cast<hm::VectorId>(rng() % n)};
            const auto found = hm::local_search(graph, queries.row(qi), seed, {k, n}, f.dist);
            std::vector<hm::VectorId> got;
            for (const auto& nb : found) {
                got.push_back(nb.id);
            }
            ++checks;
            if (got != oracle::full_sort_knn(f.data, queries.row(qi), ids, k)) {
                ++mismatches;
            }
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches over " + std::to_string(checks) +
                                 " (graph, query) pairs"};
}

Outcome structural_invariants() {
    int bad = 0;
    int checked = 0;
    std::string first;
    auto check = [&](const hm::HnswIndex& h, std::span<const hm::VectorId> ids, const std::string& what) {
        ++checked;
        const auto v = oracle::structural_violations(h, ids);
        if (!v.empty()) {
            ++bad;
            if (first.empty()) {
                first = what + ": " + v.front();
            }
        }
    };
    for (int seed = 0; seed < kInvariantSeeds; ++seed) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed) * 7919 + 1);
        const std::size_t n_a = 1 + rng() % 150;
        const std::size_t n_b = 1 + rng() % 150;
        const std::size_t extra = rng() % 10;
        oracle::Fixture f(oracle::uniform_points(n_a + n_b + extra, 1 + rng() % 8, rng()));
        const std::uint32_t M = 2 + static_cast<std::uint32_t>(rng() % 10);
        const std::uint32_t M0 = M + static_cast<std::uint32_t>(rng() % 12);
        const auto params = hm::BuildParams::with_defaults(M, M0, 8 + static_cast<std::uint32_t>(rng() % 32), rng());
        auto params_b = params;
        params_b.seed += 1;
        const hm::NeighborhoodStrategy strategy{rng() % 3 == 0 ? hm::StrategyKind::kKnn : hm::StrategyKind::kRng};
        const auto ids_a = oracle::iota_ids(n_a);
        const auto ids_b = oracle::iota_ids(n_b, static_cast<hm::VectorId>(n_a));
        auto a = hm::build_index(ids_a, params, strategy, f.dist);
        const auto b = hm::build_index(ids_b, params_b, strategy, f.dist);
        const std::string tag = "seed " + std::to_string(seed);
        check(a, ids_a, tag + " build");
        check(b, ids_b, tag + " build");

        auto all = ids_a;
        all.insert(all.end(), ids_b.begin(), ids_b.end());
        hm::MergeParams mp;
        mp.m = M;
        mp.m0 = M0;
        mp.local_ef = M + static_cast<std::uint32_t>(rng() % 24);
        mp.next_step_k = 1 + static_cast<std::uint32_t>(rng() % 8);
        mp.next_step_ef = mp.next_step_k + static_cast<std::uint32_t>(rng() % 16);
        mp.m_carry = 1 + static_cast<std::uint32_t>(rng() % 16);
        mp.seed = rng();
        for (auto algo : {hm::MergeAlgorithm::kNgm, hm::MergeAlgorithm::kIgtm, hm::MergeAlgorithm::kCgtm}) {
            check(hm::general_merge(a, b, algo, mp, strategy, f.dist), all,
                  tag + " " + std::string(hm::to_string(algo)));
        }
        check(hm::sigm_merge(a, b, params, strategy, f.dist), all, tag + " sigm");

        auto grown = ids_a;
        for (std::size_t i = 0; i < extra; ++i) {
            const auto v = static_cast<hm::VectorId>(n_a + n_b + i);
            hm::insert(a, v, rng, strategy, f.dist);
            grown.push_back(v);
        }
        check(a, grown, tag + " insert");
    }
    return {bad == 0, std::to_string(kInvariantSeeds) + " seeds, " + std::to_string(checked) + " indices, " +
                          std::to_string(bad) + " with violations" + (first.empty() ? "" : "; " + first)};
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / "hnswmerge_acceptance";
    fs::create_directories(dir);
    hm::RunConfig cfg;
    cfg.synthetic = {3000, 30, 32, 8};
    cfg.setup.build = hm::BuildParams::with_defaults(16, 32, 32, 7);
    cfg.grid = hm::default_grid(cfg.setup.build, 7);
    cfg.set_seed(7);

    std::vector<std::string> csv;
    std::vector<std::vector<std::string>> indices;
    for (int run = 0; run < 2; ++run) {
        const auto data = hm::load_benchmark_data(cfg);
        const auto result = hm::run_benchmark(cfg, data);
        std::ostringstream out;
        hm::write_report_csv(out, result.report);
        const fs::path csv_path = dir / ("report" + std::to_string(run) + ".csv");
        hm::io::write_file_atomic(csv_path, out.str());
        csv.push_back(read_bytes(csv_path));
        auto& files = indices.emplace_back();
        for (const auto& m : result.merges) {
            const fs::path p = dir / (m.label + std::to_string(run) + ".idx");
            hm::io::save_index(p, m.index, &data.base);
            files.push_back(read_bytes(p));
        }
    }
    const bool same_csv = !csv[0].empty() && csv[0] == csv[1];
    const bool same_idx = indices[0] == indices[1];
    fs::remove_all(dir);
    return {same_csv && same_idx, std::string("csv ") + (same_csv ? "identical" : "differs") + ", " +
                                      std::to_string(indices[0].size()) + " index files " +
                                      (same_idx ? "identical" : "differ")};
}

Outcome construction_oracles() {
    std::vector<std::string> notes;
    bool ok = true;
    {
        const float xs[] = {0.0F, 1.0F, 2.0F, 5.0F};
        oracle::Fixture f(oracle::line_points(xs), hm::MetricKind::kEuclidean);
        const hm::VectorId ids[] = {1, 2, 3};
        const auto got = hm::rng_construct(0, hm::score_candidates(0, ids, f.dist), 3, f.dist);
        if (got != std::vector<hm::VectorId>{1}) {
            ok = false;
            notes.push_back("1-D prune case wrong");
        }
    }
    {
        oracle::Fixture f(hm::Dataset(2, {0.0F, 0.0F, 1.0F, 0.0F, 0.0F, 1.0F}), hm::MetricKind::kEuclidean);
        const hm::VectorId ids[] = {1, 2};
        const auto got = hm::rng_construct(0, hm::score_candidates(0, ids, f.dist), 2, f.dist);
        if (got != std::vector<hm::VectorId>{1, 2}) {
            ok = false;
            notes.push_back("orthogonal pair wrong");
        }
    }
    {
        const float xs[] = {0.0F, 5.0F, 1.0F, 3.0F};
        oracle::Fixture f(oracle::line_points(xs), hm::MetricKind::kEuclidean);
        const hm::VectorId ids[] = {1, 2, 3};
        if (hm::knn_construct(0, hm::score_candidates(0, ids, f.dist), 2) != std::vector<hm::VectorId>{2, 3}) {
            ok = false;
            notes.push_back("knn hand sort wrong");
        }
    }
    std::mt19937_64 rng(8008);
    int bad = 0;
    for (int c = 0; c < kRngCases; ++c) {
        const std::size_t n = 2 + rng() % 80;
        oracle::Fixture f(oracle::uniform_points(n, 1 + rng() % 10, rng()));
        const auto v_star = static_cast<hm::VectorId>(rng() % n);
        std::vector<hm::VectorId> ids;
        for (hm::VectorId i = 0; i < n; ++i) {
            if (i != v_star) {
                ids.push_back(i);
            }
        }
        std::shuffle(ids.begin(), ids.end(), rng);
        ids.resize(1 + rng() % ids.size());
        const auto got = hm::rng_construct(v_star, hm::score_candidates(v_star, ids, f.dist), 1 + rng() % 16, f.dist);
        const auto nearest = oracle::full_sort_knn(f.data, f.data.row(v_star), ids, 1).front();
        const bool subset = std::all_of(got.begin(), got.end(), [&](hm::VectorId v) {
            return std::find(ids.begin(), ids.end(), v) != ids.end();
        });
        if (got.empty() || !subset || got.front() != nearest) {
            ++bad;
        }
    }
    if (bad != 0) {
        ok = false;
    }
    notes.push_back("hand traces " + std::string(notes.empty() ? "exact" : "WRONG") + ", " +
                    std::to_string(bad) + "/" + std::to_string(kRngCases) + " random cases bad");
    std::string detail;
    for (const auto& n : notes) {
        detail += (detail.empty() ? "" : "; ") + n;
    }
    return {ok, detail};
}

hm::HnswIndex flat(const hm::LayerGraph& g) {
    hm::HnswIndex h(hm::BuildParams{});
    for (hm::VectorId v : g.vertices()) {
        h.add_vertex(v, 0);
    }
    h.layer(0) = g;
    return h;
}

Outcome degenerate_equality() {
    std::mt19937_64 rng(9009);
    int bad = 0;
    for (int t = 0; t < kDegenerateTrials; ++t) {
        const std::size_t n_a = 1 + rng() % (kDegenerateMaxN / 2);
        const std::size_t n_b = 1 + rng() % (kDegenerateMaxN / 2);
        const std::size_t n = n_a + n_b;
        oracle::Fixture f(oracle::uniform_points(n, 1 + rng() % 8, rng()));
        const auto a = flat(oracle::complete_graph(oracle::iota_ids(n_a)));
        const auto b = flat(oracle::complete_graph(oracle::iota_ids(n_b, static_cast<hm::VectorId>(n_a))));
        hm::MergeParams p;
        p.m = 1 + static_cast<std::uint32_t>(rng() % 8);
        p.m0 = p.m + static_cast<std::uint32_t>(rng() % 8);
        p.local_ef = p.search_ef = p.jump_ef = static_cast<std::uint32_t>(n);
        p.seed = rng();
        const hm::NeighborhoodStrategy strategy{t % 2 == 0 ? hm::StrategyKind::kRng : hm::StrategyKind::kKnn};
        const auto ngm = hm::ngm_layer(a, b, 0, p, strategy, f.dist);
        if (hm::igtm_layer(a, b, 0, p, strategy, f.dist) != ngm || hm::cgtm_layer(a, b, 0, p, strategy, f.dist) != ngm) {
            ++bad;
        }
    }
    return {bad == 0, std::to_string(bad) + "/" + std::to_string(kDegenerateTrials) +
                          " trials with differing layers (n <= " + std::to_string(kDegenerateMaxN) + ")"};
}

}  // namespace

int main() {
    std::cout << "running 2x10k desk-scale benchmark (128-d Gaussian mixture, 100 queries)..." << std::endl;
    DeskRun desk;
    std::string desk_error;
    try {
        desk = run_desk_scale();
        std::cout << "info  build_dc=" << desk.result.build_dc;
        for (const auto& [label, dc] : desk.merge_dc) {
            std::cout << "  " << label << "_merge_dc=" << dc;
        }
        std::cout << std::endl;
    } catch (const std::exception& e) {
        desk_error = e.what();
    }
    auto desk_guard = [&](const std::function<Outcome(const DeskRun&)>& f) {
        return guarded([&] {
            if (!desk_error.empty()) {
                return Outcome{false, "desk run failed: " + desk_error};
            }
            return f(desk);
        });
    };

    report(1, "merge cost ordering", desk_guard(cost_ordering));
    report(2, "recall parity", desk_guard(recall_parity));
    report(3, "search cost parity", desk_guard(search_cost_parity));
    report(4, "SIGM cost dominance", desk_guard(sigm_dominance));
    report(5, "local search oracle equivalence", guarded(oracle_equivalence));
    report(6, "structural invariants", guarded(structural_invariants));
    report(7, "determinism", guarded(determinism));
    report(8, "neighborhood construction oracles", guarded(construction_oracles));
    report(9, "degenerate merge equality", guarded(degenerate_equality));

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
