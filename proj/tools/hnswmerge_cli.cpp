// Command-line front end: synth, build, merge, ground-truth, search-bench,
// bench-all.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hnswmerge/build.hpp"
#include "hnswmerge/config.hpp"
#include "hnswmerge/errors.hpp"
#include "hnswmerge/eval.hpp"
#include "hnswmerge/io.hpp"
#include "hnswmerge/merge.hpp"

namespace hm = hnswmerge;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Problems with the request itself rather than with the work.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BuildArgs {
    std::string input;
    std::string out;
    std::uint32_t M = 16;
    std::uint32_t M0 = 32;
    std::uint32_t efc = 32;
    std::uint64_t seed = 42;
    std::string range;
    std::string strategy = "rng";
    std::string metric = "sqeuclidean";
    bool no_vectors = false;
};

struct MergeArgs {
    std::string a;
    std::string b;
    std::string algo;
    std::string out;
    std::string base;
    std::string strategy = "rng";
    hm::MergeParams params;
    bool no_vectors = false;
};

struct GroundTruthArgs {
    std::string base;
    std::string queries;
    std::size_t k = 5;
    std::string out;
    std::string metric = "sqeuclidean";
};

struct SearchBenchArgs {
    std::string index;
    std::string queries;
    std::string gt;
    std::size_t k = 5;
    std::string Ls = "32,40,50,64,72";
    std::string out;
    std::string base;
    std::string label = "index";
    std::uint64_t merge_dc = 0;
    std::uint64_t seed = 42;
};

struct SynthArgs {
    std::size_t n = 20000;
    std::size_t queries = 100;
    std::size_t dim = 128;
    std::size_t clusters = 32;
    std::uint64_t seed = 42;
    std::string out;
    std::string queries_out;
};

struct BenchAllArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

std::pair<std::size_t, std::size_t> parse_range(const std::string& text, std::size_t n) {
    if (text.empty()) {
        return {0, n};
    }
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw UsageError("--range expects LO:HI, got '" + text + "'");
    }
    try {
        const std::size_t lo = std::stoul(text.substr(0, colon));
        const std::size_t hi = std::stoul(text.substr(colon + 1));
        if (lo >= hi || hi > n) {
            throw UsageError("--range " + text + " is empty or past the " + std::to_string(n) +
                             " input rows");
        }
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("--range expects LO:HI, got '" + text + "'");
    }
}

template <typename F>
auto as_usage(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

int run_build(const BuildArgs& args) {
    const auto params = as_usage([&] {
        auto p = hm::BuildParams::with_defaults(args.M, args.M0, args.efc, args.seed);
        p.validate();
        return p;
    });
    const auto strategy = as_usage([&] { return hm::NeighborhoodStrategy{hm::parse_strategy(args.strategy)}; });
    const auto metric = as_usage([&] { return hm::parse_metric(args.metric); });

    const hm::Dataset data = hm::io::read_fvecs(args.input);
    const auto [lo, hi] = parse_range(args.range, data.size());
    std::vector<hm::VectorId> ids(hi - lo);
    std::iota(ids.begin(), ids.end(), static_cast<hm::VectorId>(lo));

    hm::DistanceMeter meter;
    const hm::MeteredDistance dist(data, metric, meter, hm::kPhaseBuild);
    const hm::HnswIndex h = hm::build_index(ids, params, strategy, dist);
    hm::io::save_index(args.out, h, args.no_vectors ? nullptr : &data);
    std::cout << "build_dc=" << meter.count(hm::kPhaseBuild) << '\n';
    return 0;
}

/// Vectors for every id of a and b: from --base, or stitched from the files.
hm::Dataset merge_vectors(const MergeArgs& args, const hm::io::LoadedIndex& a,
                          const hm::io::LoadedIndex& b) {
    if (!args.base.empty()) {
        return hm::io::read_fvecs(args.base);
    }
    if (!a.vectors || !b.vectors) {
        throw UsageError("index files carry no vectors; pass --base");
    }
    if (a.vectors->dim() != b.vectors->dim()) {
        throw UsageError("index files have different dimensions");
    }
    hm::Dataset out(a.vectors->dim());
    for (const auto* side : {&a, &b}) {
        for (const auto& [v, _] : side->index.levels()) {
            out.set_row(v, side->vectors->row(v));
        }
    }
    return out;
}

int run_merge(const MergeArgs& args) {
    const auto kind = as_usage([&] { return hm::parse_merge_kind(args.algo); });
    const auto strategy = as_usage([&] { return hm::NeighborhoodStrategy{hm::parse_strategy(args.strategy)}; });

    const auto a = hm::io::load_index(args.a);
    const auto b = hm::io::load_index(args.b);
    if (a.index.metric() != b.index.metric()) {
        throw UsageError("indices use different metrics");
    }
    const hm::Dataset data = merge_vectors(args, a, b);

    hm::MergeVariant variant{args.algo, kind, args.params};
    variant.params.m = a.index.params().M;
    variant.params.m0 = a.index.params().M0;
    if (kind != hm::MergeKind::kSigm) {
        as_usage([&] { variant.params.validate(); return 0; });
    }
    as_usage([&] { hm::require_disjoint(a.index, b.index); return 0; });

    hm::DistanceMeter meter;
    const hm::MeteredDistance dist(data, a.index.metric(), meter, hm::kPhaseMerge);
    const hm::HnswIndex merged =
        hm::run_merge(a.index, b.index, variant, a.index.params(), strategy, dist);
    hm::io::save_index(args.out, merged, args.no_vectors ? nullptr : &data);
    std::cout << "merge_dc=" << meter.count(hm::kPhaseMerge) << '\n';
    return 0;
}

int run_ground_truth(const GroundTruthArgs& args) {
    const auto metric = as_usage([&] { return hm::parse_metric(args.metric); });
    const hm::Dataset base = hm::io::read_fvecs(args.base);
    const hm::Dataset queries = hm::io::read_fvecs(args.queries);
    if (base.dim() != queries.dim()) {
        throw UsageError("base and query dimensions differ");
    }
    if (args.k == 0 || args.k > base.size()) {
        throw UsageError("--k must lie in [1, " + std::to_string(base.size()) + "]");
    }
    std::vector<hm::VectorId> ids(base.size());
    std::iota(ids.begin(), ids.end(), hm::VectorId{0});
    hm::DistanceMeter meter;
    const hm::MeteredDistance dist(base, metric, meter, hm::kPhaseGroundTruth);
    const auto truth = hm::compute_ground_truth(queries, ids, args.k, dist);
    hm::io::write_ivecs(args.out, hm::io::ground_truth_to_records(truth));
    return 0;
}

int run_search_bench(const SearchBenchArgs& args) {
    const auto Ls = as_usage([&] { return hm::parse_size_list(args.Ls); });
    if (args.k == 0) {
        throw UsageError("--k must be positive");
    }
    auto loaded = hm::io::load_index(args.index);
    hm::Dataset base;
    if (!args.base.empty()) {
        base = hm::io::read_fvecs(args.base);
    } else if (loaded.vectors) {
        base = std::move(*loaded.vectors);
    } else {
        throw UsageError("index file carries no vectors; pass --base");
    }
    const hm::Dataset queries = hm::io::read_fvecs(args.queries);
    if (queries.dim() != base.dim()) {
        throw UsageError("query and index dimensions differ");
    }
    const auto truth = hm::io::ground_truth_from_records(hm::io::read_ivecs(args.gt), args.k);
    if (truth.lists.size() != queries.size()) {
        throw UsageError("ground truth has " + std::to_string(truth.lists.size()) +
                         " records for " + std::to_string(queries.size()) + " queries");
    }

    hm::SweepReport report;
    report.k = args.k;
    report.comment = "seed=" + std::to_string(args.seed) +
                     ", params=index:" + std::filesystem::path(args.index).filename().string();
    report.rows = hm::search_sweep(loaded.index, base, queries, truth, args.k, Ls, args.label,
                                   args.merge_dc);
    std::ostringstream csv;
    hm::write_report_csv(csv, report);
    hm::io::write_file_atomic(args.out, csv.str());
    return 0;
}

int run_synth(const SynthArgs& args) {
    if (args.n == 0 || args.dim == 0 || args.clusters == 0) {
        throw UsageError("--n, --dim and --clusters must be positive");
    }
    if (args.queries > 0 && args.queries_out.empty()) {
        throw UsageError("--queries needs --queries-out");
    }
    const auto all = hm::make_gaussian_mixture(args.n + args.queries, args.dim, args.clusters, args.seed);
    hm::io::write_fvecs(args.out, all.slice(0, args.n));
    if (args.queries > 0) {
        hm::io::write_fvecs(args.queries_out, all.slice(args.n, args.n + args.queries));
    }
    return 0;
}

int run_bench_all(const BenchAllArgs& args) {
    auto cfg = hm::load_run_config(args.config);
    if (args.seed) {
        cfg.set_seed(*args.seed);
    }
    if (!args.out.empty()) {
        cfg.output = args.out;
    }
    const auto data = hm::load_benchmark_data(cfg);
    const auto result = hm::run_benchmark(cfg, data);
    std::ostringstream csv;
    hm::write_report_csv(csv, result.report);
    hm::io::write_file_atomic(cfg.output, csv.str());
    for (const auto& m : result.merges) {
        std::cerr << m.label << " merge_dc=" << m.merge_dc << '\n';
    }
    return 0;
}

void add_merge_params(CLI::App* cmd, hm::MergeParams& p) {
    cmd->add_option("--search-ef", p.search_ef, "NGM search beam")->capture_default_str();
    cmd->add_option("--jump-ef", p.jump_ef, "restart search beam")->capture_default_str();
    cmd->add_option("--local-ef", p.local_ef, "local search beam")->capture_default_str();
    cmd->add_option("--next-step-k", p.next_step_k, "next-vertex candidates")->capture_default_str();
    cmd->add_option("--next-step-ef", p.next_step_ef, "next-vertex search beam")->capture_default_str();
    cmd->add_option("--m-carry", p.m_carry, "carried pool size")->capture_default_str();
    cmd->add_option("--seed", p.seed, "restart generator seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Build, merge and benchmark HNSW indices"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "write a seeded Gaussian mixture as fvecs");
    synth_cmd->add_option("--n", synth.n, "base rows")->capture_default_str();
    synth_cmd->add_option("--queries", synth.queries, "query rows drawn after the base rows")
        ->capture_default_str();
    synth_cmd->add_option("--dim", synth.dim)->capture_default_str();
    synth_cmd->add_option("--clusters", synth.clusters)->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
    synth_cmd->add_option("--out", synth.out)->required();
    synth_cmd->add_option("--queries-out", synth.queries_out);

    BuildArgs build;
    auto* build_cmd = app.add_subcommand("build", "build an index over fvecs rows");
    build_cmd->add_option("--input", build.input)->required()->check(CLI::ExistingFile);
    build_cmd->add_option("--out", build.out)->required();
    build_cmd->add_option("--M", build.M)->capture_default_str();
    build_cmd->add_option("--M0", build.M0)->capture_default_str();
    build_cmd->add_option("--efc", build.efc)->capture_default_str();
    build_cmd->add_option("--seed", build.seed)->capture_default_str();
    build_cmd->add_option("--range", build.range, "row range LO:HI (ids keep their row number)");
    build_cmd->add_option("--strategy", build.strategy, "rng or knn")->capture_default_str();
    build_cmd->add_option("--metric", build.metric)->capture_default_str();
    build_cmd->add_flag("--no-vectors", build.no_vectors, "store ids only");

    MergeArgs merge;
    auto* merge_cmd = app.add_subcommand("merge", "merge two indices with disjoint ids");
    merge_cmd->add_option("--a", merge.a)->required()->check(CLI::ExistingFile);
    merge_cmd->add_option("--b", merge.b)->required()->check(CLI::ExistingFile);
    merge_cmd->add_option("--algo", merge.algo)
        ->required()
        ->check(CLI::IsMember({"sigm", "ngm", "igtm", "cgtm"}));
    merge_cmd->add_option("--out", merge.out)->required();
    merge_cmd->add_option("--base", merge.base, "fvecs file holding the vectors")
        ->check(CLI::ExistingFile);
    merge_cmd->add_option("--strategy", merge.strategy)->capture_default_str();
    merge_cmd->add_flag("--no-vectors", merge.no_vectors, "store ids only");
    add_merge_params(merge_cmd, merge.params);

    GroundTruthArgs gt;
    auto* gt_cmd = app.add_subcommand("ground-truth", "exact k nearest neighbors per query");
    gt_cmd->add_option("--base", gt.base)->required()->check(CLI::ExistingFile);
    gt_cmd->add_option("--queries", gt.queries)->required()->check(CLI::ExistingFile);
    gt_cmd->add_option("--k", gt.k)->capture_default_str();
    gt_cmd->add_option("--out", gt.out)->required();
    gt_cmd->add_option("--metric", gt.metric)->capture_default_str();

    SearchBenchArgs sb;
    auto* sb_cmd = app.add_subcommand("search-bench", "recall and search cost per beam width");
    sb_cmd->add_option("--index", sb.index)->required()->check(CLI::ExistingFile);
    sb_cmd->add_option("--queries", sb.queries)->required()->check(CLI::ExistingFile);
    sb_cmd->add_option("--gt", sb.gt)->required()->check(CLI::ExistingFile);
    sb_cmd->add_option("--k", sb.k)->capture_default_str();
    sb_cmd->add_option("--L", sb.Ls, "comma-separated beam widths")->capture_default_str();
    sb_cmd->add_option("--out", sb.out)->required();
    sb_cmd->add_option("--base", sb.base)->check(CLI::ExistingFile);
    sb_cmd->add_option("--label", sb.label, "algorithm column")->capture_default_str();
    sb_cmd->add_option("--merge-dc", sb.merge_dc, "merge_dc column")->capture_default_str();
    sb_cmd->add_option("--seed", sb.seed, "recorded in the header")->capture_default_str();

    BenchAllArgs all;
    auto* all_cmd = app.add_subcommand("bench-all", "split, build twice, merge the grid, sweep");
    all_cmd->add_option("--config", all.config)->required()->check(CLI::ExistingFile);
    all_cmd->add_option("--out", all.out, "overrides [run] output");
    all_cmd->add_option("--seed", all.seed, "overrides [run] seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*synth_cmd) {
            return run_synth(synth);
        }
        if (*build_cmd) {
            return run_build(build);
        }
        if (*merge_cmd) {
            return run_merge(merge);
        }
        if (*gt_cmd) {
            return run_ground_truth(gt);
        }
        if (*sb_cmd) {
            return run_search_bench(sb);
        }
        return run_bench_all(all);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
