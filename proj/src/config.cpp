#include "hnswmerge/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <set>
#include <stdexcept>

#include "hnswmerge/io.hpp"

namespace hnswmerge {

namespace pt = boost::property_tree;

namespace {

constexpr std::string_view kVariantPrefix = "variant:";

const std::set<std::string, std::less<>> kMergeKeys = {
    "search_ef", "jump_ef", "local_ef", "next_step_k", "next_step_ef", "m_carry"};

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    T value{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("bad value for '" + key + "': '" + text + "'");
    }
    return value;
}

void check_keys(const std::string& section, const pt::ptree& tree,
                const std::set<std::string, std::less<>>& allowed) {
    for (const auto& [key, _] : tree) {
        if (!allowed.contains(key)) {
            throw std::invalid_argument("unknown key '" + key + "' in [" + section + "]");
        }
    }
}

template <typename T>
void read_into(const pt::ptree& tree, const std::string& key, T& out) {
    if (const auto v = tree.get_optional<std::string>(key)) {
        out = parse_number<T>(key, *v);
    }
}

void read_merge_params(const pt::ptree& tree, MergeParams& p) {
    read_into(tree, "search_ef", p.search_ef);
    read_into(tree, "jump_ef", p.jump_ef);
    read_into(tree, "local_ef", p.local_ef);
    read_into(tree, "next_step_k", p.next_step_k);
    read_into(tree, "next_step_ef", p.next_step_ef);
    read_into(tree, "m_carry", p.m_carry);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string::npos ? text.size() : comma;
        out.push_back(trim(text.substr(start, end - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) {
        out.push_back(parse_number<std::size_t>("list", item));
    }
    return out;
}

void RunConfig::validate() const {
    if (!(setup.split > 0.0 && setup.split < 1.0)) {
        throw std::invalid_argument("split must lie in (0, 1)");
    }
    if (grid.empty()) {
        throw std::invalid_argument("merge grid is empty");
    }
    if (setup.k == 0 || setup.Ls.empty()) {
        throw std::invalid_argument("k and Ls must be non-empty");
    }
    setup.build.validate();
    for (const auto& v : grid) {
        if (v.kind != MergeKind::kSigm) {
            v.params.validate();
        }
    }
    if (!is_synthetic() && queries.empty()) {
        throw std::invalid_argument("a base file needs a query file");
    }
    if (is_synthetic() && (synthetic.n == 0 || synthetic.queries == 0 || synthetic.dim == 0 ||
                           synthetic.clusters == 0)) {
        throw std::invalid_argument("synthetic sizes must be positive");
    }
}

void RunConfig::set_seed(std::uint64_t s) {
    seed = s;
    setup.build.seed = s;
    for (auto& v : grid) {
        v.params.seed = s;
    }
}

RunConfig load_run_config(const std::filesystem::path& path) {
    pt::ptree root;
    try {
        pt::read_ini(path.string(), root);
    } catch (const pt::ini_parser_error& e) {
        throw std::runtime_error(e.what());
    }

    RunConfig cfg;
    std::uint32_t M = cfg.setup.build.M;
    std::uint32_t M0 = cfg.setup.build.M0;
    std::uint32_t efc = cfg.setup.build.ef_construction;
    MergeParams base_params;
    std::vector<std::string> algorithms = {"sigm", "ngm", "igtm", "cgtm"};

    for (const auto& [section, tree] : root) {
        if (section == "data") {
            check_keys(section, tree, {"base", "queries", "ground_truth", "n", "queries_n", "dim", "clusters"});
            cfg.base = tree.get<std::string>("base", "");
            cfg.queries = tree.get<std::string>("queries", "");
            if (const auto gt = tree.get_optional<std::string>("ground_truth"); gt && !gt->empty()) {
                cfg.ground_truth = *gt;
            }
            read_into(tree, "n", cfg.synthetic.n);
            read_into(tree, "queries_n", cfg.synthetic.queries);
            read_into(tree, "dim", cfg.synthetic.dim);
            read_into(tree, "clusters", cfg.synthetic.clusters);
        } else if (section == "run") {
            check_keys(section, tree, {"seed", "split", "k", "Ls", "strategy", "metric", "output"});
            read_into(tree, "seed", cfg.seed);
            if (const auto s = tree.get_optional<std::string>("split")) {
                cfg.setup.split = parse_number<double>("split", *s);
            }
            read_into(tree, "k", cfg.setup.k);
            if (const auto ls = tree.get_optional<std::string>("Ls")) {
                cfg.setup.Ls = parse_size_list(*ls);
            }
            if (const auto s = tree.get_optional<std::string>("strategy")) {
                cfg.setup.strategy = parse_strategy(trim(*s));
            }
            if (const auto s = tree.get_optional<std::string>("metric")) {
                cfg.setup.metric = parse_metric(trim(*s));
            }
            if (const auto s = tree.get_optional<std::string>("output")) {
                cfg.output = trim(*s);
            }
        } else if (section == "build") {
            check_keys(section, tree, {"M", "M0", "efc"});
            read_into(tree, "M", M);
            read_into(tree, "M0", M0);
            read_into(tree, "efc", efc);
        } else if (section == "merge") {
            auto allowed = kMergeKeys;
            allowed.insert("algorithms");
            check_keys(section, tree, allowed);
            read_merge_params(tree, base_params);
            if (const auto s = tree.get_optional<std::string>("algorithms")) {
                algorithms = split_list(*s);
            }
        } else if (!section.starts_with(kVariantPrefix)) {
            throw std::invalid_argument("unknown section [" + section + "]");
        }
    }

    cfg.setup.build = BuildParams::with_defaults(M, M0, efc, cfg.seed);
    base_params.m = M;
    base_params.m0 = M0;
    base_params.seed = cfg.seed;

    for (const auto& name : algorithms) {
        if (!name.empty()) {
            cfg.grid.push_back({name, parse_merge_kind(name), base_params});
        }
    }
    for (const auto& [section, tree] : root) {
        if (!section.starts_with(kVariantPrefix)) {
            continue;
        }
        auto allowed = kMergeKeys;
        allowed.insert("algo");
        check_keys(section, tree, allowed);
        MergeVariant v;
        v.label = section.substr(kVariantPrefix.size());
        v.kind = parse_merge_kind(trim(tree.get<std::string>("algo", "igtm")));
        v.params = base_params;
        read_merge_params(tree, v.params);
        cfg.grid.push_back(std::move(v));
    }

    cfg.validate();
    return cfg;
}

BenchmarkData load_benchmark_data(const RunConfig& cfg) {
    BenchmarkData data;
    if (cfg.is_synthetic()) {
        const auto& syn = cfg.synthetic;
        const Dataset all =
            make_gaussian_mixture(syn.n + syn.queries, syn.dim, syn.clusters, cfg.seed);
        data.base = all.slice(0, syn.n);
        data.queries = all.slice(syn.n, syn.n + syn.queries);
    } else {
        data.base = io::read_fvecs(cfg.base);
        data.queries = io::read_fvecs(cfg.queries);
        if (data.queries.dim() != data.base.dim()) {
            throw std::invalid_argument("query and base dimensions differ");
        }
    }
    if (cfg.ground_truth) {
        data.truth = io::ground_truth_from_records(io::read_ivecs(*cfg.ground_truth), cfg.setup.k);
        if (data.truth.lists.size() != data.queries.size()) {
            throw std::invalid_argument("ground truth and query counts differ");
        }
    } else {
        DistanceMeter meter;
        const MeteredDistance dist(data.base, cfg.setup.metric, meter, kPhaseGroundTruth);
        std::vector<VectorId> ids(data.base.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            ids[i] = static_cast<VectorId>(i);
        }
        data.truth = compute_ground_truth(data.queries, ids, cfg.setup.k, dist);
    }
    return data;
}

BenchmarkResult run_benchmark(const RunConfig& cfg, const BenchmarkData& data) {
    cfg.validate();
    return merge_benchmark(data.base, data.queries, data.truth, cfg.setup, cfg.grid);
}

}  // namespace hnswmerge
