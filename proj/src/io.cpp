#include "hnswmerge/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <system_error>

#include "hnswmerge/errors.hpp"

namespace hnswmerge::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats are read and written as host-order little-endian");

namespace {

class ByteReader {
public:
    explicit ByteReader(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw std::runtime_error("cannot open " + path.string());
        }
        bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    std::uint64_t offset() const noexcept { return pos_; }
    std::uint64_t remaining() const noexcept { return bytes_.size() - pos_; }
    bool done() const noexcept { return pos_ == bytes_.size(); }

    template <typename T>
    T read(const char* what) {
        T value;
        read_into(&value, sizeof(T), what);
        return value;
    }

    void read_into(void* dst, std::size_t n, const char* what) {
        if (remaining() < n) {
            throw FormatError(std::string("truncated ") + what, pos_);
        }
        std::memcpy(dst, bytes_.data() + pos_, n);
        pos_ += n;
    }

    /// Fails before allocating when `count` items of `width` bytes cannot fit.
    void require(std::uint64_t count, std::uint64_t width, const char* what) const {
        if (width != 0 && count > remaining() / width) {
            throw FormatError(std::string("truncated ") + what, pos_);
        }
    }

private:
    std::vector<char> bytes_;
    std::uint64_t pos_ = 0;
};

class ByteWriter {
public:
    template <typename T>
    void put(T value) {
        const auto* p = reinterpret_cast<const char*>(&value);
        out_.append(p, sizeof(T));
    }

    void put_bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }

    std::string& str() noexcept { return out_; }

private:
    std::string out_;
};

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

Dataset read_fvecs(const std::filesystem::path& path) {
    ByteReader in(path);
    std::size_t dim = 0;
    std::vector<float> values;
    while (!in.done()) {
        const std::uint64_t record_start = in.offset();
        const auto d = in.read<std::int32_t>("fvecs dimension");
        if (d <= 0) {
            throw FormatError("non-positive fvecs dimension " + std::to_string(d), record_start);
        }
        if (dim == 0) {
            dim = static_cast<std::size_t>(d);
        } else if (static_cast<std::size_t>(d) != dim) {
            throw FormatError("inconsistent fvecs dimension " + std::to_string(d) +
                                  " (expected " + std::to_string(dim) + ")",
                              record_start);
        }
        in.require(dim, sizeof(float), "fvecs record");
        const std::size_t old = values.size();
        values.resize(old + dim);
        in.read_into(values.data() + old, dim * sizeof(float), "fvecs record");
    }
    return Dataset(dim, std::move(values));
}

void write_fvecs(const std::filesystem::path& path, const Dataset& data) {
    ByteWriter out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = data.row(static_cast<VectorId>(i));
        out.put(static_cast<std::int32_t>(row.size()));
        out.put_bytes(row.data(), row.size() * sizeof(float));
    }
    write_file_atomic(path, out.str());
}

std::vector<std::vector<std::int32_t>> read_ivecs(const std::filesystem::path& path) {
    ByteReader in(path);
    std::vector<std::vector<std::int32_t>> records;
    while (!in.done()) {
        const std::uint64_t record_start = in.offset();
        const auto d = in.read<std::int32_t>("ivecs length");
        if (d < 0) {
            throw FormatError("negative ivecs length " + std::to_string(d), record_start);
        }
        in.require(static_cast<std::uint64_t>(d), sizeof(std::int32_t), "ivecs record");
        auto& rec = records.emplace_back(static_cast<std::size_t>(d));
        in.read_into(rec.data(), rec.size() * sizeof(std::int32_t), "ivecs record");
    }
    return records;
}

void write_ivecs(const std::filesystem::path& path,
                 const std::vector<std::vector<std::int32_t>>& records) {
    ByteWriter out;
    for (const auto& rec : records) {
        out.put(static_cast<std::int32_t>(rec.size()));
        out.put_bytes(rec.data(), rec.size() * sizeof(std::int32_t));
    }
    write_file_atomic(path, out.str());
}

GroundTruth ground_truth_from_records(const std::vector<std::vector<std::int32_t>>& records,
                                      std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument("k must be positive");
    }
    GroundTruth gt;
    gt.k = k;
    gt.lists.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.size() < k) {
            throw FormatError("ground truth record " + std::to_string(i) + " has " +
                                  std::to_string(rec.size()) + " ids, need " + std::to_string(k),
                              0);
        }
        auto& list = gt.lists.emplace_back();
        for (std::size_t j = 0; j < k; ++j) {
            if (rec[j] < 0) {
                throw FormatError("negative id in ground truth record " + std::to_string(i), 0);
            }
            list.push_back(static_cast<VectorId>(rec[j]));
        }
    }
    return gt;
}

std::vector<std::vector<std::int32_t>> ground_truth_to_records(const GroundTruth& truth) {
    std::vector<std::vector<std::int32_t>> out;
    out.reserve(truth.lists.size());
    for (const auto& list : truth.lists) {
        out.emplace_back(list.begin(), list.end());
    }
    return out;
}

void save_index(const std::filesystem::path& path, const HnswIndex& h, const Dataset* vectors) {
    const std::uint32_t dim = vectors != nullptr ? static_cast<std::uint32_t>(vectors->dim()) : 0;
    const BuildParams& p = h.params();

    ByteWriter out;
    out.put_bytes(kIndexMagic, sizeof(kIndexMagic));
    out.put(kIndexVersion);
    out.put(dim);
    out.put(static_cast<std::uint32_t>(h.metric()));
    out.put(static_cast<std::uint32_t>(vectors != nullptr ? 1u : 0u));
    out.put(static_cast<std::uint64_t>(h.size()));
    out.put(static_cast<std::int32_t>(h.max_level()));
    out.put(p.M);
    out.put(p.M0);
    out.put(p.ef_construction);
    out.put(p.mL);
    out.put(p.seed);
    out.put(static_cast<std::uint32_t>(h.empty() ? 0 : h.entry()));

    for (const auto& [v, level] : h.levels()) {
        out.put(static_cast<std::uint32_t>(v));
        out.put(static_cast<std::uint32_t>(level));
    }
    for (int l = 0; l <= h.max_level(); ++l) {
        const auto& g = h.layer(l);
        out.put(static_cast<std::uint64_t>(g.size()));
        for (VectorId v : g.vertices()) {
            const auto ns = g.neighbors(v);
            out.put(static_cast<std::uint32_t>(v));
            out.put(static_cast<std::uint32_t>(ns.size()));
            out.put_bytes(ns.data(), ns.size() * sizeof(VectorId));
        }
    }
    if (vectors != nullptr) {
        for (const auto& [v, _] : h.levels()) {
            const auto row = vectors->row(v);
            out.put_bytes(row.data(), row.size() * sizeof(float));
        }
    }
    write_file_atomic(path, out.str());
}

LoadedIndex load_index(const std::filesystem::path& path) {
    ByteReader in(path);
    char magic[sizeof(kIndexMagic)];
    in.read_into(magic, sizeof(magic), "index header");
    if (std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0) {
        throw FormatError("bad index magic", 0);
    }
    const std::uint64_t version_at = in.offset();
    const auto version = in.read<std::uint32_t>("index header");
    if (version != kIndexVersion) {
        throw UnsupportedVersionError(version, version_at);
    }
    const auto dim = in.read<std::uint32_t>("index header");
    const auto metric_at = in.offset();
    const auto metric_raw = in.read<std::uint32_t>("index header");
    if (metric_raw > static_cast<std::uint32_t>(MetricKind::kEuclidean)) {
        throw FormatError("unknown metric code " + std::to_string(metric_raw), metric_at);
    }
    const auto flags = in.read<std::uint32_t>("index header");
    const auto n = in.read<std::uint64_t>("index header");
    const auto l_max = in.read<std::int32_t>("index header");
    BuildParams p;
    p.M = in.read<std::uint32_t>("index header");
    p.M0 = in.read<std::uint32_t>("index header");
    p.ef_construction = in.read<std::uint32_t>("index header");
    p.mL = in.read<double>("index header");
    p.seed = in.read<std::uint64_t>("index header");
    const auto entry = in.read<std::uint32_t>("index header");

    if ((n == 0) != (l_max < 0)) {
        throw FormatError("vertex count and l_max disagree", in.offset());
    }
    const bool has_vectors = (flags & 1u) != 0;
    if (has_vectors && dim == 0 && n != 0) {
        throw FormatError("vector payload flagged with dim 0", in.offset());
    }

    HnswIndex h(p, static_cast<MetricKind>(metric_raw));
    in.require(n, 8, "levels table");
    std::vector<VectorId> order;
    order.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto at = in.offset();
        const auto v = in.read<std::uint32_t>("levels table");
        const auto level = in.read<std::uint32_t>("levels table");
        if (static_cast<std::int64_t>(level) > l_max) {
            throw FormatError("vertex level above l_max", at);
        }
        if (h.contains(v)) {
            throw FormatError("duplicate vertex " + std::to_string(v), at);
        }
        h.add_vertex(v, static_cast<int>(level));
        order.push_back(v);
    }
    if (h.max_level() != l_max) {
        throw FormatError("l_max does not match the levels table", in.offset());
    }

    for (int l = 0; l <= l_max; ++l) {
        const auto at = in.offset();
        const auto count = in.read<std::uint64_t>("layer block");
        LayerGraph& g = h.layer(l);
        if (count != g.size()) {
            throw FormatError("layer " + std::to_string(l) + " vertex count mismatch", at);
        }
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto vertex_at = in.offset();
            const auto v = in.read<std::uint32_t>("adjacency");
            const auto degree = in.read<std::uint32_t>("adjacency");
            in.require(degree, sizeof(VectorId), "adjacency");
            std::vector<VectorId> ns(degree);
            in.read_into(ns.data(), ns.size() * sizeof(VectorId), "adjacency");
            try {
                g.set_neighborhood(v, std::move(ns));
            } catch (const std::invalid_argument& e) {
                throw FormatError(std::string("bad adjacency: ") + e.what(), vertex_at);
            }
        }
    }

    LoadedIndex loaded;
    if (n != 0) {
        try {
            h.set_entry(entry);
        } catch (const std::exception&) {
            throw FormatError("entry " + std::to_string(entry) + " is not on the top layer", in.offset());
        }
    }
    if (has_vectors) {
        in.require(n, static_cast<std::uint64_t>(dim) * sizeof(float), "vector payload");
        Dataset data(dim);
        std::vector<float> row(dim);
        for (VectorId v : order) {
            in.read_into(row.data(), row.size() * sizeof(float), "vector payload");
            data.set_row(v, row);
        }
        loaded.vectors = std::move(data);
    }
    if (!in.done()) {
        throw FormatError("trailing bytes after index payload", in.offset());
    }
    loaded.index = std::move(h);
    return loaded;
}

}  // namespace hnswmerge::io
