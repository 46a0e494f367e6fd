#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hnswmerge/eval.hpp"
#include "hnswmerge/graph.hpp"
#include "hnswmerge/vecstore.hpp"

namespace hnswmerge::io {

// fvecs / ivecs: each record is a little-endian int32 count d followed by d
// little-endian float32 (fvecs) or int32 (ivecs) values.

/// All records must share one d. An empty file yields a Dataset with dim 0.
/// Throws FormatError (with byte offset) on truncation or inconsistent d.
Dataset read_fvecs(const std::filesystem::path& path);
void write_fvecs(const std::filesystem::path& path, const Dataset& data);

/// Records may have different lengths.
std::vector<std::vector<std::int32_t>> read_ivecs(const std::filesystem::path& path);
void write_ivecs(const std::filesystem::path& path,
                 const std::vector<std::vector<std::int32_t>>& records);

/// Ground truth from ivecs records, keeping the first k ids of each.
/// Throws FormatError if a record is shorter than k or holds a negative id.
GroundTruth ground_truth_from_records(const std::vector<std::vector<std::int32_t>>& records,
                                      std::size_t k);

/// Inverse of ground_truth_from_records.
std::vector<std::vector<std::int32_t>> ground_truth_to_records(const GroundTruth& truth);

inline constexpr char kIndexMagic[8] = {'H', 'N', 'S', 'W', 'M', 'R', 'G', '1'};
inline constexpr std::uint32_t kIndexVersion = 1;

struct LoadedIndex {
    HnswIndex index;
    /// Rows for the index's vertex ids when the file embeds vectors. Rows of
    /// ids outside the index are zero.
    std::optional<Dataset> vectors;
};

/// Writes the index (and, if `vectors` is given, the rows of its vertices)
/// to a temporary file and renames it over `path`.
///
/// Layout, all integers little-endian:
///   magic "HNSWMRG1" | u32 version | u32 dim | u32 metric | u32 flags (bit 0: vectors)
///   u64 n | i32 l_max | u32 M | u32 M0 | u32 ef_construction | f64 mL | u64 seed | u32 entry
///   n x (u32 id, u32 level), ascending id
///   per layer 0..l_max: u64 count, then count x (u32 id, u32 degree, degree x u32 neighbor)
///   if flag bit 0: n x dim f32, in levels-table order
void save_index(const std::filesystem::path& path, const HnswIndex& h,
                const Dataset* vectors = nullptr);

/// Throws FormatError on a bad magic or truncated/inconsistent content and
/// UnsupportedVersionError on a version other than kIndexVersion.
LoadedIndex load_index(const std::filesystem::path& path);

/// Writes `content` to a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace hnswmerge::io
