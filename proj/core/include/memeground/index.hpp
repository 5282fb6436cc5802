#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memeground/embedding.hpp"

namespace memeground {

/// Default similarity threshold: a cosine score of 0.60.
inline constexpr double kDefaultThreshold = 0.60;
/// Slack allowed around [-1, 1] for inner products of unit vectors.
inline constexpr double kScoreEpsilon = 1e-5;

struct TemplateExemplar {
  std::string template_id;
  std::uint32_t exemplar_idx = 0;
  EmbeddingVector vector;
};

struct MatchResult {
  std::string template_id;
  float score = 0.0f;
  std::uint32_t exemplar_idx = 0;

  bool operator==(const MatchResult&) const = default;
};

struct Classification {
  std::string item_id;
  bool is_meme = false;
  MatchResult best;
  double threshold = kDefaultThreshold;
};

/// The single decision rule used across the pipeline: a score at or above
/// the threshold is a meme, only scores strictly below it are not.
inline bool meets_threshold(float score, double threshold) noexcept {
  return static_cast<double>(score) >= threshold;
}

/// Throws ParameterError unless 0 <= t <= 1.
void validate_threshold(double threshold);

/// Inner product of two equal-length vectors: float products accumulated in
/// double, strictly left to right, then rounded to float.
float dot(std::span<const float> a, std::span<const float> b) noexcept;

/// Immutable exact inner-product index over template exemplars.
///
/// Exemplars are kept sorted by (template_id, exemplar_idx) in one contiguous
/// row-major buffer; every query scans all of them. Safe for concurrent
/// readers once built.
class FlatIndex {
 public:
  /// Throws BuildError on empty input, mixed dimensions or a duplicate
  /// (template_id, exemplar_idx); NormalizationError on off-norm vectors.
  static FlatIndex build(std::vector<TemplateExemplar> exemplars);

  std::uint32_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t template_count() const noexcept;

  const std::string& template_id(std::size_t row) const { return ids_[row].template_id; }
  std::uint32_t exemplar_idx(std::size_t row) const { return ids_[row].exemplar_idx; }
  std::span<const float> vector(std::size_t row) const {
    return {data_.data() + row * dim_, dim_};
  }

  /// Exemplar-level hits, score descending, ties by (template_id,
  /// exemplar_idx) ascending; min(k, size()) entries. Throws QueryError on a
  /// dimension mismatch or k == 0.
  std::vector<MatchResult> query_topk(const EmbeddingVector& query, std::size_t k) const;

  /// Best template under max-over-exemplars aggregation; ties go to the
  /// lexicographically smallest template_id.
  MatchResult best_template(const EmbeddingVector& query) const;

  Classification classify(const EmbeddingVector& query, double threshold,
                          std::string item_id = {}) const;

 private:
  struct RowId {
    std::string template_id;
    std::uint32_t exemplar_idx;
  };

  FlatIndex() = default;
  void check_query(const EmbeddingVector& query) const;

  std::uint32_t dim_ = 0;
  std::vector<RowId> ids_;
  std::vector<float> data_;
};

inline FlatIndex build_index(std::vector<TemplateExemplar> exemplars) {
  return FlatIndex::build(std::move(exemplars));
}

/// One row of the template map: exemplar_item_id TAB template_id.
struct TemplateMapEntry {
  std::string exemplar_item_id;
  std::string template_id;
};

/// Throws FormatError on rows without exactly two non-empty columns or a
/// duplicate exemplar id.
std::vector<TemplateMapEntry> read_template_map(const std::filesystem::path& path);
void write_template_map(std::span<const TemplateMapEntry> entries, const std::filesystem::path& path);

/// Pairs exemplar vectors with their templates. exemplar_idx counts a
/// template's rows in template-map order starting at 0. Throws BuildError when
/// a mapped exemplar has no vector; unmapped vectors are ignored.
std::vector<TemplateExemplar> exemplars_from(const EmbeddingBatch& vectors,
                                             std::span<const TemplateMapEntry> map);

/// Loads the persisted form of an index: exemplar EMB1 file + template map.
FlatIndex load_index(const std::filesystem::path& exemplars_path,
                     const std::filesystem::path& template_map_path);

}  // namespace memeground
