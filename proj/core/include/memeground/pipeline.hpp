#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memeground/embedding.hpp"
#include "memeground/index.hpp"
#include "memeground/ingest.hpp"
#include "memeground/lake.hpp"

namespace memeground {

struct MatchRecord {
  std::string post_id;
  std::string item_id;
  Platform platform = Platform::reddit;
  std::string community;
  std::string template_id;
  float score = 0.0f;
  bool is_meme = false;
  double threshold = kDefaultThreshold;

  bool operator==(const MatchRecord&) const = default;
};

/// Classifies every image post of the lake against `index`. Records are sorted
/// by post_id; non-image posts are skipped. Throws CoverageError, listing all
/// missing image ids, if any image post has no vector in `embeddings`.
std::vector<MatchRecord> classify_posts(std::span<const CanonicalPost> posts,
                                        const LakeManifest& manifest,
                                        const EmbeddingBatch& embeddings, const FlatIndex& index,
                                        double threshold);

std::vector<MatchRecord> run_classification(const std::filesystem::path& lake_root,
                                            const std::filesystem::path& embeddings_path,
                                            const FlatIndex& index, double threshold);

std::string match_to_json_line(const MatchRecord& record);
/// Throws FormatError.
MatchRecord match_from_json_line(std::string_view line);

void write_matches_jsonl(std::span<const MatchRecord> records, const std::filesystem::path& path);
/// Throws FormatError with the line number.
std::vector<MatchRecord> read_matches_jsonl(const std::filesystem::path& path);

/// Inner join on post_id, sorted by post_id. Throws JoinError on a duplicate
/// post_id among the matches.
std::vector<std::pair<CanonicalPost, MatchRecord>> join_posts_matches(
    std::span<const CanonicalPost> posts, std::span<const MatchRecord> matches);

}  // namespace memeground
