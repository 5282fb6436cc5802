#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "memeground/ingest.hpp"
#include "memeground/pipeline.hpp"

namespace memeground {

inline constexpr std::string_view kTotalRowName = "Total";
inline constexpr std::size_t kDefaultTopN = 5;

/// Meme-to-image ratio in hundredths, truncated: floor(100 * memes / images).
/// 0 when there are no image posts.
int mir_hundredths(std::size_t image_posts, std::size_t meme_posts) noexcept;
/// "0.17"-style rendering of mir_hundredths.
std::string format_mir(int hundredths);

struct CommunityStats {
  Platform platform = Platform::reddit;
  std::string community;  // kTotalRowName on a platform's totals row
  std::size_t posts = 0;
  std::size_t image_posts = 0;
  std::size_t meme_posts = 0;
  int mir = 0;  // hundredths

  std::string mir_text() const { return format_mir(mir); }
  bool operator==(const CommunityStats&) const = default;
};

/// One row per (platform, community) ordered by community, followed by a
/// totals row per platform. A post is an image post when it has a match
/// record and a meme post when that record is a meme.
std::vector<CommunityStats> community_stats(std::span<const CanonicalPost> posts,
                                            std::span<const MatchRecord> matches);

struct PopularityEntry {
  std::string template_id;
  Platform platform = Platform::reddit;
  std::size_t occurrence_count = 0;
  std::size_t rank = 0;

  bool operator==(const PopularityEntry&) const = default;
};

/// Top `top_n` templates by number of meme posts on `platform`, count
/// descending then template_id ascending; ranks 1..n. Non-meme records are
/// ignored. Throws ParameterError when top_n < 1.
std::vector<PopularityEntry> popularity(std::span<const MatchRecord> matches, Platform platform,
                                        std::size_t top_n);

/// template_ids shared by the first k entries of both rankings.
std::set<std::string> cross_platform_overlap(std::span<const PopularityEntry> a,
                                             std::span<const PopularityEntry> b, std::size_t k);

std::string stats_to_tsv(std::span<const CommunityStats> rows);
std::string popularity_to_tsv(std::span<const PopularityEntry> entries);
std::string overlap_to_json(const std::set<std::string>& ids);

}  // namespace memeground
