#include "memeground/analytics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "memeground/errors.hpp"

namespace memeground {

int mir_hundredths(std::size_t image_posts, std::size_t meme_posts) noexcept {
  if (image_posts == 0) return 0;
  // Integer floor; no float rounding can push 0.1699.. up to 0.17.
  return static_cast<int>((meme_posts * 100) / image_posts);
}

std::string format_mir(int hundredths) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%d.%02d", hundredths / 100, hundredths % 100);
  return buf;
}

std::vector<CommunityStats> community_stats(std::span<const CanonicalPost> posts,
                                            std::span<const MatchRecord> matches) {
  std::unordered_map<std::string_view, const MatchRecord*> by_post;
  for (const auto& m : matches) by_post.emplace(m.post_id, &m);

  std::map<std::pair<Platform, std::string>, CommunityStats> rows;
  for (const auto& post : posts) {
    CommunityStats& row = rows[{post.platform, post.community}];
    row.platform = post.platform;
    row.community = post.community;
    ++row.posts;
    if (const auto it = by_post.find(post.post_id); it != by_post.end()) {
      ++row.image_posts;
      if (it->second->is_meme) ++row.meme_posts;
    }
  }

  std::vector<CommunityStats> out;
  CommunityStats total;
  bool open = false;
  auto close_total = [&] {
    total.mir = mir_hundredths(total.image_posts, total.meme_posts);
    out.push_back(total);
    open = false;
  };
  for (auto& [key, row] : rows) {
    if (open && total.platform != row.platform) close_total();
    if (!open) {
      total = CommunityStats{row.platform, std::string(kTotalRowName), 0, 0, 0, 0};
      open = true;
    }
    total.posts += row.posts;
    total.image_posts += row.image_posts;
    total.meme_posts += row.meme_posts;
    row.mir = mir_hundredths(row.image_posts, row.meme_posts);
    out.push_back(row);
  }
  if (open) close_total();
  return out;
}

std::vector<PopularityEntry> popularity(std::span<const MatchRecord> matches, Platform platform,
                                        std::size_t top_n) {
  if (top_n < 1) throw ParameterError("top_n must be at least 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& m : matches)
    if (m.is_meme && m.platform == platform) ++counts[m.template_id];

  std::vector<PopularityEntry> entries;
  for (const auto& [id, count] : counts) entries.push_back({id, platform, count, 0});
  // counts is keyed by template_id, so a stable sort on count alone keeps
  // ties in lexicographic order.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const PopularityEntry& a, const PopularityEntry& b) {
                     return a.occurrence_count > b.occurrence_count;
                   });
  if (entries.size() > top_n) entries.resize(top_n);
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].rank = i + 1;
  return entries;
}

std::set<std::string> cross_platform_overlap(std::span<const PopularityEntry> a,
                                             std::span<const PopularityEntry> b, std::size_t k) {
  std::set<std::string> top_a;
  for (std::size_t i = 0; i < std::min(k, a.size()); ++i) top_a.insert(a[i].template_id);
  std::set<std::string> shared;
  for (std::size_t i = 0; i < std::min(k, b.size()); ++i)
    if (top_a.count(b[i].template_id)) shared.insert(b[i].template_id);
  return shared;
}

std::string stats_to_tsv(std::span<const CommunityStats> rows) {
  std::string out = "platform\tcommunity\t#P\t#IP\t#MP\t#MIR\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.platform)) + "\t" + r.community + "\t" + std::to_string(r.posts) + "\t" +
           std::to_string(r.image_posts) + "\t" + std::to_string(r.meme_posts) + "\t" + r.mir_text() + "\n";
  }
  return out;
}

std::string popularity_to_tsv(std::span<const PopularityEntry> entries) {
  std::string out = "rank\ttemplate_id\tcount\n";
  for (const auto& e : entries)
    out += std::to_string(e.rank) + "\t" + e.template_id + "\t" + std::to_string(e.occurrence_count) + "\n";
  return out;
}

std::string overlap_to_json(const std::set<std::string>& ids) {
  return nlohmann::json(std::vector<std::string>(ids.begin(), ids.end())).dump() + "\n";
}

}  // namespace memeground
