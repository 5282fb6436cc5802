#include "memeground/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "io.hpp"
#include "memeground/errors.hpp"
#include "memeground/lake.hpp"

namespace memeground {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<MatchRecord> classify_posts(std::span<const CanonicalPost> posts, const LakeManifest& manifest,
                                        const EmbeddingBatch& embeddings, const FlatIndex& index,
                                        double threshold) {
  validate_threshold(threshold);
  if (embeddings.dim() != index.dim())
    throw QueryError("embedding dim " + std::to_string(embeddings.dim()) + " does not match index dim " +
                     std::to_string(index.dim()));

  std::set<std::string> missing;
  for (const auto& post : posts)
    if (is_image_post(post, manifest) && embeddings.find(*post.image_ref) == nullptr) missing.insert(*post.image_ref);
  if (!missing.empty())
    throw CoverageError("image posts without embeddings", {missing.begin(), missing.end()});

  std::vector<MatchRecord> records;
  for (const auto& post : posts) {
    if (!is_image_post(post, manifest)) continue;
    const Classification c = index.classify(*embeddings.find(*post.image_ref), threshold, *post.image_ref);
    records.push_back({post.post_id, c.item_id, post.platform, post.community, c.best.template_id, c.best.score,
                       c.is_meme, threshold});
  }
  std::sort(records.begin(), records.end(),
            [](const MatchRecord& a, const MatchRecord& b) { return a.post_id < b.post_id; });
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].post_id == records[i - 1].post_id)
      throw JoinError("duplicate post_id '" + records[i].post_id + "' in lake");
  return records;
}

std::vector<MatchRecord> run_classification(const fs::path& lake_root, const fs::path& embeddings_path,
                                            const FlatIndex& index, double threshold) {
  validate_threshold(threshold);
  const LakeManifest manifest = read_manifest(lake_root);
  const std::vector<CanonicalPost> posts = read_lake_posts(lake_root);
  const EmbeddingBatch embeddings = read_embedding_file(embeddings_path);
  return classify_posts(posts, manifest, embeddings, index, threshold);
}

std::string match_to_json_line(const MatchRecord& r) {
  const json j = {{"post_id", r.post_id},         {"item_id", r.item_id},
                  {"platform", to_string(r.platform)}, {"community", r.community},
                  {"template_id", r.template_id}, {"score", r.score},
                  {"is_meme", r.is_meme},         {"threshold", r.threshold}};
  return j.dump();
}

MatchRecord match_from_json_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    MatchRecord r;
    r.post_id = j.at("post_id").get<std::string>();
    r.item_id = j.at("item_id").get<std::string>();
    r.platform = platform_from_string(j.at("platform").get<std::string>());
    r.community = j.at("community").get<std::string>();
    r.template_id = j.at("template_id").get<std::string>();
    r.score = static_cast<float>(j.at("score").get<double>());
    r.is_meme = j.at("is_meme").get<bool>();
    r.threshold = j.at("threshold").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad match record: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("bad match record: ") + e.what());
  }
}

void write_matches_jsonl(std::span<const MatchRecord> records, const fs::path& path) {
  std::string text;
  for (const auto& r : records) text += match_to_json_line(r) + "\n";
  detail::write_file(path, text);
}

std::vector<MatchRecord> read_matches_jsonl(const fs::path& path) {
  const auto lines = detail::split_lines(detail::read_text_file(path));
  std::vector<MatchRecord> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    try {
      records.push_back(match_from_json_line(lines[i]));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ": " + e.what(), i + 1);
    }
  }
  return records;
}

std::vector<std::pair<CanonicalPost, MatchRecord>> join_posts_matches(std::span<const CanonicalPost> posts,
                                                                      std::span<const MatchRecord> matches) {
  std::map<std::string_view, const MatchRecord*> by_id;
  for (const auto& m : matches)
    if (!by_id.emplace(m.post_id, &m).second) throw JoinError("duplicate post_id '" + m.post_id + "' in matches");

  std::vector<std::pair<CanonicalPost, MatchRecord>> joined;
  for (const auto& post : posts)
    if (const auto it = by_id.find(post.post_id); it != by_id.end()) joined.emplace_back(post, *it->second);
  std::sort(joined.begin(), joined.end(),
            [](const auto& a, const auto& b) { return a.first.post_id < b.first.post_id; });
  return joined;
}

}  // namespace memeground
