#include "memeground/lake.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <system_error>
#include <tuple>

#include <json.hpp>

#include "io.hpp"
#include "memeground/errors.hpp"

namespace memeground {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestName = "manifest.json";

fs::path community_file(const fs::path& lake_root, Platform platform, std::string_view community) {
  return lake_root / "posts" / std::string(to_string(platform)) / (std::string(community) + ".jsonl");
}

void check_community_name(std::string_view community) {
  if (community.empty() || community == "." || community == ".." ||
      community.find_first_of("/\\") != std::string_view::npos || community.find('\0') != std::string_view::npos)
    throw ParameterError("community name '" + std::string(community) + "' cannot be used as a file name");
}

ImageFormat format_from(std::string_view name) {
  if (name == "jpg") return ImageFormat::jpg;
  if (name == "jpeg") return ImageFormat::jpeg;
  if (name == "png") return ImageFormat::png;
  throw FormatError("unsupported image format '" + std::string(name) + "' in manifest");
}

json manifest_to_json(const LakeManifest& manifest) {
  json communities = json::array();
  for (const auto& c : manifest.communities) {
    communities.push_back({{"platform", to_string(c.platform)},
                           {"community", c.community},
                           {"post_count", c.post_count},
                           {"image_post_count", c.image_post_count},
                           {"post_ids", c.post_ids}});
  }
  json images = json::array();
  for (const auto& img : manifest.images) {
    images.push_back({{"image_id", img.image_id},
                      {"format", to_string(img.format)},
                      {"byte_length", img.byte_length},
                      {"content_ref", img.content_ref}});
  }
  return {{"communities", communities}, {"images", images}};
}

LakeManifest manifest_from_json(const json& doc) {
  LakeManifest manifest;
  for (const json& c : doc.at("communities")) {
    CommunityManifest entry;
    entry.platform = platform_from_string(c.at("platform").get<std::string>());
    entry.community = c.at("community").get<std::string>();
    entry.post_count = c.at("post_count").get<std::size_t>();
    entry.image_post_count = c.at("image_post_count").get<std::size_t>();
    entry.post_ids = c.at("post_ids").get<std::vector<std::string>>();
    manifest.communities.push_back(std::move(entry));
  }
  for (const json& img : doc.at("images")) {
    manifest.images.push_back({img.at("image_id").get<std::string>(),
                               format_from(img.at("format").get<std::string>()),
                               img.at("byte_length").get<std::uint64_t>(),
                               img.at("content_ref").get<std::string>()});
  }
  return manifest;
}

std::vector<CanonicalPost> read_community(const fs::path& file) {
  std::vector<CanonicalPost> posts;
  std::error_code ec;
  if (!fs::exists(file, ec)) return posts;
  const auto lines = detail::split_lines(detail::read_text_file(file));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    try {
      posts.push_back(post_from_json_line(lines[i]));
    } catch (const FormatError& e) {
      throw FormatError(file.string() + ": " + e.what(), i + 1);
    }
  }
  return posts;
}

}  // namespace

const CommunityManifest* LakeManifest::find(Platform platform, std::string_view community) const {
  for (const auto& c : communities)
    if (c.platform == platform && c.community == community) return &c;
  return nullptr;
}

const ImageObject* LakeManifest::find_image(std::string_view image_id) const {
  const auto it = std::lower_bound(images.begin(), images.end(), image_id,
                                   [](const ImageObject& img, std::string_view id) { return img.image_id < id; });
  return it != images.end() && it->image_id == image_id ? &*it : nullptr;
}

bool is_image_post(const CanonicalPost& post, const LakeManifest& manifest) {
  return post.image_ref && manifest.find_image(*post.image_ref) != nullptr;
}

std::string post_to_json_line(const CanonicalPost& post) {
  json j = {{"post_id", post.post_id},
            {"platform", to_string(post.platform)},
            {"community", post.community},
            {"author", post.author},
            {"created_utc", post.created_utc},
            {"image_ref", post.image_ref ? json(*post.image_ref) : json(nullptr)},
            {"text", post.text},
            {"engagement", post.engagement},
            {"nsfw", post.nsfw}};
  return j.dump();
}

CanonicalPost post_from_json_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    CanonicalPost post;
    post.post_id = j.at("post_id").get<std::string>();
    post.platform = platform_from_string(j.at("platform").get<std::string>());
    post.community = j.at("community").get<std::string>();
    post.author = j.at("author").get<std::string>();
    post.created_utc = j.at("created_utc").get<std::string>();
    if (const json& ref = j.at("image_ref"); !ref.is_null()) post.image_ref = ref.get<std::string>();
    post.text = j.at("text").get<std::string>();
    post.engagement = j.at("engagement").get<std::int64_t>();
    post.nsfw = j.at("nsfw").get<bool>();
    return post;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad post record: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("bad post record: ") + e.what());
  }
}

LakeManifest read_manifest(const fs::path& lake_root) {
  const fs::path path = lake_root / kManifestName;
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw LakeError("lake manifest not found", path);
  try {
    return manifest_from_json(json::parse(detail::read_text_file(path)));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<CanonicalPost> read_lake_posts(const fs::path& lake_root) {
  const LakeManifest manifest = read_manifest(lake_root);
  std::vector<CanonicalPost> posts;
  for (const auto& c : manifest.communities) {
    auto chunk = read_community(community_file(lake_root, c.platform, c.community));
    posts.insert(posts.end(), std::make_move_iterator(chunk.begin()), std::make_move_iterator(chunk.end()));
  }
  std::sort(posts.begin(), posts.end(),
            [](const CanonicalPost& a, const CanonicalPost& b) { return a.post_id < b.post_id; });
  return posts;
}

LakeManifest load_to_lake(std::span<const CanonicalPost> posts, std::span<const ImageObject> images,
                          const fs::path& images_dir, const fs::path& lake_root) {
  std::error_code ec;
  fs::create_directories(lake_root, ec);
  if (ec || !fs::is_directory(lake_root)) throw LakeError("cannot create lake root", lake_root);

  LakeManifest manifest;
  if (fs::exists(lake_root / kManifestName, ec)) manifest = read_manifest(lake_root);

  // Images: union by image_id, incoming entries win.
  std::map<std::string, ImageObject> image_set;
  for (const auto& img : manifest.images) image_set[img.image_id] = img;
  for (const auto& img : images) {
    const auto bytes = detail::read_binary_file(images_dir / img.image_id);
    detail::write_file(lake_root / img.content_ref, std::span<const std::byte>(bytes));
    ImageObject stored = img;
    stored.byte_length = bytes.size();
    image_set[img.image_id] = std::move(stored);
  }
  manifest.images.clear();
  for (auto& [id, img] : image_set) manifest.images.push_back(std::move(img));

  // Posts: merge per community file, incoming records win.
  using Key = std::pair<Platform, std::string>;
  std::map<Key, std::map<std::string, CanonicalPost>> incoming;
  for (const auto& post : posts) {
    check_community_name(post.community);
    incoming[{post.platform, post.community}][post.post_id] = post;
  }
  std::set<Key> communities;
  for (const auto& c : manifest.communities) communities.insert({c.platform, c.community});
  for (const auto& [key, unused] : incoming) communities.insert(key);

  manifest.communities.clear();
  for (const auto& key : communities) {
    const fs::path file = community_file(lake_root, key.first, key.second);
    std::map<std::string, CanonicalPost> merged;
    for (auto& post : read_community(file)) merged[post.post_id] = std::move(post);

    CommunityManifest entry{key.first, key.second, 0, 0, {}};
    if (const auto it = incoming.find(key); it != incoming.end()) {
      for (const auto& [id, post] : it->second) merged[id] = post;
      std::string contents;
      for (const auto& [id, post] : merged) contents += post_to_json_line(post) + "\n";
      detail::write_file(file, contents);
    }
    for (const auto& [id, post] : merged) {
      entry.post_ids.push_back(id);
      if (is_image_post(post, manifest)) ++entry.image_post_count;
    }
    entry.post_count = merged.size();
    manifest.communities.push_back(std::move(entry));
  }

  detail::write_file(lake_root / kManifestName, manifest_to_json(manifest).dump(2) + "\n");
  return manifest;
}

}  // namespace memeground
