#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "memeground/ingest.hpp"

namespace memeground {

/// Per-community entry of the lake manifest.
struct CommunityManifest {
  Platform platform = Platform::reddit;
  std::string community;
  std::size_t post_count = 0;
  std::size_t image_post_count = 0;
  std::vector<std::string> post_ids;  // ascending

  bool operator==(const CommunityManifest&) const = default;
};

/// Contents of lake_root/manifest.json. Communities are ordered by
/// (platform, community), images by image_id.
struct LakeManifest {
  std::vector<CommunityManifest> communities;
  std::vector<ImageObject> images;

  const CommunityManifest* find(Platform platform, std::string_view community) const;
  const ImageObject* find_image(std::string_view image_id) const;

  bool operator==(const LakeManifest&) const = default;
};

/// Writes posts and images into the lake and returns the merged manifest.
///
/// Layout:
///   lake_root/posts/<platform>/<community>.jsonl   posts sorted by post_id
///   lake_root/images/<image_id>                     copied from images_dir
///   lake_root/manifest.json
///
/// Loading merges with whatever is already in the lake: a post with an
/// existing post_id replaces the stored one, other stored posts are kept.
/// Output bytes depend only on the resulting set of records, so loading the
/// same input twice is byte-idempotent. Throws LakeError on I/O failure.
LakeManifest load_to_lake(std::span<const CanonicalPost> posts, std::span<const ImageObject> images,
                          const std::filesystem::path& images_dir,
                          const std::filesystem::path& lake_root);

/// Reads manifest.json. Throws LakeError if absent, FormatError if malformed.
LakeManifest read_manifest(const std::filesystem::path& lake_root);

/// Every post stored in the lake, sorted by post_id.
std::vector<CanonicalPost> read_lake_posts(const std::filesystem::path& lake_root);

/// Posts whose image_ref names an image recorded in the manifest.
bool is_image_post(const CanonicalPost& post, const LakeManifest& manifest);

std::string post_to_json_line(const CanonicalPost& post);
/// Throws FormatError.
CanonicalPost post_from_json_line(std::string_view line);

}  // namespace memeground
