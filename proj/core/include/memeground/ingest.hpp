#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace memeground {

enum class Platform { reddit, discord };

std::string_view to_string(Platform platform);
/// Throws ParameterError for anything other than "reddit" / "discord".
Platform platform_from_string(std::string_view name);

enum class ImageFormat { jpg, jpeg, png };

std::string_view to_string(ImageFormat format);

/// Case-insensitive extension check on a file name or URL path. Returns
/// nullopt for every format outside jpg/jpeg/png.
std::optional<ImageFormat> image_format_of(std::string_view name);

/// Platform-neutral post. `image_ref` is the referenced image file name
/// (basename of the URL or attachment path) and doubles as its image id.
struct CanonicalPost {
  std::string post_id;
  Platform platform = Platform::reddit;
  std::string community;
  std::string author;
  std::string created_utc;
  std::optional<std::string> image_ref;
  std::string text;
  std::int64_t engagement = 0;
  bool nsfw = false;

  bool operator==(const CanonicalPost&) const = default;
};

struct ImageObject {
  std::string image_id;
  ImageFormat format = ImageFormat::jpg;
  std::uint64_t byte_length = 0;
  std::string content_ref;  // lake-relative, "images/<image_id>"

  bool operator==(const ImageObject&) const = default;
};

/// A rejected input record. `line` is 1-based.
struct RecordError {
  std::size_t line = 0;
  std::string reason;
};

struct ParseResult {
  std::vector<CanonicalPost> posts;
  std::vector<RecordError> errors;
};

/// Parses a Reddit export (one JSON object per line, the eleven PRAW
/// submission fields). Blank lines are skipped; each other line yields
/// exactly one post or one RecordError.
ParseResult parse_reddit_export(std::span<const std::string> lines, std::string_view community);

/// Parses a Discord export (content, author, pinned, created_utc, mentions,
/// reactions, attachments).
ParseResult parse_discord_export(std::span<const std::string> lines, std::string_view community);

ParseResult parse_export(Platform platform, std::span<const std::string> lines,
                         std::string_view community);

/// Splits a text file into lines (LF, trailing CR tolerated).
std::vector<std::string> read_lines(const std::filesystem::path& path);

struct TransformResult {
  std::vector<ImageObject> images;         // sorted by image_id, unique
  std::vector<RecordError> errors;         // missing files; line = 0
  std::map<std::string, std::size_t> dropped;  // lowercase extension -> count
};

/// Keeps only jpg/jpeg/png references whose file exists in `images_dir`.
TransformResult transform_filter_images(std::span<const CanonicalPost> posts,
                                        const std::filesystem::path& images_dir);

}  // namespace memeground
