#include "memeground/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "io.hpp"
#include "memeground/errors.hpp"
#include "memeground/timestamp.hpp"

namespace memeground {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Platform platform) {
  return platform == Platform::reddit ? "reddit" : "discord";
}

Platform platform_from_string(std::string_view name) {
  if (name == "reddit") return Platform::reddit;
  if (name == "discord") return Platform::discord;
  throw ParameterError("unknown platform '" + std::string(name) + "' (expected reddit or discord)");
}

std::string_view to_string(ImageFormat format) {
  switch (format) {
    case ImageFormat::jpg: return "jpg";
    case ImageFormat::jpeg: return "jpeg";
    case ImageFormat::png: return "png";
  }
  return "jpg";
}

namespace {

// URL or path -> file name, without query string or fragment.
std::string_view file_name_of(std::string_view ref) {
  if (const auto cut = ref.find_first_of("?#"); cut != std::string_view::npos) ref = ref.substr(0, cut);
  if (const auto slash = ref.find_last_of("/\\"); slash != std::string_view::npos)
    ref = ref.substr(slash + 1);
  return ref;
}

std::string extension_of(std::string_view name) {
  name = file_name_of(name);
  const auto dot = name.rfind('.');
  if (dot == std::string_view::npos || dot + 1 == name.size()) return {};
  return detail::to_lower(name.substr(dot + 1));
}

/// Field accessors used while parsing one record. Each throws
/// std::invalid_argument with a reason that becomes the RecordError text.
class Record {
 public:
  explicit Record(const json& object) : object_(object) {}

  const json& require(const char* key) const {
    const auto it = object_.find(key);
    if (it == object_.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
    return *it;
  }

  std::string text(const char* key) const {
    const json& value = require(key);
    if (value.is_null()) return {};
    if (!value.is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
    return value.get<std::string>();
  }

  std::int64_t integer(const char* key) const {
    const json& value = require(key);
    if (value.is_number_integer()) return value.get<std::int64_t>();
    if (value.is_number_float()) {
      const double d = value.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9.0e15)
        return static_cast<std::int64_t>(d);
    }
    throw std::invalid_argument(std::string("field '") + key + "' must be an integer");
  }

  bool boolean(const char* key) const {
    const json& value = require(key);
    if (!value.is_boolean()) throw std::invalid_argument(std::string("field '") + key + "' must be a boolean");
    return value.get<bool>();
  }

  const json& array(const char* key) const {
    const json& value = require(key);
    if (!value.is_array()) throw std::invalid_argument(std::string("field '") + key + "' must be a list");
    return value;
  }

  // Epoch seconds (integer or fractional, truncated) or ISO-8601 text.
  std::string timestamp(const char* key) const {
    const json& value = require(key);
    try {
      if (value.is_number_integer()) return normalize_timestamp(value.get<std::int64_t>());
      if (value.is_number_float()) {
        const double d = value.get<double>();
        if (!std::isfinite(d) || d < 0) throw TimestampError("created_utc must be a non-negative epoch");
        return normalize_timestamp(static_cast<std::int64_t>(std::floor(d)));
      }
      if (value.is_string()) return normalize_timestamp(value.get<std::string>());
    } catch (const TimestampError& e) {
      throw std::invalid_argument(std::string("field '") + key + "': " + e.what());
    }
    throw std::invalid_argument(std::string("field '") + key + "' must be epoch seconds or ISO-8601 text");
  }

  std::optional<std::string> text_optional(const char* key) const {
    const auto it = object_.find(key);
    if (it == object_.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
    throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  }

 private:
  const json& object_;
};

std::string synth_post_id(Platform platform, std::string_view community, std::size_t index,
                          const std::optional<std::string>& explicit_id) {
  std::string id = std::string(to_string(platform)) + ":" + std::string(community) + ":";
  if (explicit_id && !explicit_id->empty()) return id + *explicit_id;
  char buf[24];
  std::snprintf(buf, sizeof buf, "%08zu", index);
  return id + buf;
}

CanonicalPost reddit_post(const json& object, std::string_view community, std::size_t index) {
  const Record rec(object);
  CanonicalPost post;
  post.platform = Platform::reddit;
  post.community = std::string(community);

  const std::string title = rec.text("title");
  post.author = rec.text("author");
  const std::string selftext = rec.text("selftext");
  post.engagement = rec.integer("score");
  rec.integer("ups");
  rec.integer("downs");
  post.created_utc = rec.timestamp("created_utc");
  rec.text("posturl");
  if (rec.integer("num_comments") < 0) throw std::invalid_argument("field 'num_comments' must be non-negative");
  const std::string imageurl = rec.text("imageurl");
  post.nsfw = rec.boolean("is_nsfw");

  post.text = selftext.empty() ? title : title + "\n" + selftext;
  if (image_format_of(imageurl)) post.image_ref = std::string(file_name_of(imageurl));
  post.post_id = synth_post_id(Platform::reddit, community, index, rec.text_optional("id"));
  return post;
}

std::int64_t reaction_count(const json& reaction) {
  const json* count = nullptr;
  if (reaction.is_array() && reaction.size() == 2 && reaction[0].is_string()) {
    count = &reaction[1];
  } else if (reaction.is_object() && reaction.contains("emoji") && reaction.contains("count")) {
    count = &reaction["count"];
  }
  if (count == nullptr || !count->is_number_integer() || count->get<std::int64_t>() < 0)
    throw std::invalid_argument("reactions entries must be (emoji, non-negative count)");
  return count->get<std::int64_t>();
}

CanonicalPost discord_post(const json& object, std::string_view community, std::size_t index) {
  const Record rec(object);
  CanonicalPost post;
  post.platform = Platform::discord;
  post.community = std::string(community);

  post.text = rec.text("content");
  post.author = rec.text("author");
  rec.boolean("pinned");
  post.created_utc = rec.timestamp("created_utc");
  for (const json& mention : rec.array("mentions"))
    if (!mention.is_string()) throw std::invalid_argument("mentions entries must be strings");
  for (const json& reaction : rec.array("reactions")) post.engagement += reaction_count(reaction);
  for (const json& attachment : rec.array("attachments")) {
    if (!attachment.is_string() || attachment.get_ref<const std::string&>().empty())
      throw std::invalid_argument("attachments entries must be non-empty strings");
    const auto& ref = attachment.get_ref<const std::string&>();
    if (!post.image_ref && image_format_of(ref)) post.image_ref = std::string(file_name_of(ref));
  }
  post.post_id = synth_post_id(Platform::discord, community, index, rec.text_optional("id"));
  return post;
}

template <typename MakePost>
ParseResult parse_lines(std::span<const std::string> lines, std::string_view community, MakePost make) {
  ParseResult result;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    try {
      const json object = json::parse(lines[i]);
      if (!object.is_object()) throw std::invalid_argument("record is not a JSON object");
      result.posts.push_back(make(object, community, i));
    } catch (const json::exception& e) {
      result.errors.push_back({i + 1, std::string("malformed JSON: ") + e.what()});
    } catch (const std::exception& e) {
      result.errors.push_back({i + 1, e.what()});
    }
  }
  return result;
}

}  // namespace

std::optional<ImageFormat> image_format_of(std::string_view name) {
  const std::string ext = extension_of(name);
  if (ext == "jpg") return ImageFormat::jpg;
  if (ext == "jpeg") return ImageFormat::jpeg;
  if (ext == "png") return ImageFormat::png;
  return std::nullopt;
}

ParseResult parse_reddit_export(std::span<const std::string> lines, std::string_view community) {
  return parse_lines(lines, community, reddit_post);
}

ParseResult parse_discord_export(std::span<const std::string> lines, std::string_view community) {
  return parse_lines(lines, community, discord_post);
}

ParseResult parse_export(Platform platform, std::span<const std::string> lines,
                         std::string_view community) {
  return platform == Platform::reddit ? parse_reddit_export(lines, community)
                                      : parse_discord_export(lines, community);
}

std::vector<std::string> read_lines(const fs::path& path) {
  return detail::split_lines(detail::read_text_file(path));
}

TransformResult transform_filter_images(std::span<const CanonicalPost> posts, const fs::path& images_dir) {
  TransformResult result;
  std::set<std::string> seen;
  for (const CanonicalPost& post : posts) {
    if (!post.image_ref) continue;
    const std::string& ref = *post.image_ref;
    const auto format = image_format_of(ref);
    if (!format) {
      const std::string ext = extension_of(ref);
      ++result.dropped[ext.empty() ? "(none)" : ext];
      continue;
    }
    if (seen.count(ref)) continue;
    const fs::path source = images_dir / ref;
    std::error_code ec;
    const auto size = fs::is_regular_file(source, ec) ? fs::file_size(source, ec) : 0;
    if (ec || size == 0) {
      result.errors.push_back({0, post.post_id + ": image '" + ref + "' missing or empty in " +
                                      images_dir.string()});
      continue;
    }
    seen.insert(ref);
    result.images.push_back({ref, *format, size, "images/" + ref});
  }
  std::sort(result.images.begin(), result.images.end(),
            [](const ImageObject& a, const ImageObject& b) { return a.image_id < b.image_id; });
  return result;
}

}  // namespace memeground
