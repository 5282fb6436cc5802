#include <bit>
#include <cstring>
#include <set>

#include "io.hpp"
#include "memeground/embedding.hpp"
#include "memeground/errors.hpp"

namespace memeground {

namespace fs = std::filesystem;

namespace {

class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::byte>& out) : out_(out) {}

  template <typename UInt>
  void le(UInt value) {
    for (std::size_t i = 0; i < sizeof(UInt); ++i)
      out_.push_back(static_cast<std::byte>((value >> (8 * i)) & 0xFF));
  }
  void raw(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::byte*>(data);
    out_.insert(out_.end(), p, p + size);
  }

 private:
  std::vector<std::byte>& out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> in) : in_(in) {}

  template <typename UInt>
  UInt le(const char* what) {
    need(sizeof(UInt), what);
    UInt value = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i)
      value |= static_cast<UInt>(std::to_integer<UInt>(in_[pos_ + i]) << (8 * i));
    pos_ += sizeof(UInt);
    return value;
  }
  std::span<const std::byte> take(std::size_t size, const char* what) {
    need(size, what);
    auto out = in_.subspan(pos_, size);
    pos_ += size;
    return out;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t size, const char* what) const {
    if (in_.size() - pos_ < size)
      throw FormatError(std::string("truncated EMB1 file while reading ") + what + " at byte " +
                        std::to_string(pos_));
  }

  std::span<const std::byte> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::byte> encode_embedding_file(const EmbeddingBatch& batch) {
  std::vector<std::byte> out;
  out.reserve(kEmbeddingHeaderSize + batch.size() * (2 + 16 + batch.dim() * 4));
  ByteWriter w(out);
  w.raw(kEmbeddingMagic.data(), kEmbeddingMagic.size());
  w.le<std::uint8_t>(kEmbeddingVersion);
  w.le<std::uint32_t>(batch.dim());
  w.le<std::uint64_t>(batch.size());
  for (const auto& entry : batch.entries()) {
    w.le<std::uint16_t>(static_cast<std::uint16_t>(entry.item_id.size()));
    w.raw(entry.item_id.data(), entry.item_id.size());
    for (const float v : entry.vector.values()) w.le<std::uint32_t>(std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

EmbeddingBatch decode_embedding_file(std::span<const std::byte> bytes) {
  ByteReader r(bytes);
  const auto magic = r.take(4, "magic");
  if (std::memcmp(magic.data(), kEmbeddingMagic.data(), 4) != 0) throw FormatError("bad EMB1 magic");
  if (const auto version = r.le<std::uint8_t>("version"); version != kEmbeddingVersion)
    throw FormatError("unsupported EMB1 version " + std::to_string(version));
  const auto dim = r.le<std::uint32_t>("dim");
  const auto count = r.le<std::uint64_t>("count");
  if (dim == 0) throw FormatError("EMB1 dim must be positive");
  // Every record needs at least 2 + 4*dim bytes.
  if (count > r.remaining() / (2 + std::uint64_t{4} * dim))
    throw FormatError("EMB1 count " + std::to_string(count) + " exceeds file size");

  EmbeddingBatch batch(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto id_len = r.le<std::uint16_t>("id length");
    const auto id_bytes = r.take(id_len, "id");
    std::string id(reinterpret_cast<const char*>(id_bytes.data()), id_bytes.size());
    std::vector<float> values(dim);
    for (auto& v : values) v = std::bit_cast<float>(r.le<std::uint32_t>("vector"));
    if (batch.find(id)) throw FormatError("duplicate item id '" + id + "' in EMB1 file");
    auto vector = EmbeddingVector::from_unit(std::move(values), kFileNormTolerance, id);
    batch.add(std::move(id), std::move(vector));
  }
  if (r.remaining() != 0)
    throw FormatError(std::to_string(r.remaining()) + " trailing bytes after " + std::to_string(count) +
                      " EMB1 records");
  return batch;
}

void write_embedding_file(const EmbeddingBatch& batch, const fs::path& path) {
  const auto bytes = encode_embedding_file(batch);
  detail::write_file(path, std::span<const std::byte>(bytes));
}

EmbeddingBatch read_embedding_file(const fs::path& path) {
  const auto bytes = detail::read_binary_file(path);
  try {
    return decode_embedding_file(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<ManifestEntry> read_embedding_manifest(const fs::path& manifest_path) {
  const auto lines = detail::split_lines(detail::read_text_file(manifest_path));
  const fs::path base = manifest_path.parent_path();
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto cols = detail::split_tabs(lines[i]);
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
      throw FormatError("manifest rows are item_id<TAB>path", i + 1);
    std::string id(cols[0]);
    if (!seen.insert(id).second) throw FormatError("duplicate item id '" + id + "' in manifest", i + 1);
    fs::path path{std::string(cols[1])};
    if (path.is_relative()) path = base / path;
    entries.push_back({std::move(id), std::move(path)});
  }
  return entries;
}

void write_embedding_manifest(std::span<const ManifestEntry> entries, const fs::path& manifest_path) {
  std::string text;
  for (const auto& e : entries) text += e.item_id + "\t" + e.path.string() + "\n";
  detail::write_file(manifest_path, text);
}

EmbeddingBatch reference_embed_manifest(std::span<const ManifestEntry> entries, std::uint32_t dim) {
  EmbeddingBatch batch(dim);
  for (const auto& entry : entries) {
    const auto bytes = detail::read_binary_file(entry.path);
    try {
      batch.add(entry.item_id, reference_embed(bytes, dim));
    } catch (const EmbedError& e) {
      throw EmbedError(entry.item_id + ": " + e.what());
    }
  }
  return batch;
}

}  // namespace memeground
