#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace memeground {

inline constexpr std::uint32_t kDefaultEmbeddingDim = 768;
/// Norm tolerance applied to vectors crossing a file boundary.
inline constexpr double kFileNormTolerance = 1e-4;
/// Norm guarantee of vectors produced by normalize().
inline constexpr double kUnitNormTolerance = 1e-6;

/// Unit-length float32 vector. Can only be obtained through normalize() or a
/// validated constructor, so every instance satisfies the norm invariant.
class EmbeddingVector {
 public:
  /// Wraps already-normalized values, throwing NormalizationError when the
  /// Euclidean norm deviates from 1 by more than `tolerance`.
  static EmbeddingVector from_unit(std::vector<float> values, double tolerance = kFileNormTolerance,
                                   std::string_view item_id = {});

  std::uint32_t dim() const noexcept { return static_cast<std::uint32_t>(values_.size()); }
  std::span<const float> values() const noexcept { return values_; }
  float operator[](std::size_t i) const noexcept { return values_[i]; }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  explicit EmbeddingVector(std::vector<float> values) : values_(std::move(values)) {}
  friend EmbeddingVector normalize(std::span<const double> values);

  std::vector<float> values_;
};

/// values / ||values||_2, computed in double precision. Throws
/// NormalizationError for empty, all-zero or non-finite input.
EmbeddingVector normalize(std::span<const float> values);
EmbeddingVector normalize(std::span<const double> values);

/// Euclidean norm accumulated in double, left to right.
double l2_norm(std::span<const float> values);

struct EmbeddingEntry {
  std::string item_id;
  EmbeddingVector vector;

  bool operator==(const EmbeddingEntry&) const = default;
};

/// Ordered, id-unique collection of equal-dimension vectors.
class EmbeddingBatch {
 public:
  explicit EmbeddingBatch(std::uint32_t dim);

  /// Throws FormatError on a duplicate id, dimension mismatch, or an id that
  /// does not fit the 16-bit length prefix of the file format.
  void add(std::string item_id, EmbeddingVector vector);

  std::uint32_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<EmbeddingEntry>& entries() const noexcept { return entries_; }

  /// nullptr when absent.
  const EmbeddingVector* find(std::string_view item_id) const;

  bool operator==(const EmbeddingBatch& other) const {
    return dim_ == other.dim_ && entries_ == other.entries_;
  }

 private:
  std::uint32_t dim_;
  std::vector<EmbeddingEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// EMB1 interchange format, all integers little-endian:
//   "EMB1" | version u8 = 1 | dim u32 | count u64
//   count x ( id_len u16 | id bytes (UTF-8) | dim x f32 )
inline constexpr std::array<char, 4> kEmbeddingMagic = {'E', 'M', 'B', '1'};
inline constexpr std::uint8_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderSize = 4 + 1 + 4 + 8;

std::vector<std::byte> encode_embedding_file(const EmbeddingBatch& batch);
/// Throws FormatError (magic, version, truncation, trailing bytes, duplicate
/// ids) or NormalizationError (vector off unit norm by more than 1e-4).
EmbeddingBatch decode_embedding_file(std::span<const std::byte> bytes);

void write_embedding_file(const EmbeddingBatch& batch, const std::filesystem::path& path);
EmbeddingBatch read_embedding_file(const std::filesystem::path& path);

/// Deterministic stand-in for a neural image encoder.
///
/// seed = SHA-256(image_bytes); block_i = SHA-256(seed || u32le(i)) for
/// i = 0, 1, ...; each block contributes four raw values from its
/// consecutive 8-byte little-endian words u, mapped to (u / 2^64) * 2 - 1.
/// The first `dim` raw values are normalized. Throws EmbedError on empty
/// input or dim == 0.
EmbeddingVector reference_embed(std::span<const std::byte> image_bytes,
                                std::uint32_t dim = kDefaultEmbeddingDim);

/// The raw, pre-normalization values of reference_embed.
std::vector<double> reference_embed_raw(std::span<const std::byte> image_bytes, std::uint32_t dim);

/// One line of an embedding manifest TSV: item_id TAB file path.
struct ManifestEntry {
  std::string item_id;
  std::filesystem::path path;
};

/// Relative paths are resolved against the manifest's own directory.
/// Throws FormatError on a malformed row or duplicate id.
std::vector<ManifestEntry> read_embedding_manifest(const std::filesystem::path& manifest_path);
void write_embedding_manifest(std::span<const ManifestEntry> entries,
                              const std::filesystem::path& manifest_path);

/// Reads every file in the manifest and embeds it with reference_embed.
EmbeddingBatch reference_embed_manifest(std::span<const ManifestEntry> entries, std::uint32_t dim);

}  // namespace memeground
