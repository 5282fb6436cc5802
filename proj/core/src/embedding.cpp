#include "memeground/embedding.hpp"

#include <cmath>
#include <cstring>

#include "memeground/errors.hpp"
#include "sha256.hpp"

namespace memeground {

namespace {

template <typename T>
double squared_norm(std::span<const T> values) {
  double sum = 0.0;
  for (const T v : values) sum += static_cast<double>(v) * static_cast<double>(v);
  return sum;
}

}  // namespace

double l2_norm(std::span<const float> values) { return std::sqrt(squared_norm(values)); }

EmbeddingVector EmbeddingVector::from_unit(std::vector<float> values, double tolerance,
                                           std::string_view item_id) {
  if (values.empty()) throw NormalizationError("empty vector", std::string(item_id));
  const double norm = l2_norm(values);
  if (!std::isfinite(norm) || std::fabs(norm - 1.0) > tolerance)
    throw NormalizationError("vector norm " + std::to_string(norm) + " is not 1", std::string(item_id));
  return EmbeddingVector(std::move(values));
}

EmbeddingVector normalize(std::span<const double> values) {
  if (values.empty()) throw NormalizationError("cannot normalize an empty vector");
  for (const double v : values)
    if (!std::isfinite(v)) throw NormalizationError("cannot normalize a non-finite vector");
  const double norm = std::sqrt(squared_norm(values));
  if (norm == 0.0) throw NormalizationError("cannot normalize the zero vector");
  std::vector<float> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = static_cast<float>(values[i] / norm);
  return EmbeddingVector(std::move(out));
}

EmbeddingVector normalize(std::span<const float> values) {
  std::vector<double> wide(values.begin(), values.end());
  return normalize(std::span<const double>(wide));
}

EmbeddingBatch::EmbeddingBatch(std::uint32_t dim) : dim_(dim) {
  if (dim == 0) throw FormatError("embedding dimension must be positive");
}

void EmbeddingBatch::add(std::string item_id, EmbeddingVector vector) {
  if (vector.dim() != dim_)
    throw FormatError("vector for '" + item_id + "' has dim " + std::to_string(vector.dim()) +
                      ", batch dim is " + std::to_string(dim_));
  if (item_id.size() > 0xFFFF) throw FormatError("item id longer than 65535 bytes");
  if (by_id_.count(item_id)) throw FormatError("duplicate item id '" + item_id + "'");
  by_id_.emplace(item_id, entries_.size());
  entries_.push_back({std::move(item_id), std::move(vector)});
}

const EmbeddingVector* EmbeddingBatch::find(std::string_view item_id) const {
  const auto it = by_id_.find(std::string(item_id));
  return it == by_id_.end() ? nullptr : &entries_[it->second].vector;
}

std::vector<double> reference_embed_raw(std::span<const std::byte> image_bytes, std::uint32_t dim) {
  if (image_bytes.empty()) throw EmbedError("cannot embed empty image bytes");
  if (dim == 0) throw EmbedError("embedding dimension must be positive");

  const detail::Sha256Digest seed = detail::sha256(image_bytes);
  std::array<std::byte, 36> block_input{};
  std::memcpy(block_input.data(), seed.data(), seed.size());

  std::vector<double> raw;
  raw.reserve(dim);
  for (std::uint32_t block = 0; raw.size() < dim; ++block) {
    for (int b = 0; b < 4; ++b) block_input[32 + b] = static_cast<std::byte>((block >> (8 * b)) & 0xFF);
    const detail::Sha256Digest digest = detail::sha256(block_input);
    for (std::size_t word = 0; word < 4 && raw.size() < dim; ++word) {
      std::uint64_t u = 0;
      for (int b = 7; b >= 0; --b) u = (u << 8) | std::to_integer<std::uint64_t>(digest[word * 8 + b]);
      raw.push_back(static_cast<double>(u) * 0x1p-64 * 2.0 - 1.0);
    }
  }
  return raw;
}

EmbeddingVector reference_embed(std::span<const std::byte> image_bytes, std::uint32_t dim) {
  const std::vector<double> raw = reference_embed_raw(image_bytes, dim);
  try {
    return normalize(std::span<const double>(raw));
  } catch (const NormalizationError& e) {
    throw EmbedError(e.what());
  }
}

}  // namespace memeground
