#include "memeground/index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "io.hpp"
#include "memeground/errors.hpp"

namespace memeground {

namespace fs = std::filesystem;

void validate_threshold(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw ParameterError("threshold " + std::to_string(threshold) + " outside [0, 1]");
}

float dot(std::span<const float> a, std::span<const float> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return static_cast<float>(acc);
}

FlatIndex FlatIndex::build(std::vector<TemplateExemplar> exemplars) {
  if (exemplars.empty()) throw BuildError("cannot build an index from zero exemplars");
  const std::uint32_t dim = exemplars.front().vector.dim();
  for (const auto& e : exemplars) {
    if (e.vector.dim() != dim)
      throw BuildError("exemplar " + e.template_id + "#" + std::to_string(e.exemplar_idx) + " has dim " +
                       std::to_string(e.vector.dim()) + ", expected " + std::to_string(dim));
    // Re-check at the index boundary; vectors may come from a file.
    const double norm = l2_norm(e.vector.values());
    if (std::fabs(norm - 1.0) > kFileNormTolerance)
      throw NormalizationError("exemplar norm " + std::to_string(norm) + " is not 1",
                               e.template_id + "#" + std::to_string(e.exemplar_idx));
  }
  std::sort(exemplars.begin(), exemplars.end(), [](const TemplateExemplar& a, const TemplateExemplar& b) {
    return std::tie(a.template_id, a.exemplar_idx) < std::tie(b.template_id, b.exemplar_idx);
  });
  for (std::size_t i = 1; i < exemplars.size(); ++i) {
    if (exemplars[i].template_id == exemplars[i - 1].template_id &&
        exemplars[i].exemplar_idx == exemplars[i - 1].exemplar_idx)
      throw BuildError("duplicate exemplar " + exemplars[i].template_id + "#" +
                       std::to_string(exemplars[i].exemplar_idx));
  }

  FlatIndex index;
  index.dim_ = dim;
  index.ids_.reserve(exemplars.size());
  index.data_.reserve(exemplars.size() * dim);
  for (auto& e : exemplars) {
    const auto values = e.vector.values();
    index.data_.insert(index.data_.end(), values.begin(), values.end());
    index.ids_.push_back({std::move(e.template_id), e.exemplar_idx});
  }
  return index;
}

std::size_t FlatIndex::template_count() const noexcept {
  std::size_t count = 0;
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (i == 0 || ids_[i].template_id != ids_[i - 1].template_id) ++count;
  return count;
}

void FlatIndex::check_query(const EmbeddingVector& query) const {
  if (query.dim() != dim_)
    throw QueryError("query dim " + std::to_string(query.dim()) + " does not match index dim " +
                     std::to_string(dim_));
}

std::vector<MatchResult> FlatIndex::query_topk(const EmbeddingVector& query, std::size_t k) const {
  check_query(query);
  if (k == 0) throw QueryError("k must be positive");
  const std::size_t n = size();
  std::vector<float> scores(n);
  for (std::size_t row = 0; row < n; ++row) scores[row] = dot(query.values(), vector(row));

  // Rows are stored in (template_id, exemplar_idx) order, so the row number
  // is the tie-break key.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min(k, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
                    });

  std::vector<MatchResult> results;
  results.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t row = order[i];
    results.push_back({ids_[row].template_id, scores[row], ids_[row].exemplar_idx});
  }
  return results;
}

MatchResult FlatIndex::best_template(const EmbeddingVector& query) const {
  check_query(query);
  // Strict '>' keeps the earliest row on ties: smallest template_id, then
  // smallest exemplar_idx.
  std::size_t best_row = 0;
  float best_score = dot(query.values(), vector(0));
  for (std::size_t row = 1; row < size(); ++row) {
    const float s = dot(query.values(), vector(row));
    if (s > best_score) {
      best_score = s;
      best_row = row;
    }
  }
  return {ids_[best_row].template_id, best_score, ids_[best_row].exemplar_idx};
}

Classification FlatIndex::classify(const EmbeddingVector& query, double threshold, std::string item_id) const {
  validate_threshold(threshold);
  MatchResult best = best_template(query);
  const bool is_meme = meets_threshold(best.score, threshold);
  return {std::move(item_id), is_meme, std::move(best), threshold};
}

std::vector<TemplateMapEntry> read_template_map(const fs::path& path) {
  const auto lines = detail::split_lines(detail::read_text_file(path));
  std::vector<TemplateMapEntry> entries;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto cols = detail::split_tabs(lines[i]);
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
      throw FormatError("template map rows are exemplar_item_id<TAB>template_id", i + 1);
    if (!seen.insert(std::string(cols[0])).second)
      throw FormatError("duplicate exemplar id '" + std::string(cols[0]) + "'", i + 1);
    entries.push_back({std::string(cols[0]), std::string(cols[1])});
  }
  return entries;
}

void write_template_map(std::span<const TemplateMapEntry> entries, const fs::path& path) {
  std::string text;
  for (const auto& e : entries) text += e.exemplar_item_id + "\t" + e.template_id + "\n";
  detail::write_file(path, text);
}

std::vector<TemplateExemplar> exemplars_from(const EmbeddingBatch& vectors,
                                             std::span<const TemplateMapEntry> map) {
  std::vector<TemplateExemplar> exemplars;
  std::map<std::string, std::uint32_t> next_idx;
  std::vector<std::string> missing;
  for (const auto& entry : map) {
    const EmbeddingVector* v = vectors.find(entry.exemplar_item_id);
    if (v == nullptr) {
      missing.push_back(entry.exemplar_item_id);
      continue;
    }
    exemplars.push_back({entry.template_id, next_idx[entry.template_id]++, *v});
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string list;
    for (const auto& id : missing) list += " " + id;
    throw BuildError("template map references exemplars without vectors:" + list);
  }
  return exemplars;
}

FlatIndex load_index(const fs::path& exemplars_path, const fs::path& template_map_path) {
  const EmbeddingBatch vectors = read_embedding_file(exemplars_path);
  const auto map = read_template_map(template_map_path);
  return FlatIndex::build(exemplars_from(vectors, map));
}

}  // namespace memeground
