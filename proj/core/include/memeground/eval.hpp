#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace memeground {

inline constexpr double kDefaultMinPrecision = 0.9;

struct LabeledExample {
  std::string post_id;
  bool is_meme = false;
};

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  /// tp / (tp + fp); 0 when nothing is predicted positive.
  double precision() const noexcept;
  /// tp / (tp + fn); 0 when there are no positives.
  double recall() const noexcept;
  /// Harmonic mean of precision and recall; 0 when both are 0.
  double f1() const noexcept;

  bool operator==(const ConfusionCounts&) const = default;
};

struct SweepPoint {
  double threshold = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t predicted_meme_count = 0;
};

using ScoreMap = std::unordered_map<std::string, float>;

/// Predicted meme <=> meets_threshold(score, t). Throws CoverageError if any
/// labeled post has no score.
ConfusionCounts confusion(std::span<const LabeledExample> labels, const ScoreMap& scores,
                          double threshold);

/// One point per threshold, in the given order. Throws ParameterError when
/// the thresholds are not ascending.
std::vector<SweepPoint> sweep(std::span<const LabeledExample> labels, const ScoreMap& scores,
                              std::span<const double> thresholds);

/// Highest recall among points with precision >= min_precision; ties go to
/// higher precision, then to the lower threshold. Throws SelectionError when
/// no point qualifies or the sweep is empty.
double select_threshold(std::span<const SweepPoint> points,
                        double min_precision = kDefaultMinPrecision);

/// Inclusive grid start, start+step, ... up to end, each value rounded to 1e-9
/// so decimal steps land on their decimal values. Throws ParameterError.
std::vector<double> threshold_grid(double start, double end, double step);
/// Parses "start:end:step".
std::vector<double> parse_threshold_grid(std::string_view spec);

/// Shortest decimal rendering with at least two fractional digits: 0.6 ->
/// "0.60", 0.625 -> "0.625".
std::string format_fraction(double value);

/// labels.tsv: post_id TAB 0|1, optional header "post_id\tis_meme".
/// Throws FormatError on bad rows or duplicate post ids.
std::vector<LabeledExample> read_labels_tsv(const std::filesystem::path& path);

std::string sweep_to_tsv(std::span<const SweepPoint> points);
std::vector<SweepPoint> sweep_from_tsv(std::string_view text);
void write_sweep_tsv(std::span<const SweepPoint> points, const std::filesystem::path& path);
std::vector<SweepPoint> read_sweep_tsv(const std::filesystem::path& path);

}  // namespace memeground
