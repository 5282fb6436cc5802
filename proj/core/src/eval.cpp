#include "memeground/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "io.hpp"
#include "memeground/errors.hpp"
#include "memeground/index.hpp"

namespace memeground {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSweepHeader = "threshold\ttp\tfp\ttn\tfn\tprecision\trecall\tf1\tpredicted_meme_count";

// Shortest representation that reads back to the same double.
std::string shortest(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(value);
}

double parse_double(std::string_view text, const char* what, std::size_t row) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
    throw FormatError(std::string("bad ") + what + " '" + std::string(text) + "'", row);
  return value;
}

std::size_t parse_count(std::string_view text, const char* what, std::size_t row) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw FormatError(std::string("bad ") + what + " '" + std::string(text) + "'", row);
  return value;
}

}  // namespace

double ConfusionCounts::precision() const noexcept {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double ConfusionCounts::recall() const noexcept {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double ConfusionCounts::f1() const noexcept {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

ConfusionCounts confusion(std::span<const LabeledExample> labels, const ScoreMap& scores, double threshold) {
  ConfusionCounts counts;
  std::vector<std::string> missing;
  for (const auto& label : labels) {
    const auto it = scores.find(label.post_id);
    if (it == scores.end()) {
      missing.push_back(label.post_id);
      continue;
    }
    const bool predicted = meets_threshold(it->second, threshold);
    if (predicted && label.is_meme) ++counts.tp;
    else if (predicted) ++counts.fp;
    else if (label.is_meme) ++counts.fn;
    else ++counts.tn;
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    throw CoverageError("labeled posts without scores", std::move(missing));
  }
  return counts;
}

std::vector<SweepPoint> sweep(std::span<const LabeledExample> labels, const ScoreMap& scores,
                              std::span<const double> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end()))
    throw ParameterError("sweep thresholds must be ascending");
  std::vector<SweepPoint> points;
  points.reserve(thresholds.size());
  for (const double t : thresholds) {
    const ConfusionCounts c = confusion(labels, scores, t);
    points.push_back({t, c.tp, c.fp, c.tn, c.fn, c.precision(), c.recall(), c.f1(), c.tp + c.fp});
  }
  return points;
}

double select_threshold(std::span<const SweepPoint> points, double min_precision) {
  if (points.empty()) throw SelectionError("empty sweep");
  const SweepPoint* best = nullptr;
  for (const auto& p : points) {
    if (!(p.precision >= min_precision)) continue;
    if (best == nullptr || p.recall > best->recall ||
        (p.recall == best->recall &&
         (p.precision > best->precision || (p.precision == best->precision && p.threshold < best->threshold))))
      best = &p;
  }
  if (best == nullptr)
    throw SelectionError("no threshold reaches precision " + format_fraction(min_precision));
  return best->threshold;
}

std::vector<double> threshold_grid(double start, double end, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("grid step must be positive");
  if (!(start <= end)) throw ParameterError("grid start must not exceed end");
  validate_threshold(start);
  validate_threshold(end);
  const auto n = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9;
    grid.push_back(std::min(t, end));
  }
  return grid;
}

std::vector<double> parse_threshold_grid(std::string_view spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  if (second == std::string_view::npos || spec.find(':', second + 1) != std::string_view::npos)
    throw ParameterError("grid must be start:end:step, got '" + std::string(spec) + "'");
  try {
    return threshold_grid(parse_double(spec.substr(0, first), "grid start", 0),
                          parse_double(spec.substr(first + 1, second - first - 1), "grid end", 0),
                          parse_double(spec.substr(second + 1), "grid step", 0));
  } catch (const FormatError& e) {
    throw ParameterError(e.what());
  }
}

std::string format_fraction(double value) {
  char buf[64];
  for (int digits = 2; digits <= 12; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  return shortest(value);
}

std::vector<LabeledExample> read_labels_tsv(const fs::path& path) {
  const auto lines = detail::split_lines(detail::read_text_file(path));
  std::vector<LabeledExample> labels;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const auto cols = detail::split_tabs(lines[i]);
    if (i == 0 && cols.size() == 2 && cols[0] == "post_id") continue;
    if (cols.size() != 2 || cols[0].empty() || (cols[1] != "0" && cols[1] != "1"))
      throw FormatError(path.string() + ": label rows are post_id<TAB>0|1", i + 1);
    if (!seen.insert(std::string(cols[0])).second)
      throw FormatError(path.string() + ": duplicate post_id '" + std::string(cols[0]) + "'", i + 1);
    labels.push_back({std::string(cols[0]), cols[1] == "1"});
  }
  return labels;
}

std::string sweep_to_tsv(std::span<const SweepPoint> points) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const auto& p : points) {
    out += format_fraction(p.threshold) + "\t" + std::to_string(p.tp) + "\t" + std::to_string(p.fp) + "\t" +
           std::to_string(p.tn) + "\t" + std::to_string(p.fn) + "\t" + shortest(p.precision) + "\t" +
           shortest(p.recall) + "\t" + shortest(p.f1) + "\t" + std::to_string(p.predicted_meme_count) + "\n";
  }
  return out;
}

std::vector<SweepPoint> sweep_from_tsv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines.front() != kSweepHeader) throw FormatError("missing sweep header", 1);
  std::vector<SweepPoint> points;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (detail::is_blank(lines[i])) continue;
    const std::size_t row = i + 1;
    const auto cols = detail::split_tabs(lines[i]);
    if (cols.size() != 9) throw FormatError("expected 9 sweep columns", row);
    SweepPoint p;
    p.threshold = parse_double(cols[0], "threshold", row);
    p.tp = parse_count(cols[1], "tp", row);
    p.fp = parse_count(cols[2], "fp", row);
    p.tn = parse_count(cols[3], "tn", row);
    p.fn = parse_count(cols[4], "fn", row);
    p.precision = parse_double(cols[5], "precision", row);
    p.recall = parse_double(cols[6], "recall", row);
    p.f1 = parse_double(cols[7], "f1", row);
    p.predicted_meme_count = parse_count(cols[8], "predicted_meme_count", row);
    points.push_back(p);
  }
  return points;
}

void write_sweep_tsv(std::span<const SweepPoint> points, const fs::path& path) {
  detail::write_file(path, sweep_to_tsv(points));
}

std::vector<SweepPoint> read_sweep_tsv(const fs::path& path) {
  try {
    return sweep_from_tsv(detail::read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what(), e.row());
  }
}

}  // namespace memeground
