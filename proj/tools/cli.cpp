#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include <CLI11.hpp>

#include "memeground/analytics.hpp"
#include "memeground/embedding.hpp"
#include "memeground/errors.hpp"
#include "memeground/eval.hpp"
#include "memeground/index.hpp"
#include "memeground/ingest.hpp"
#include "memeground/kg.hpp"
#include "memeground/lake.hpp"
#include "memeground/pipeline.hpp"

namespace memeground::cli {

namespace fs = std::filesystem;

namespace {

// Plain decimal fraction in [0, 1]; "60%" and "60" are rejected.
const CLI::Validator kFraction(
    [](std::string& value) -> std::string {
      double parsed = 0.0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
      if (ec != std::errc{} || ptr != value.data() + value.size())
        return "expected a decimal fraction such as 0.6, got '" + value + "'";
      if (!(parsed >= 0.0 && parsed <= 1.0)) return "fraction must lie in [0, 1], got '" + value + "'";
      return {};
    },
    "FRACTION");

void write_output(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << contents;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw LakeError("cannot open for writing", path);
  file << contents;
  if (!file) throw LakeError("write failed", path);
}

struct IngestArgs {
  std::string platform, community, input, images, lake;
};

int do_ingest(const IngestArgs& a, std::ostream& err) {
  const Platform platform = platform_from_string(a.platform);
  const auto lines = read_lines(a.input);
  const ParseResult parsed = parse_export(platform, lines, a.community);
  for (const auto& e : parsed.errors) err << a.input << ":" << e.line << ": " << e.reason << "\n";

  const TransformResult transformed = transform_filter_images(parsed.posts, a.images);
  for (const auto& e : transformed.errors) err << "image: " << e.reason << "\n";
  for (const auto& [ext, count] : transformed.dropped) err << "dropped " << count << " ." << ext << " image(s)\n";

  const LakeManifest manifest = load_to_lake(parsed.posts, transformed.images, a.images, a.lake);
  const CommunityManifest* entry = manifest.find(platform, a.community);
  err << "ingested " << parsed.posts.size() << " posts (" << parsed.errors.size() << " rejected) into "
      << a.lake << "; community " << a.community << " now holds " << (entry ? entry->post_count : 0)
      << " posts, " << (entry ? entry->image_post_count : 0) << " image posts\n";
  return kExitOk;
}

struct EmbedArgs {
  std::string manifest, lake, out;
  std::uint32_t dim = kDefaultEmbeddingDim;
};

int do_embed_ref(const EmbedArgs& a, std::ostream& err) {
  std::vector<ManifestEntry> entries;
  if (!a.manifest.empty()) {
    entries = read_embedding_manifest(a.manifest);
  } else {
    for (const auto& img : read_manifest(a.lake).images)
      entries.push_back({img.image_id, fs::path(a.lake) / img.content_ref});
  }
  const EmbeddingBatch batch = reference_embed_manifest(entries, a.dim);
  write_embedding_file(batch, a.out);
  err << "wrote " << batch.size() << " vectors of dim " << batch.dim() << " to " << a.out << "\n";
  return kExitOk;
}

struct IndexArgs {
  std::string templates, template_map;
};

int do_index_check(const IndexArgs& a, std::ostream& out) {
  const FlatIndex index = load_index(a.templates, a.template_map);
  out << "templates\t" << index.template_count() << "\n"
      << "exemplars\t" << index.size() << "\n"
      << "dim\t" << index.dim() << "\n";
  return kExitOk;
}

struct ClassifyArgs {
  IndexArgs index;
  std::string lake, embeddings, out;
  double threshold = kDefaultThreshold;
};

int do_classify(const ClassifyArgs& a, std::ostream& err) {
  const FlatIndex index = load_index(a.index.templates, a.index.template_map);
  const auto records = run_classification(a.lake, a.embeddings, index, a.threshold);
  write_matches_jsonl(records, a.out);
  std::size_t memes = 0;
  for (const auto& r : records) memes += r.is_meme ? 1 : 0;
  err << "classified " << records.size() << " image posts; " << memes << " memes at t="
      << format_fraction(a.threshold) << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::string matches, labels, grid = "0.50:0.70:0.01", out;
};

int do_sweep(const SweepArgs& a, std::ostream& out) {
  const auto grid = parse_threshold_grid(a.grid);
  ScoreMap scores;
  for (const auto& m : read_matches_jsonl(a.matches)) scores[m.post_id] = m.score;
  const auto labels = read_labels_tsv(a.labels);
  write_output(a.out, sweep_to_tsv(sweep(labels, scores, grid)), out);
  return kExitOk;
}

struct SelectArgs {
  std::string sweep;
  double min_precision = kDefaultMinPrecision;
};

int do_select(const SelectArgs& a, std::ostream& out) {
  const auto points = read_sweep_tsv(a.sweep);
  out << format_fraction(select_threshold(points, a.min_precision)) << "\n";
  return kExitOk;
}

struct ReportArgs {
  std::string lake, matches, out_dir;
  std::size_t top_n = kDefaultTopN;
};

int do_report(const ReportArgs& a, std::ostream& err) {
  const auto posts = read_lake_posts(a.lake);
  const auto matches = read_matches_jsonl(a.matches);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);

  write_output((dir / "stats.tsv").string(), stats_to_tsv(community_stats(posts, matches)), err);
  const auto reddit = popularity(matches, Platform::reddit, a.top_n);
  const auto discord = popularity(matches, Platform::discord, a.top_n);
  write_output((dir / "popularity_reddit.tsv").string(), popularity_to_tsv(reddit), err);
  write_output((dir / "popularity_discord.tsv").string(), popularity_to_tsv(discord), err);
  write_output((dir / "overlap.json").string(), overlap_to_json(cross_platform_overlap(reddit, discord, a.top_n)),
               err);
  err << "wrote stats.tsv, popularity_reddit.tsv, popularity_discord.tsv, overlap.json to " << a.out_dir << "\n";
  return kExitOk;
}

struct KgArgs {
  std::string kg, template_id, out;
};

int do_kg_context(const KgArgs& a, std::ostream& out) {
  const MemeKg kg = load_kg_tsv(a.kg);
  write_output(a.out, context_card_json(context_card(kg, a.template_id)), out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground social-media image posts to meme templates and report on them", "memeground"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* s_ingest = app.add_subcommand("ingest", "Parse a platform export and load it into the local data lake");
  s_ingest->add_option("--platform", ingest.platform, "Export platform")->required()->check(CLI::IsMember({"reddit", "discord"}));
  s_ingest->add_option("--community", ingest.community, "Subreddit or channel name")->required();
  s_ingest->add_option("--input", ingest.input, "JSONL export file")->required()->check(CLI::ExistingFile);
  s_ingest->add_option("--images", ingest.images, "Directory holding the referenced image files")->required()->check(CLI::ExistingDirectory);
  s_ingest->add_option("--lake", ingest.lake, "Lake root directory (created if absent)")->required();

  EmbedArgs embed;
  auto* s_embed = app.add_subcommand("embed-ref", "Embed images with the deterministic reference embedder (EMB1 output)");
  auto* o_manifest = s_embed->add_option("--manifest", embed.manifest, "Manifest TSV: item_id<TAB>path")->check(CLI::ExistingFile);
  auto* o_lake = s_embed->add_option("--lake", embed.lake, "Embed every image recorded in this lake instead")->check(CLI::ExistingDirectory);
  o_manifest->excludes(o_lake);
  s_embed->add_option("--out", embed.out, "Output EMB1 file")->required();
  s_embed->add_option("--dim", embed.dim, "Embedding dimension")->check(CLI::PositiveNumber);

  IndexArgs check;
  auto* s_check = app.add_subcommand("index-build-check", "Build the flat index and print its shape");
  s_check->add_option("--templates", check.templates, "Exemplar EMB1 file")->required()->check(CLI::ExistingFile);
  s_check->add_option("--template-map", check.template_map, "TSV: exemplar_item_id<TAB>template_id")->required()->check(CLI::ExistingFile);

  ClassifyArgs classify;
  auto* s_classify = app.add_subcommand("classify", "Classify every image post in a lake");
  s_classify->add_option("--lake", classify.lake, "Lake root")->required()->check(CLI::ExistingDirectory);
  s_classify->add_option("--embeddings", classify.embeddings, "EMB1 file keyed by image id")->required()->check(CLI::ExistingFile);
  s_classify->add_option("--templates", classify.index.templates, "Exemplar EMB1 file")->required()->check(CLI::ExistingFile);
  s_classify->add_option("--template-map", classify.index.template_map, "TSV: exemplar_item_id<TAB>template_id")->required()->check(CLI::ExistingFile);
  s_classify->add_option("--threshold", classify.threshold, "Cosine threshold t as a fraction")->check(kFraction);
  s_classify->add_option("--out", classify.out, "Output matches.jsonl")->required();

  SweepArgs sweep_args;
  auto* s_sweep = app.add_subcommand("sweep", "Precision/recall/F1 over a threshold grid");
  s_sweep->add_option("--matches", sweep_args.matches, "matches.jsonl")->required()->check(CLI::ExistingFile);
  s_sweep->add_option("--labels", sweep_args.labels, "labels.tsv: post_id<TAB>0|1")->required()->check(CLI::ExistingFile);
  s_sweep->add_option("--grid", sweep_args.grid, "start:end:step");
  s_sweep->add_option("--out", sweep_args.out, "Output TSV (default: standard output)");

  SelectArgs select;
  auto* s_select = app.add_subcommand("select-threshold", "Pick the highest-recall threshold meeting a precision floor");
  s_select->add_option("--sweep", select.sweep, "Sweep TSV")->required()->check(CLI::ExistingFile);
  s_select->add_option("--min-precision", select.min_precision, "Precision floor as a fraction")->check(kFraction);

  ReportArgs report;
  auto* s_report = app.add_subcommand("report", "Per-community prevalence, popularity ranking, cross-platform overlap");
  s_report->add_option("--lake", report.lake, "Lake root")->required()->check(CLI::ExistingDirectory);
  s_report->add_option("--matches", report.matches, "matches.jsonl")->required()->check(CLI::ExistingFile);
  s_report->add_option("--out-dir", report.out_dir, "Directory for the report files")->required();
  s_report->add_option("--top-n", report.top_n, "Templates per popularity ranking")->check(CLI::PositiveNumber);

  KgArgs kg;
  auto* s_kg = app.add_subcommand("kg-context", "Assemble the knowledge-graph context card of a template");
  s_kg->add_option("--kg", kg.kg, "KG edge-list TSV")->required()->check(CLI::ExistingFile);
  s_kg->add_option("--template", kg.template_id, "Template node id")->required();
  s_kg->add_option("--out", kg.out, "Output JSON (default: standard output)");

  std::vector<const char*> argv{"memeground"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (s_ingest->parsed()) return do_ingest(ingest, err);
    if (s_embed->parsed()) {
      if (embed.manifest.empty() == embed.lake.empty()) {
        err << "error: embed-ref needs exactly one of --manifest or --lake\n";
        return kExitUsage;
      }
      return do_embed_ref(embed, err);
    }
    if (s_check->parsed()) return do_index_check(check, out);
    if (s_classify->parsed()) return do_classify(classify, err);
    if (s_sweep->parsed()) return do_sweep(sweep_args, out);
    if (s_select->parsed()) return do_select(select, out);
    if (s_report->parsed()) return do_report(report, err);
    if (s_kg->parsed()) return do_kg_context(kg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace memeground::cli
