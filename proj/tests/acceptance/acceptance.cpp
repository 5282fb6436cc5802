// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cli.hpp"
#include "memeground/analytics.hpp"
#include "memeground/embedding.hpp"
#include "memeground/errors.hpp"
#include "memeground/eval.hpp"
#include "memeground/index.hpp"
#include "memeground/ingest.hpp"
#include "memeground/kg.hpp"
#include "memeground/lake.hpp"
#include "memeground/pipeline.hpp"
#include "memeground/timestamp.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace memeground;
using namespace memeground::testing;
namespace fs = std::filesystem;

namespace {

using Failure = std::optional<std::string>;

std::string str(const auto&... parts) {
  std::ostringstream out;
  (out << ... << parts);
  return out.str();
}

const fs::path kE2e = fs::path(MEMEGROUND_FIXTURES) / "e2e";

// ---------------------------------------------------------------------------

Failure published_mir() {
  struct Row {
    const char* community;
    std::size_t ip, mp;
    const char* mir;
  };
  const Row rows[] = {
      {"r/meme", 2243, 392, "0.17"},        {"r/PoliticalMemes", 653, 53, "0.08"},
      {"r/HistoryMemes", 1414, 237, "0.16"}, {"r/ProgrammerHumor", 626, 151, "0.24"},
      {"r/memes", 6561, 1120, "0.17"},       {"Reddit Total", 11497, 1953, "0.16"},
      {"auto_memes_2", 1341, 252, "0.18"},   {"meme_shitposting", 611, 22, "0.03"},
      {"TheDungeon", 6624, 1184, "0.17"},    {"meme_stealing", 177, 3, "0.01"},
      {"MemeStash", 1072, 33, "0.03"},       {"Discord Total", 9825, 1494, "0.15"},
  };
  std::size_t matched = 0;
  std::string misses;
  for (const auto& r : rows) {
    const std::string got = format_mir(mir_hundredths(r.ip, r.mp));
    if (got == r.mir) {
      ++matched;
    } else {
      misses += str(" ", r.community, "=", got, "(want ", r.mir, ")");
    }
  }
  if (matched != std::size(rows)) return str(matched, "/12 rows;", misses);
  return std::nullopt;
}

Failure threshold_rule() {
  auto point = [](double t, double p, double r) {
    SweepPoint s;
    s.threshold = t;
    s.precision = p;
    s.recall = r;
    return s;
  };
  const std::vector<SweepPoint> sweep{point(0.50, 0.77, 0.81), point(0.55, 0.85, 0.72), point(0.60, 0.95, 0.57),
                                      point(0.65, 0.97, 0.46), point(0.70, 1.00, 0.37)};
  const double t = select_threshold(sweep, 0.9);
  if (t != 0.60) return str("selected ", t);
  return std::nullopt;
}

Failure index_oracle() {
  Rng rng(1001);
  std::size_t agreed = 0, cases = 0;
  double worst = 0.0;
  for (std::uint32_t dim : {8u, 64u}) {
    for (int round = 0; round < 5; ++round) {
      const auto exemplars = random_exemplars(rng, 100, 5, dim);  // at most 500 rows
      std::vector<OracleRow> rows;
      for (const auto& e : exemplars) {
        rows.push_back({e.template_id, e.exemplar_idx, {e.vector.values().begin(), e.vector.values().end()}});
      }
      const auto index = FlatIndex::build(exemplars);
      std::uniform_int_distribution<std::size_t> pick_k(1, index.size());
      for (int q = 0; q < 100; ++q) {
        ++cases;
        const auto query = random_unit(rng, dim);
        const std::size_t k = q % 4 == 0 ? index.size() : pick_k(rng);
        const auto got = index.query_topk(query, k);
        const auto want = oracle_topk(rows, {query.values().begin(), query.values().end()}, k);
        bool same = got.size() == want.size();
        for (std::size_t i = 0; same && i < got.size(); ++i) {
          same = got[i].template_id == want[i].template_id && got[i].exemplar_idx == want[i].exemplar_idx;
          const double diff = std::abs(static_cast<double>(got[i].score) - want[i].score);
          worst = std::max(worst, diff);
          same = same && diff <= 1e-6;
        }
        agreed += same ? 1 : 0;
      }
    }
  }
  if (agreed != cases) return str(agreed, "/", cases, " queries agree, worst score diff ", worst);
  return std::nullopt;
}

Failure scale_invariance() {
  Rng rng(1002);
  std::uniform_real_distribution<double> log_alpha(std::log(1e-3), std::log(1e3));
  const auto index = FlatIndex::build(random_exemplars(rng, 20, 3, 64));
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_gaussian(rng, 64);
    const double alpha = std::exp(log_alpha(rng));
    std::vector<double> scaled(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) scaled[d] = alpha * x[d];
    const auto a = index.classify(normalize(x), kDefaultThreshold);
    const auto b = index.classify(normalize(std::span<const double>(scaled)), kDefaultThreshold);
    if (a.is_meme != b.is_meme || a.best.template_id != b.best.template_id ||
        std::abs(static_cast<double>(a.best.score) - b.best.score) > 1e-6) {
      ++mismatches;
    }
  }
  if (mismatches) return str(mismatches, "/1000 pairs differ");
  return std::nullopt;
}

Failure monotonicity() {
  Rng rng(1003);
  const auto grid = threshold_grid(0.50, 0.70, 0.01);
  for (int round = 0; round < 3; ++round) {
    TempDir dir("acceptance-mono");
    const auto lake = build_synthetic_lake(rng, dir.path(), 250, 64);
    const auto posts = read_lake_posts(lake.lake_root);
    const auto manifest = read_manifest(lake.lake_root);
    if (posts.size() < 200) return str("synthetic lake has only ", posts.size(), " posts");
    std::vector<std::size_t> counts;
    for (double t : grid) {
      std::size_t memes = 0;
      for (const auto& r : classify_posts(posts, manifest, lake.embeddings, *lake.index, t)) memes += r.is_meme;
      counts.push_back(memes);
    }
    for (std::size_t i = 1; i < counts.size(); ++i) {
      if (counts[i] > counts[i - 1]) {
        return str("count rises from ", counts[i - 1], " to ", counts[i], " at t=", format_fraction(grid[i]));
      }
    }
    if (counts.front() <= counts.back()) return str("flat curve: ", counts.front(), " at 0.50 and 0.70");
  }
  return std::nullopt;
}

Failure confusion_oracle() {
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<int> size(0, 1000);
  std::uniform_real_distribution<float> score(-0.3f, 1.0f);
  std::uniform_int_distribution<int> on_grid(0, 100);
  std::bernoulli_distribution coin(0.35);
  std::uniform_real_distribution<double> threshold(0.0, 1.0);
  for (int set = 0; set < 100; ++set) {
    const int n = size(rng);
    std::vector<LabeledExample> labels;
    std::vector<std::string> ids;
    std::vector<bool> flags;
    ScoreMap scores;
    for (int i = 0; i < n; ++i) {
      const std::string id = str("s", set, "-", i);
      const bool meme = coin(rng);
      labels.push_back({id, meme});
      ids.push_back(id);
      flags.push_back(meme);
      scores[id] = coin(rng) ? static_cast<float>(on_grid(rng) / 100.0) : score(rng);
    }
    std::vector<double> ts{0.5, 0.6, 0.7, threshold(rng)};
    for (double t : ts) {
      const auto got = confusion(labels, scores, t);
      const auto want = oracle_confusion(ids, flags, scores, t);
      if (got.tp != want.tp || got.fp != want.fp || got.tn != want.tn || got.fn != want.fn) {
        return str("set ", set, " t=", t, ": got ", got.tp, "/", got.fp, "/", got.tn, "/", got.fn, " want ", want.tp,
                   "/", want.fp, "/", want.tn, "/", want.fn);
      }
    }
  }
  return std::nullopt;
}

Failure emb1_roundtrip() {
  Rng rng(1005);
  TempDir dir("acceptance-emb1");
  std::uniform_int_distribution<std::size_t> count(0, 40);
  for (std::uint32_t dim : {3u, 16u, 768u}) {
    for (int round = 0; round < 10; ++round) {
      EmbeddingBatch batch(dim);
      const std::size_t n = count(rng);
      for (std::size_t i = 0; i < n; ++i) batch.add(str("item-", dim, "-", round, "-", i), random_unit(rng, dim));
      const fs::path path = dir / str("b", dim, "-", round, ".emb");
      write_embedding_file(batch, path);
      const auto back = read_embedding_file(path);
      if (!(back == batch)) return str("dim ", dim, " round ", round, " differs after read");
      if (encode_embedding_file(back) != encode_embedding_file(batch)) return str("re-encoding differs, dim ", dim);
    }
  }

  EmbeddingBatch batch(16);
  batch.add("x", random_unit(rng, 16));
  const auto good = encode_embedding_file(batch);
  auto bad_magic = good;
  bad_magic[0] = std::byte{'X'};
  try {
    decode_embedding_file(bad_magic);
    return "corrupted magic accepted";
  } catch (const FormatError&) {
  }
  auto off_norm = good;
  const float big = 3.0f;
  std::memcpy(off_norm.data() + kEmbeddingHeaderSize + 2 + 1, &big, sizeof big);
  try {
    decode_embedding_file(off_norm);
    return "off-norm vector accepted";
  } catch (const NormalizationError&) {
  }
  return std::nullopt;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), root).generic_string()] = slurp(entry.path());
  }
  return files;
}

Failure etl_conformance() {
  TempDir dir("acceptance-etl");
  const fs::path images = dir / "images";
  std::vector<std::string> lines;
  for (const char* name : {"a.jpg", "b.jpeg", "c.png", "d.gif", "e.webp", "f.JPG", "g.PNG"}) {
    spit(images / name, str("payload ", name));
    lines.push_back(str(R"({"content":"","author":"x","pinned":false,"created_utc":1688169600,"mentions":[],)",
                        R"("reactions":[],"attachments":[")", name, R"("]})"));
  }
  const auto parsed = parse_discord_export(lines, "mixed");
  if (!parsed.errors.empty()) return "parse error: " + parsed.errors[0].reason;
  const auto transformed = transform_filter_images(parsed.posts, images);
  std::set<ImageFormat> formats;
  for (const auto& img : transformed.images) formats.insert(img.format);
  if (transformed.images.size() != 5 || formats.size() != 3) {
    return str("kept ", transformed.images.size(), " images in ", formats.size(), " formats");
  }
  if (parsed.posts.size() != 7) return str(parsed.posts.size(), " posts parsed, want 7");
  for (const auto& post : parsed.posts) {
    if (post.image_ref && !image_format_of(*post.image_ref)) return "post kept a gif/webp image: " + *post.image_ref;
  }

  const std::pair<const char*, const char*> stamps[] = {
      {"2023-07-15T10:00:00+02:00", "2023-07-15T08:00:00Z"},
      {"2023-07-01T01:30:00-05:30", "2023-07-01T07:00:00Z"},
      {"2023-12-31T23:30:00-01:00", "2024-01-01T00:30:00Z"},
      {"2023-07-15T10:00:00Z", "2023-07-15T10:00:00Z"},
      {"1688169600", "2023-07-01T00:00:00Z"},
  };
  for (const auto& [in, want] : stamps) {
    const auto got = normalize_timestamp(std::string_view(in));
    if (got != want) return str(in, " -> ", got, " (want ", want, ")");
  }

  const fs::path lake = dir / "lake";
  auto ingest_all = [&] {
    for (const auto& [platform, file, community] :
         {std::tuple{Platform::reddit, "reddit_meme.jsonl", "meme"},
          std::tuple{Platform::discord, "discord_TheDungeon.jsonl", "TheDungeon"}}) {
      const auto p = parse_export(platform, read_lines(kE2e / "exports" / file), community);
      const auto t = transform_filter_images(p.posts, kE2e / "images");
      load_to_lake(p.posts, t.images, kE2e / "images", lake);
    }
  };
  ingest_all();
  const auto first = snapshot(lake);
  ingest_all();
  const auto second = snapshot(lake);
  if (first != second) return "second ingestion changed lake bytes";
  return std::nullopt;
}

Failure run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) return str(args.front(), " exited ", code, ": ", err.str());
  return std::nullopt;
}

Failure run_cli_to(const std::vector<std::string>& args, const fs::path& stdout_file) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) return str(args.front(), " exited ", code, ": ", err.str());
  spit(stdout_file, out.str());
  return std::nullopt;
}

Failure end_to_end() {
  TempDir dir("acceptance-e2e");
  const std::string lake = (dir / "lake").string();
  const std::string images = (kE2e / "images").string();
  const fs::path out = dir / "out";
  fs::create_directories(out);

  const std::vector<std::vector<std::string>> steps{
      {"ingest", "--platform", "reddit", "--community", "meme", "--input", (kE2e / "exports/reddit_meme.jsonl").string(),
       "--images", images, "--lake", lake},
      {"ingest", "--platform", "discord", "--community", "TheDungeon", "--input",
       (kE2e / "exports/discord_TheDungeon.jsonl").string(), "--images", images, "--lake", lake},
      {"embed-ref", "--lake", lake, "--out", (dir / "posts.emb").string()},
      {"embed-ref", "--manifest", (kE2e / "exemplars.tsv").string(), "--out", (dir / "exemplars.emb").string()},
      {"classify", "--lake", lake, "--embeddings", (dir / "posts.emb").string(), "--templates",
       (dir / "exemplars.emb").string(), "--template-map", (kE2e / "template_map.tsv").string(), "--threshold", "0.60",
       "--out", (out / "matches.jsonl").string()},
      {"sweep", "--matches", (out / "matches.jsonl").string(), "--labels", (kE2e / "labels.tsv").string(), "--out",
       (out / "sweep.tsv").string()},
      {"report", "--lake", lake, "--matches", (out / "matches.jsonl").string(), "--out-dir", out.string()},
      {"kg-context", "--kg", (kE2e / "kg.tsv").string(), "--template", "imgflipmeme:112006116/Disloyal-Boyfriend",
       "--out", (out / "context_card.json").string()},
      {"kg-context", "--kg", (kE2e / "kg_no_frame.tsv").string(), "--template",
       "imgflipmeme:112006116/Disloyal-Boyfriend", "--out", (out / "context_card_no_frame.json").string()},
  };
  for (const auto& step : steps) {
    if (auto failure = run_cli(step)) return failure;
  }
  if (auto failure = run_cli_to({"select-threshold", "--sweep", (out / "sweep.tsv").string()}, out / "threshold.txt")) {
    return failure;
  }

  const auto manifest = read_manifest(lake);
  std::size_t posts = 0, image_posts = 0;
  for (const auto& c : manifest.communities) {
    posts += c.post_count;
    image_posts += c.image_post_count;
  }
  if (posts != 20 || image_posts != 12) return str("fixture lake has ", posts, " posts / ", image_posts, " image posts");

  const auto card = context_card(load_kg_tsv(kE2e / "kg_no_frame.tsv"), "imgflipmeme:112006116/Disloyal-Boyfriend");
  if (!card.frame_missing) return "frame_missing not set on the frameless variant";

  const auto produced = snapshot(out);
  const auto golden = snapshot(kE2e / "golden");
  if (golden.empty()) return "no goldens under " + (kE2e / "golden").string();
  std::string diffs;
  for (const auto& [name, bytes] : golden) {
    const auto it = produced.find(name);
    if (it == produced.end()) {
      diffs += " missing:" + name;
    } else if (it->second != bytes) {
      diffs += " differs:" + name;
    }
  }
  for (const auto& [name, bytes] : produced) {
    if (!golden.contains(name)) diffs += " unexpected:" + name;
  }
  if (!diffs.empty()) return "golden mismatch" + diffs;
  return std::nullopt;
}

struct Criterion {
  const char* name;
  double budget_seconds;  // 0 = no runtime bound
  std::function<Failure()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"Published MIR golden (12/12 rows)", 1.0, published_mir},
      {"Threshold rule golden (min precision 0.9 -> 0.60)", 1.0, threshold_rule},
      {"Index oracle equivalence (1000 queries, dims 8/64)", 30.0, index_oracle},
      {"Decision scale invariance (1000 pairs)", 10.0, scale_invariance},
      {"Monotone meme count over 0.50..0.70 (synthetic lakes)", 30.0, monotonicity},
      {"Confusion matrix oracle (100 labeled sets)", 0.0, confusion_oracle},
      {"EMB1 roundtrip and rejection (dims 3/16/768)", 0.0, emb1_roundtrip},
      {"ETL conformance (formats, offsets, idempotent ingest)", 0.0, etl_conformance},
      {"End-to-end smoke against frozen goldens", 0.0, end_to_end},
  };

  std::size_t failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Failure failure;
    try {
      failure = c.check();
    } catch (const std::exception& e) {
      failure = str("exception: ", e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!failure && c.budget_seconds > 0 && seconds > c.budget_seconds) {
      failure = str("took ", seconds, " s, budget ", c.budget_seconds, " s");
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", seconds);
    if (failure) {
      ++failed;
      std::cout << "[FAIL] " << c.name << " (" << timing << "): " << *failure << "\n";
    } else {
      std::cout << "[PASS] " << c.name << " (" << timing << ")\n";
    }
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
