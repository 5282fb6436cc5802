#include <gtest/gtest.h>

#include <cmath>

#include "memeground/errors.hpp"
#include "memeground/index.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace memeground;
using namespace memeground::testing;

namespace {

std::vector<OracleRow> oracle_rows(const std::vector<TemplateExemplar>& exemplars) {
  std::vector<OracleRow> rows;
  for (const auto& e : exemplars) {
    rows.push_back({e.template_id, e.exemplar_idx, {e.vector.values().begin(), e.vector.values().end()}});
  }
  return rows;
}

TemplateExemplar exemplar(std::string id, std::uint32_t idx, std::vector<float> v) {
  return {std::move(id), idx, EmbeddingVector::from_unit(std::move(v))};
}

}  // namespace

TEST(Dot, AccumulatesInDoubleLeftToRight) {
  const std::vector<float> a{1e8f, 1.0f, -1e8f};
  const std::vector<float> b{1.0f, 1.0f, 1.0f};
  EXPECT_EQ(dot(a, b), 1.0f);
}

TEST(FlatIndex, BuildValidation) {
  EXPECT_THROW(FlatIndex::build({}), BuildError);
  std::vector<TemplateExemplar> mixed;
  mixed.push_back(exemplar("A", 0, {1, 0}));
  mixed.push_back(exemplar("B", 0, {1, 0, 0}));
  EXPECT_THROW(FlatIndex::build(std::move(mixed)), BuildError);
  std::vector<TemplateExemplar> dupes;
  dupes.push_back(exemplar("A", 0, {1, 0}));
  dupes.push_back(exemplar("A", 0, {0, 1}));
  EXPECT_THROW(FlatIndex::build(std::move(dupes)), BuildError);
}

TEST(FlatIndex, TopkAgreesWithOracle) {
  Rng rng(21);
  for (std::uint32_t dim : {8u, 64u}) {
    const auto exemplars = random_exemplars(rng, 40, 5, dim);
    const auto rows = oracle_rows(exemplars);
    const auto index = FlatIndex::build(exemplars);
    for (int q = 0; q < 200; ++q) {
      const auto query = random_unit(rng, dim);
      const std::vector<float> qv(query.values().begin(), query.values().end());
      for (std::size_t k : {std::size_t{1}, std::size_t{5}, index.size() + 3}) {
        const auto got = index.query_topk(query, k);
        const auto want = oracle_topk(rows, qv, k);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
          EXPECT_EQ(got[i].template_id, want[i].template_id);
          EXPECT_EQ(got[i].exemplar_idx, want[i].exemplar_idx);
          EXPECT_EQ(got[i].score, want[i].score);
        }
      }
      const auto best = index.best_template(query);
      const auto oracle_best = oracle_best_template(rows, qv);
      EXPECT_EQ(best.template_id, oracle_best.template_id);
      EXPECT_EQ(best.score, oracle_best.score);
      EXPECT_EQ(best.exemplar_idx, oracle_best.exemplar_idx);
    }
  }
}

TEST(FlatIndex, TiesBreakTowardSmallestTemplateThenIdx) {
  std::vector<TemplateExemplar> ex;
  ex.push_back(exemplar("B", 0, {1, 0}));
  ex.push_back(exemplar("A", 1, {1, 0}));
  ex.push_back(exemplar("A", 0, {1, 0}));
  const auto index = FlatIndex::build(std::move(ex));
  const auto q = EmbeddingVector::from_unit({1, 0});
  const auto top = index.query_topk(q, 3);
  EXPECT_EQ(top[0], (MatchResult{"A", 1.0f, 0}));
  EXPECT_EQ(top[1], (MatchResult{"A", 1.0f, 1}));
  EXPECT_EQ(top[2], (MatchResult{"B", 1.0f, 0}));
  EXPECT_EQ(index.best_template(q).template_id, "A");
  EXPECT_EQ(index.template_count(), 2u);
}

TEST(FlatIndex, QueryValidation) {
  std::vector<TemplateExemplar> ex;
  ex.push_back(exemplar("A", 0, {1, 0}));
  const auto index = FlatIndex::build(std::move(ex));
  EXPECT_THROW(index.query_topk(EmbeddingVector::from_unit({1, 0, 0}), 1), QueryError);
  EXPECT_THROW(index.query_topk(EmbeddingVector::from_unit({1, 0}), 0), QueryError);
}

TEST(FlatIndex, ScoresAreBoundedAndScaleInvariant) {
  Rng rng(22);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  const auto index = FlatIndex::build(random_exemplars(rng, 10, 3, 32));
  for (int i = 0; i < 300; ++i) {
    const auto raw = random_gaussian(rng, 32);
    std::vector<float> scaled(raw);
    const double c = scale(rng);
    for (auto& x : scaled) x = static_cast<float>(x * c);
    const auto a = index.best_template(normalize(raw));
    const auto b = index.best_template(normalize(scaled));
    EXPECT_LE(std::abs(a.score), 1.0 + kScoreEpsilon);
    EXPECT_EQ(a.template_id, b.template_id);
    EXPECT_NEAR(a.score, b.score, 1e-5);
  }
}

TEST(Classify, BoundaryScoreCountsAsMeme) {
  // 0.5 and 0.75 are exact in float and in double.
  std::vector<TemplateExemplar> ex;
  ex.push_back(exemplar("A", 0, {1, 0}));
  const auto index = FlatIndex::build(std::move(ex));
  const auto q = EmbeddingVector::from_unit({0.5f, std::sqrt(0.75f)});
  ASSERT_EQ(index.best_template(q).score, 0.5f);
  EXPECT_TRUE(index.classify(q, 0.5, "x").is_meme);
  EXPECT_FALSE(index.classify(q, std::nextafter(0.5, 1.0), "x").is_meme);
  EXPECT_TRUE(meets_threshold(0.75f, 0.75));
  EXPECT_FALSE(meets_threshold(std::nextafter(0.75f, 0.0f), 0.75));
  const auto c = index.classify(q, kDefaultThreshold, "item");
  EXPECT_EQ(c.item_id, "item");
  EXPECT_FALSE(c.is_meme);
  EXPECT_EQ(c.threshold, 0.60);
}

TEST(Classify, ThresholdValidation) {
  EXPECT_NO_THROW(validate_threshold(0.0));
  EXPECT_NO_THROW(validate_threshold(1.0));
  EXPECT_THROW(validate_threshold(-0.01), ParameterError);
  EXPECT_THROW(validate_threshold(1.5), ParameterError);
  EXPECT_THROW(validate_threshold(NAN), ParameterError);
}

TEST(Classify, MonotoneInThreshold) {
  Rng rng(23);
  const auto index = FlatIndex::build(random_exemplars(rng, 6, 3, 16));
  std::vector<EmbeddingVector> queries;
  for (int i = 0; i < 300; ++i) queries.push_back(random_unit(rng, 16));
  std::size_t previous = queries.size() + 1;
  for (int step = 0; step <= 100; ++step) {
    const double t = step / 100.0;
    std::size_t memes = 0;
    for (const auto& q : queries) memes += index.classify(q, t).is_meme ? 1 : 0;
    EXPECT_LE(memes, previous);
    previous = memes;
  }
}

TEST(TemplateMap, RoundTripAndExemplarsFrom) {
  TempDir dir("tmap");
  const std::vector<TemplateMapEntry> map{{"b.jpg", "T1"}, {"a.jpg", "T1"}, {"c.jpg", "T0"}};
  write_template_map(map, dir / "map.tsv");
  const auto read = read_template_map(dir / "map.tsv");
  ASSERT_EQ(read.size(), 3u);
  EXPECT_EQ(read[0].exemplar_item_id, "b.jpg");

  Rng rng(24);
  EmbeddingBatch batch(8);
  for (const char* id : {"a.jpg", "b.jpg", "c.jpg", "unused.jpg"}) batch.add(id, random_unit(rng, 8));
  const auto ex = exemplars_from(batch, read);
  ASSERT_EQ(ex.size(), 3u);
  EXPECT_EQ(ex[0].template_id, "T1");
  EXPECT_EQ(ex[0].exemplar_idx, 0u);
  EXPECT_EQ(ex[0].vector, *batch.find("b.jpg"));
  EXPECT_EQ(ex[1].exemplar_idx, 1u);
  EXPECT_EQ(ex[2].exemplar_idx, 0u);

  write_embedding_file(batch, dir / "ex.emb");
  const auto index = load_index(dir / "ex.emb", dir / "map.tsv");
  EXPECT_EQ(index.size(), 3u);
  EXPECT_EQ(index.template_count(), 2u);

  const std::vector<TemplateMapEntry> dangling{{"ghost.jpg", "T9"}};
  EXPECT_THROW(exemplars_from(batch, dangling), BuildError);

  spit(dir / "bad.tsv", "a.jpg\n");
  EXPECT_THROW(read_template_map(dir / "bad.tsv"), FormatError);
  spit(dir / "dupe.tsv", "a.jpg\tT0\na.jpg\tT1\n");
  EXPECT_THROW(read_template_map(dir / "dupe.tsv"), FormatError);
}
