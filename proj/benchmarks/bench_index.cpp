#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "memeground/index.hpp"

using namespace memeground;

namespace {

EmbeddingVector random_unit(std::mt19937_64& rng, std::uint32_t dim) {
  std::normal_distribution<float> dist;
  std::vector<float> v(dim);
  for (auto& x : v) x = dist(rng);
  return normalize(std::span<const float>(v));
}

// Roughly the production template set: ~1,765 templates, 3 exemplars each.
const FlatIndex& shared_index(std::uint32_t dim) {
  static std::map<std::uint32_t, FlatIndex> cache;
  auto it = cache.find(dim);
  if (it == cache.end()) {
    std::mt19937_64 rng(9);
    std::vector<TemplateExemplar> ex;
    for (int t = 0; t < 1765; ++t) {
      for (std::uint32_t i = 0; i < 3; ++i) ex.push_back({"T" + std::to_string(t), i, random_unit(rng, dim)});
    }
    it = cache.emplace(dim, FlatIndex::build(std::move(ex))).first;
  }
  return it->second;
}

void BM_BestTemplate(benchmark::State& state) {
  const auto dim = static_cast<std::uint32_t>(state.range(0));
  const auto& index = shared_index(dim);
  std::mt19937_64 rng(10);
  const auto query = random_unit(rng, dim);
  for (auto _ : state) benchmark::DoNotOptimize(index.best_template(query));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(index.size()));
}
BENCHMARK(BM_BestTemplate)->Arg(64)->Arg(768);

void BM_QueryTopk(benchmark::State& state) {
  const auto& index = shared_index(768);
  std::mt19937_64 rng(11);
  const auto query = random_unit(rng, 768);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(index.query_topk(query, k));
}
BENCHMARK(BM_QueryTopk)->Arg(1)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
