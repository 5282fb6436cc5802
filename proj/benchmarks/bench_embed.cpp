#include <benchmark/benchmark.h>

#include <random>

#include "memeground/embedding.hpp"

using namespace memeground;

namespace {

void BM_ReferenceEmbed(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<std::byte> bytes(static_cast<std::size_t>(state.range(0)));
  for (auto& b : bytes) b = static_cast<std::byte>(rng());
  for (auto _ : state) benchmark::DoNotOptimize(reference_embed(bytes, 768));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReferenceEmbed)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);

void BM_Emb1Roundtrip(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<std::byte> seed(16);
  EmbeddingBatch batch(768);
  for (int i = 0; i < state.range(0); ++i) {
    for (auto& b : seed) b = static_cast<std::byte>(rng());
    batch.add("img" + std::to_string(i), reference_embed(seed, 768));
  }
  for (auto _ : state) benchmark::DoNotOptimize(decode_embedding_file(encode_embedding_file(batch)));
}
BENCHMARK(BM_Emb1Roundtrip)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
