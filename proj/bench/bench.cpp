#include <benchmark/benchmark.h>
#include <omp.h>

#include "klr/klr.hpp"
#include "klr/kzero.hpp"
#include "klr/qalgebra.hpp"

using namespace klr;

namespace {

const Datum& d1() {
  static const Datum d = load_datum(std::string(KLR_DATA_DIR) + "/D1.json");
  return d;
}

RootVector weight(int64_t code) { return {static_cast<int>(code / 10), static_cast<int>(code % 10)}; }

void BM_verify_relations(benchmark::State& state) {
  const KLRParams p = default_params(d1());
  const bool parallel = state.range(1) != 0;
  for (auto _ : state) {
    KLRBlock blk(d1(), p, weight(state.range(0)));
    benchmark::DoNotOptimize(verify_relations(blk, parallel).pass());
  }
}

void BM_gram_K(benchmark::State& state) {
  const auto words = enumerate_seq(d1(), weight(state.range(0)), 8);
  const bool parallel = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(gram_K(d1(), words, parallel));
}

void BM_k0_pair_series(benchmark::State& state) {
  const DividedSequence a{{0, 2}, {1, 1}}, b{{1, 1}, {0, 2}};
  const int threads = state.range(0) != 0 ? omp_get_max_threads() : 1;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(threads);
  for (auto _ : state) benchmark::DoNotOptimize(k0_pair_series(d1(), a, b, 16));
  omp_set_num_threads(saved);
}

}  // namespace

// range(0): weight as tens digit for index 1, units for index 2; range(1): 0 serial, 1 OpenMP
BENCHMARK(BM_verify_relations)->ArgsProduct({{22, 32, 23}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gram_K)->ArgsProduct({{23, 33, 34}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_k0_pair_series)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
