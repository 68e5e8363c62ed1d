#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "bqcs/bitcode.hpp"
#include "bqcs/convapprox.hpp"
#include "bqcs/quantize.hpp"
#include "bqcs/sensing.hpp"
#include "bqcs/tensor.hpp"

namespace {

using namespace bqcs;

void BM_BinaryDot(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const Seed seed{42, 0};
  const BitCode a = sign_quantize(random_gaussian({p}, seed.derive(0)));
  const BitCode b = sign_quantize(random_gaussian({p}, seed.derive(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(binary_dot(a, b));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BinaryDot)->Range(64, 1 << 20);

void BM_FloatDot(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const Seed seed{42, 0};
  const BitCode a = sign_quantize(random_gaussian({p}, seed.derive(0)));
  const BitCode b = sign_quantize(random_gaussian({p}, seed.derive(1)));
  std::vector<double> ua(p), ub(p);
  for (std::size_t i = 0; i < p; ++i) {
    ua[i] = a.sign(i);
    ub[i] = b.sign(i);
  }
  for (auto _ : state) {
    double dot = 0.0;
    for (std::size_t i = 0; i < p; ++i) dot += ua[i] * ub[i];
    benchmark::DoNotOptimize(dot);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FloatDot)->Range(64, 1 << 20);

void BM_Pack(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const Tensor w = random_gaussian({p}, Seed{7, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sign_quantize(w));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Pack)->Range(64, 1 << 18);

void BM_QcsQuantize(benchmark::State& state) {
  const int64_t p = 576;  // 24 * 24, a typical flattened kernel length
  const int64_t m = state.range(0) * p;
  const Tensor w = random_gaussian({static_cast<std::size_t>(p)}, Seed{7, 0});
  const SensingEnsemble ens =
      gen_ensemble(m, p, DitherSpec::none(), false, Seed{9, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcs_quantize(w, ens));
  }
  state.SetItemsProcessed(state.iterations() * m * p);
}
BENCHMARK(BM_QcsQuantize)->Arg(1)->Arg(4)->Arg(16);

void BM_ApproxConvQcs(benchmark::State& state) {
  const ConvSpec spec{3, 3, 8, 1, 0};
  const Tensor input = random_gaussian({16, 16, 8}, Seed{11, 0});
  const Tensor kernel = random_gaussian({3, 3, 8}, Seed{12, 0});
  const int64_t p = 3 * 3 * 8;
  const SensingEnsemble ens = gen_ensemble(state.range(0) * p, p,
                                           DitherSpec::none(), false,
                                           Seed{13, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        approx_conv_qcs(input, kernel, spec, ens, QcsConvMode::debiased));
  }
}
BENCHMARK(BM_ApproxConvQcs)->Arg(1)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
