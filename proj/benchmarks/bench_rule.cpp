#include <benchmark/benchmark.h>

#include "lavanet/plasticity.hpp"

using namespace lavanet;

namespace {

const char* kRule = "2^-2*x1*y0 - 2^-2*y1*x0 + 2^-4*x1*y1*y0 - 2^-3*y0*w*w";

void BM_ParseRule(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parseRule(kRule));
}
BENCHMARK(BM_ParseRule);

void BM_FormatRule(benchmark::State& state) {
  const auto ast = parseRule(kRule);
  for (auto _ : state) benchmark::DoNotOptimize(formatRule(ast));
}
BENCHMARK(BM_FormatRule);

void BM_RuleDelta(benchmark::State& state) {
  const CompiledRule rule(parseRule(kRule));
  TraceState traces(2);
  traces.x1 = {3.0, 1.0};
  traces.y1 = {2.0, 4.0};
  traces.y0 = {1, 1};
  double w = 10.0;
  for (auto _ : state) {
    w = 10.0 + rule.delta(traces, 0, 1, w) * 1e-9;
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_RuleDelta);

}  // namespace
