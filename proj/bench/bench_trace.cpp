// Serial vs OpenMP direct traces, and the oracle path for scale.

#include <benchmark/benchmark.h>

#include "tmtrace/oracle.hpp"
#include "tmtrace/trace.hpp"

using namespace tmtrace;

namespace {

SpaceSpec spec_for(i64 N, const char* label, int k) {
  return SpaceSpec{N, k, DirichletCharacter::from_label(label), SpaceKind::Min};
}

const SpaceSpec kSpaces[] = {spec_for(1, "1.1", 12), spec_for(97, "97.1", 2), spec_for(81, "81.4", 2),
                             spec_for(128, "128.1", 4)};

void BM_TraceSerial(benchmark::State& st) {
  const SpaceSpec& s = kSpaces[st.range(0)];
  const i64 n = st.range(1);
  for (auto _ : st) benchmark::DoNotOptimize(trace_min_serial(s, n));
}

void BM_TraceParallel(benchmark::State& st) {
  const SpaceSpec& s = kSpaces[st.range(0)];
  const i64 n = st.range(1);
  for (auto _ : st) benchmark::DoNotOptimize(trace_min(s, n));
}

void BM_TraceRange(benchmark::State& st) {
  const SpaceSpec& s = kSpaces[st.range(0)];
  for (auto _ : st) benchmark::DoNotOptimize(trace_min_range(s, st.range(1)));
}

void BM_Oracle(benchmark::State& st) {
  const SpaceSpec& s = kSpaces[st.range(0)];
  const i64 n = st.range(1);
  for (auto _ : st) {
    clear_oracle_memo();
    benchmark::DoNotOptimize(trace_min_sieved(s, n));
  }
}

void args(benchmark::internal::Benchmark* b) {
  for (int i = 0; i < 4; ++i)
    for (int n : {97, 1000, 10007}) b->Args({i, n});
}

}  // namespace

BENCHMARK(BM_TraceSerial)->Apply(args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TraceParallel)->Apply(args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TraceRange)->ArgsProduct({{0, 1, 2, 3}, {200}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->ArgsProduct({{0, 1, 2, 3}, {97, 1000}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
