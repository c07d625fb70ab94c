#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "seedtree/addressing.hpp"
#include "seedtree/metrics.hpp"
#include "seedtree/trace.hpp"
#include "seedtree/tree.hpp"

namespace {

using namespace seedtree;

std::vector<ItemId> dense_items(std::uint64_t n) {
  std::vector<ItemId> items(n);
  std::iota(items.begin(), items.end(), ItemId{0});
  return items;
}

void BM_HashBit(benchmark::State& state) {
  const AddressProvider addr(42);
  ItemId v = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(addr.bit(v++, 7));
  }
}
BENCHMARK(BM_HashBit);

void BM_Init(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    SeedTree tree(dense_items(n), {4, 0.5, 1});
    benchmark::DoNotOptimize(tree.state_digest());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Init)->Arg(4095)->Arg(65535);

void BM_Access(benchmark::State& state) {
  const auto c = static_cast<std::uint32_t>(state.range(0));
  const double f = static_cast<double>(state.range(1)) / 100.0;
  const Trace trace = generate_trace(4095, 100000, 0.6, 7);
  SeedTree tree(dense_items(4095), {c, f, 7});
  std::size_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree.access(trace.requests[t]).total_cost);
    t = (t + 1) % trace.requests.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Access)->Args({2, 50})->Args({8, 50})->Args({8, 75});

void BM_RankTracker(benchmark::State& state) {
  const Trace trace = generate_trace(65535, 1000000, 0.6, 9);
  RankTracker tracker(trace.n_items, trace.requests.size());
  std::size_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tracker.rank_of(trace.requests[t]));
    tracker.record(trace.requests[t]);
    t = (t + 1) % trace.requests.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RankTracker);

}  // namespace

BENCHMARK_MAIN();
