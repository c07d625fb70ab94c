#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "seedtree/metrics.hpp"
#include "seedtree/trace.hpp"
#include "seedtree/tree.hpp"
#include "support.hpp"

using namespace seedtree;

TEST_CASE("rank of an immediate repeat is 1") {
  RankTracker tracker(10);
  tracker.record(3);
  CHECK(tracker.rank_of(3) == 1);
}

TEST_CASE("rank counts distinct items since the previous request") {
  RankTracker tracker(10);
  tracker.record(1);  // a
  tracker.record(2);  // b
  CHECK(tracker.rank_of(1) == 2);  // sigma = (a, b, a)

  RankTracker longer(10);
  for (ItemId v : {1, 2, 3, 2}) longer.record(v);  // a b c b
  CHECK(longer.rank_of(1) == 3);                   // distinct {b, c, a}
}

TEST_CASE("never-accessed items rank as the whole universe") {
  RankTracker tracker(42);
  CHECK(tracker.rank_of(7) == 42);
  tracker.record(1);
  CHECK(tracker.rank_of(7) == 42);
}

TEST_CASE("repeated requests to one item keep rank 1") {
  RankTracker tracker(5);
  for (int i = 0; i < 100; ++i) {
    tracker.record(2);
    CHECK(tracker.rank_of(2) == 1);
  }
}

TEST_CASE("tracker matches the brute-force oracle on random traces") {
  for (std::uint64_t seed : {1ull, 5ull, 9ull}) {
    const Trace trace = generate_trace(50, 3000, seed % 2 ? 0.7 : 0.0, seed);
    RankTracker tracker(trace.n_items, trace.requests.size());
    for (std::size_t t = 0; t < trace.requests.size(); ++t) {
      CHECK(tracker.rank_of(trace.requests[t]) ==
            test::brute_force_rank(trace.requests, t, trace.n_items));
      tracker.record(trace.requests[t]);
    }
  }
}

TEST_CASE("tracker grows past its length hint") {
  RankTracker tracker(8, 4);
  std::vector<ItemId> trace;
  for (int t = 0; t < 300; ++t) {
    const ItemId v = (t * 13) % 8;
    trace.push_back(v);
    CHECK(tracker.rank_of(v) == test::brute_force_rank(trace, trace.size() - 1, 8));
    tracker.record(v);
  }
}

TEST_CASE("mru_level places ranks into capacity-sized slots") {
  for (std::uint32_t c : {1u, 2u, 5u, 16u}) CHECK(mru_level(1, c) == 0);
  CHECK(mru_level(7, 1) == 2);
  CHECK(mru_level(3, 2) == 1);
  // c=3: ranks 1..3 at the root, 4..9 on level 1, 10..21 on level 2.
  CHECK(mru_level(3, 3) == 0);
  CHECK(mru_level(4, 3) == 1);
  CHECK(mru_level(9, 3) == 1);
  CHECK(mru_level(10, 3) == 2);
  CHECK(mru_level(21, 3) == 2);
  CHECK(mru_level(22, 3) == 3);
  CHECK_THROWS_AS(mru_level(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(mru_level(1, 0), std::invalid_argument);
}

TEST_CASE("mru_level is monotone in rank and antitone in capacity") {
  for (std::uint32_t c : {1u, 2u, 3u, 8u}) {
    for (std::uint64_t rank = 1; rank < 500; ++rank) {
      CHECK(mru_level(rank + 1, c) >= mru_level(rank, c));
      CHECK(mru_level(rank, c + 1) <= mru_level(rank, c));
    }
  }
}

TEST_CASE("lower bound of a constant trace is one first-touch term") {
  const std::vector<ItemId> requests(100, 0);
  const double bound = working_set_lower_bound(requests, 8, 1);
  CHECK(bound == doctest::Approx(mru_level(8, 1) / kLowerBoundDivisor));
}

TEST_CASE("lower bound of an alternating c=1 trace sums warm ranks") {
  std::vector<ItemId> requests;
  for (int i = 0; i < 50; ++i) {
    requests.push_back(0);
    requests.push_back(1);
  }
  // Two first accesses at rank n=2, then 98 accesses at rank 2.
  const double expected = (2.0 * mru_level(2, 1) + 98.0 * 1.0) / kLowerBoundDivisor;
  CHECK(working_set_lower_bound(requests, 2, 1) == doctest::Approx(expected));
}

TEST_CASE("lower bound never exceeds the measured access cost") {
  for (std::uint32_t c : {1u, 2u, 4u}) {
    for (double f : {0.25, 0.5}) {
      const Trace trace = generate_trace(255, 5000, 0.6, 31 + c);
      std::vector<ItemId> items(trace.n_items);
      std::iota(items.begin(), items.end(), ItemId{0});
      SeedTree tree(std::move(items), {c, f, 31 + c});
      std::uint64_t access_cost = 0;
      for (ItemId v : trace.requests) access_cost += tree.access(v).access_cost;
      CHECK(working_set_lower_bound(trace.requests, trace.n_items, c) <=
            static_cast<double>(access_cost));
    }
  }
}

TEST_CASE("audit of rank-perfect placements is flat") {
  MruAudit audit(2);
  for (std::uint64_t rank = 1; rank <= 100; ++rank) audit.add(mru_level(rank, 2), rank);
  CHECK(audit.samples() == 100);
  CHECK(audit.mean() == 0.0);
  CHECK(audit.max() == 0);
  CHECK(audit.histogram().size() == 1);
}

TEST_CASE("online audit equals an offline recomputation from the log") {
  const Trace trace = generate_trace(127, 4000, 0.6, 51);
  std::vector<ItemId> items(trace.n_items);
  std::iota(items.begin(), items.end(), ItemId{0});
  SeedTree tree(std::move(items), {2, 0.5, 51});

  MruAudit online(2);
  CostLedger ledger;
  RankTracker tracker(trace.n_items, trace.requests.size());
  for (ItemId v : trace.requests) {
    const std::uint64_t rank = tracker.rank_of(v);
    const AccessRecord rec = tree.access(v);
    online.add(rec.level_found, rank);
    ledger.add(rec);
    tracker.record(v);
  }

  MruAudit offline(2);
  RankTracker replay(trace.n_items, trace.requests.size());
  REQUIRE(ledger.log.size() == trace.requests.size());
  for (std::size_t t = 0; t < trace.requests.size(); ++t) {
    offline.add(ledger.log[t].level_found, replay.rank_of(trace.requests[t]));
    replay.record(trace.requests[t]);
  }
  CHECK(online.mean() == offline.mean());
  CHECK(online.max() == offline.max());
  CHECK(online.histogram() == offline.histogram());
}

TEST_CASE("ledger keeps total = access + reconfig and both reconfig flavors") {
  CostLedger ledger;
  AccessRecord cheap;
  cheap.level_found = 0;
  ledger.add(cheap);
  AccessRecord costly;
  costly.level_found = 3;
  costly.access_cost = 3;
  costly.move_up_cost = 3;
  costly.push_down_attempts = 2;
  costly.reconfig_cost = 3 + 2 * 3 + 3;
  ledger.add(costly);
  CHECK(ledger.access_cost == 3);
  CHECK(ledger.reconfig_cost == 12);
  CHECK(ledger.total_cost == ledger.access_cost + ledger.reconfig_cost);
  CHECK(ledger.reconfig_cost_uncharged == 6);  // reversal edges dropped
  CHECK(ledger.log.size() == 2);
}

TEST_CASE("competitive report divides and guards") {
  CostLedger ledger;
  AccessRecord rec;
  rec.level_found = 2;
  rec.access_cost = 2;
  rec.reconfig_cost = 4;
  ledger.add(rec);
  const CompetitiveReport report = competitive_report(ledger, 6.0);
  CHECK(report.total_ratio == doctest::Approx(1.0));
  CHECK(report.access_ratio == doctest::Approx(2.0 / 6.0));
  CHECK_THROWS_AS(competitive_report(ledger, 0.0), std::invalid_argument);
}
