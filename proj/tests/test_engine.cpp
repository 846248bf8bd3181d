#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "lindil/engine.hpp"
#include "lindil/executor.hpp"

using namespace lindil;

namespace {

// Counts mixes of a LIFO refill schedule by tracking only spare levels.
struct RefillCount {
  std::int64_t mixes = 0;
  std::int64_t produced = 0;
  std::int64_t leftover = 0;
  int peak = 0;
};

RefillCount count_refills(int m, std::int64_t q) {
  RefillCount r;
  std::vector<int> stack;
  while (r.produced < q) {
    int level;
    if (stack.empty()) {
      level = 0;
      ++r.mixes;
    } else {
      level = stack.back() + 1;
      stack.pop_back();
      ++r.mixes;
    }
    for (; level < m - 1; ++level) {
      stack.push_back(level);
      r.peak = std::max(r.peak, static_cast<int>(stack.size()));
      ++r.mixes;
    }
    r.produced += 2;
  }
  r.leftover = static_cast<std::int64_t>(stack.size());
  return r;
}

}  // namespace

TEST_CASE("bs_sequence 176/256") {
  const BsChain c = bs_sequence(CF::at_scale(176, 8));
  CHECK(c.length == 4);
  CHECK(c.steps == std::vector<Stock>{Stock::Sample, Stock::Buffer, Stock::Sample});

  // Oracle: recurrence on (num, 2^k) pairs.
  std::uint64_t num = 1;
  unsigned k = 1;
  std::vector<std::pair<std::uint64_t, unsigned>> expect{{1, 1}};
  for (Stock s : c.steps) {
    num = num + (s == Stock::Sample ? (std::uint64_t{1} << k) : 0);
    ++k;
    expect.emplace_back(num, k);
  }
  REQUIRE(c.levels.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(c.levels[i] == make_cf(expect[i].first, expect[i].second));
  }
  CHECK(c.levels[1] == make_cf(3, 2));
  CHECK(c.levels[2] == make_cf(3, 3));
  CHECK(c.levels.back() == make_cf(11, 4));
}

TEST_CASE("bs_sequence lengths") {
  CHECK(bs_sequence(make_cf(1, 1)).length == 1);
  CHECK(bs_sequence(CF::at_scale(50, 10)).length == 10 - trailing_zeros(50));
  CHECK(bs_sequence(CF::at_scale(50, 10)).length == 9);
  CHECK(bs_sequence(CF::buffer()).length == 0);
  CHECK(bs_sequence(CF::sample()).length == 0);
}

TEST_CASE("bs_sequence replays every odd target") {
  for (unsigned n = 1; n <= 12; ++n) {
    for (std::uint64_t x = 1; x < (std::uint64_t{1} << n); x += 2) {
      const BsChain c = bs_sequence(make_cf(x, n));
      CHECK(c.length == static_cast<int>(n));
      CF level = mix_cf(CF::sample(), CF::buffer());
      for (Stock s : c.steps) level = mix_cf(level, s == Stock::Sample ? CF::sample() : CF::buffer());
      CHECK(level == make_cf(x, n));
    }
  }
}

TEST_CASE("engine_plan examples") {
  const EnginePlan p = engine_plan(CF::at_scale(176, 8), 16, 8);
  CHECK(p.produced == 16);
  CHECK(p.mixes == 15);
  CHECK(p.leftover_spares == 0);
  CHECK(p.peak_stack <= 7);
  const Metrics m = execute(p).metrics;
  CHECK(m.mixes == 15);
  CHECK(m.waste == 0);
  CHECK(m.output_count == 16);

  const RefillCount oracle = count_refills(9, 3);
  const EnginePlan q = engine_plan(CF::at_scale(50, 10), 3, 10);
  CHECK(q.mixes == oracle.mixes);
  CHECK(q.mixes == 10);
  CHECK(q.produced == 4);
  CHECK(q.leftover_spares == oracle.leftover);
  CHECK(q.leftover_spares == 7);

  const EnginePlan h = engine_plan(make_cf(1, 1), 2, 10);
  CHECK(h.mixes == 1);
  CHECK(h.produced == 2);
  CHECK(h.leftover_spares == 0);
}

TEST_CASE("engine_plan against the refill oracle") {
  for (unsigned n = 1; n <= 6; ++n) {
    for (std::uint64_t x = 1; x < (std::uint64_t{1} << n); x += 2) {
      const CF t = make_cf(x, n);
      const int m = static_cast<int>(n);
      for (std::int64_t q = 1; q <= (std::int64_t{2} << m) + 3; ++q) {
        const EnginePlan p = engine_plan(t, q, n);
        const RefillCount o = count_refills(m, q);
        CHECK(p.mixes == o.mixes);
        CHECK(p.produced == o.produced);
        CHECK(p.produced >= q);
        CHECK(p.produced % 2 == 0);
        CHECK(p.leftover_spares == o.leftover);
        CHECK(p.peak_stack <= m - 1);
        if (q == (std::int64_t{1} << m)) {
          CHECK(p.mixes == q - 1);
          CHECK(p.leftover_spares == 0);
        }
        const Metrics e = execute(p).metrics;
        CHECK(e.output_count == p.produced);
        CHECK(e.waste == p.leftover_spares);
        CHECK(e.dispensed == e.output_count + e.waste);
        CHECK(e.peak_storage <= m - 1);
      }
    }
  }
}

TEST_CASE("engine_plan stock values and errors") {
  const EnginePlan s = engine_plan(CF::sample(), 5, 10);
  CHECK(s.mixes == 0);
  CHECK(s.produced == 5);
  CHECK(execute(s).metrics.output_count == 5);
  CHECK_THROWS_AS(engine_plan(make_cf(1, 1), 0, 10), DomainError);
  CHECK_THROWS_AS(engine_plan(make_cf(1, 11), 2, 10), DomainError);
}
