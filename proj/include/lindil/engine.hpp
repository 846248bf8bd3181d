#pragma once

// Single-target dilution by bit scanning, and the stack-based engine that
// mass-produces one CF by replaying chain suffixes from stored spares.

#include <cstdint>
#include <vector>

#include "lindil/concentration.hpp"
#include "lindil/ldt.hpp"

namespace lindil {

struct BsChain {
  CF target;
  int length = 0;            // m: number of mixes
  std::vector<Stock> steps;  // stock mixed in after the initial sample+buffer mix (m - 1 entries)
  std::vector<CF> levels;    // CF after each mix; levels.back() == target

  /// Stock droplet consumed by the mix that produces levels[level].
  Stock stock_for_level(int level) const { return steps[static_cast<std::size_t>(level - 1)]; }
};

/// Bit-scanning chain for `target`. Stock values (0 or 1) give an empty chain.
BsChain bs_sequence(const CF& target);

struct EnginePlan {
  CF target;
  std::int64_t demand = 0;
  std::vector<PlanOp> ops;
  std::int64_t produced = 0;
  std::int64_t leftover_spares = 0;
  std::int64_t mixes = 0;
  int peak_stack = 0;
  int chains = 0;  // fresh chains started from stock
};

/// Produces at least `demand` droplets of `target` (in pairs), refilling LIFO
/// from the spare stack. CFs are written at scale `accuracy`. Spares left on
/// the stack are discarded at the end. Demand above 2^m restarts from stock.
/// Output ops carry `target_index` so a pipeline can route the droplets.
EnginePlan engine_plan(const CF& target, std::int64_t demand, unsigned accuracy,
                       std::int64_t target_index = -1);

}  // namespace lindil
