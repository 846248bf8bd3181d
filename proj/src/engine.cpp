#include "lindil/engine.hpp"

#include <string>

namespace lindil {

BsChain bs_sequence(const CF& target) {
  BsChain chain;
  chain.target = target;
  if (target.is_stock()) return chain;
  const CF reduced = target.canonical();
  const std::uint64_t x = reduced.numerator();
  const int m = static_cast<int>(reduced.scale());
  chain.length = m;
  CF level = mix_cf(CF::sample(), CF::buffer());
  chain.levels.push_back(level);
  for (int bit = 1; bit < m; ++bit) {
    const Stock s = ((x >> bit) & 1u) ? Stock::Sample : Stock::Buffer;
    chain.steps.push_back(s);
    level = mix_cf(level, s == Stock::Sample ? CF::sample() : CF::buffer());
    chain.levels.push_back(level);
  }
  return chain;
}

namespace {

CF stock_cf(Stock s, unsigned scale) {
  return s == Stock::Sample ? CF::at_scale(std::uint64_t{1} << scale, scale)
                            : CF::at_scale(0, scale);
}

}  // namespace

EnginePlan engine_plan(const CF& target, std::int64_t demand, unsigned accuracy,
                       std::int64_t target_index) {
  if (demand < 1) throw DomainError("engine demand must be at least 1");
  if (!target.representable_at(accuracy)) {
    throw DomainError("target " + target.to_string() + " is finer than 2^-" + std::to_string(accuracy));
  }
  EnginePlan plan;
  plan.target = target.rescaled(accuracy);
  plan.demand = demand;

  if (target.is_stock()) {
    const Stock s = target == CF::sample() ? Stock::Sample : Stock::Buffer;
    for (std::int64_t i = 0; i < demand; ++i) {
      plan.ops.push_back(op::DispenseStock{s, stock_cf(s, accuracy)});
      plan.ops.push_back(op::Output{plan.target, target_index});
    }
    plan.produced = demand;
    return plan;
  }

  const BsChain chain = bs_sequence(target);
  const int m = chain.length;
  auto level_cf = [&](int level) { return chain.levels[static_cast<std::size_t>(level)].rescaled(accuracy); };

  std::vector<int> stack;  // levels of stored spares, top at back
  auto mix_with_stock = [&](int from_level) {
    const Stock s = chain.stock_for_level(from_level + 1);
    plan.ops.push_back(op::DispenseStock{s, stock_cf(s, accuracy)});
    plan.ops.push_back(op::Mix{level_cf(from_level), stock_cf(s, accuracy), level_cf(from_level + 1),
                               std::nullopt, false, false});
    ++plan.mixes;
  };

  while (plan.produced < demand) {
    int level = 0;
    if (stack.empty()) {
      plan.ops.push_back(op::DispenseStock{Stock::Sample, stock_cf(Stock::Sample, accuracy)});
      plan.ops.push_back(op::DispenseStock{Stock::Buffer, stock_cf(Stock::Buffer, accuracy)});
      plan.ops.push_back(op::Mix{stock_cf(Stock::Sample, accuracy), stock_cf(Stock::Buffer, accuracy),
                                 level_cf(0), std::nullopt, false, false});
      ++plan.mixes;
      ++plan.chains;
    } else {
      const int from = stack.back();
      stack.pop_back();
      mix_with_stock(from);
      level = from + 1;
    }
    while (level < m - 1) {
      stack.push_back(level);
      plan.peak_stack = std::max(plan.peak_stack, static_cast<int>(stack.size()));
      mix_with_stock(level);
      ++level;
    }
    plan.ops.push_back(op::Output{plan.target, target_index});
    plan.ops.push_back(op::Output{plan.target, target_index});
    plan.produced += 2;
  }

  for (int level : stack) plan.ops.push_back(op::Discard{level_cf(level)});
  plan.leftover_spares = static_cast<std::int64_t>(stack.size());
  return plan;
}

}  // namespace lindil
