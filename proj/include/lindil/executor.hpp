#pragma once

// Replays plans against a droplet inventory and measures them.
//
// Inventory model: a single mix-split module holds the two droplets it just
// produced until the next mix; droplets it does not consume then move into
// storage cells. Dispensed droplets wait beside the module for their mix.
// "Stored" counts storage cells only, so droplets that go straight from the
// module to an output (or into the next mix) are never counted.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lindil/engine.hpp"
#include "lindil/ldt.hpp"

namespace lindil {

struct Supplies {
  std::optional<std::int64_t> boundary_left;
  std::optional<std::int64_t> boundary_right;
  std::optional<std::int64_t> sample;
  std::optional<std::int64_t> buffer;

  static Supplies unlimited() { return {}; }
  static Supplies boundaries(std::int64_t left, std::int64_t right) { return {left, right, {}, {}}; }
};

struct Metrics {
  std::int64_t mixes = 0;
  std::int64_t waste = 0;  // discards plus anything left undisposed at the end
  std::int64_t peak_storage = 0;
  std::int64_t boundary_left = 0;
  std::int64_t boundary_right = 0;
  std::int64_t sample = 0;
  std::int64_t buffer = 0;
  std::int64_t dispensed = 0;
  std::int64_t output_count = 0;
  std::int64_t undisposed = 0;
  std::map<CF, std::int64_t> outputs;   // keyed by value
  std::map<CF, std::int64_t> produced;  // droplets created by mixes, per CF
  std::vector<std::int64_t> output_targets;

  std::int64_t boundary_used(Side side) const {
    return side == Side::Left ? boundary_left : boundary_right;
  }
};

struct TraceRow {
  std::int64_t step = 0;
  std::string op;
  std::string in_a;
  std::string in_b;
  std::string out;
  std::int64_t stored_after = 0;
  std::int64_t waste_after = 0;
};

struct Execution {
  Metrics metrics;
  std::vector<TraceRow> trace;
};

/// Replays `ops` in order. Throws MissingDroplet when an op needs a droplet
/// that does not exist, SupplyExhausted when a supply limit is exceeded, and
/// InvariantViolation when a mix result or droplet conservation is wrong.
Execution execute(std::span<const PlanOp> ops, const Supplies& supplies = Supplies::unlimited());
Execution execute(const MixPlan& plan, const Supplies& supplies = Supplies::unlimited());
Execution execute(const EnginePlan& plan, const Supplies& supplies = Supplies::unlimited());

struct ValidationFailure {
  std::size_t op_index = 0;
  std::string message;
};

/// Dry run with unlimited supplies; the first failing op, if any.
std::optional<ValidationFailure> validate(std::span<const PlanOp> ops);
std::optional<ValidationFailure> validate(const MixPlan& plan);

/// Trace as CSV: step,op,inA,inB,out,stored_after,waste_after.
std::string trace_csv(std::span<const TraceRow> trace);

}  // namespace lindil
