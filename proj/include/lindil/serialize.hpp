#pragma once

// JSON plan documents: export of synthesized plans and re-import for replay.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lindil/executor.hpp"
#include "lindil/pipeline.hpp"

namespace lindil {

std::string to_json(const Synthesis& s, int indent = 2);
std::string to_json(const MixPlan& plan, int indent = 2);

struct PlanDocument {
  struct Engine {
    Side side = Side::Left;
    CF target;
    std::int64_t demand = 0;
    std::int64_t produced = 0;
    std::int64_t to_gradient = -1;  // -1 when not recorded
    std::vector<PlanOp> ops;
  };

  std::optional<GradientSpec> gradient;
  int order_g = 0;
  bool embedded = false;
  std::vector<Engine> engines;
  std::vector<PlanOp> ops;
};

/// Throws ParseError on malformed JSON or unknown ops.
PlanDocument parse_plan(std::string_view json);

struct Simulation {
  Metrics gradient;
  std::vector<Metrics> engines;
  std::vector<TraceRow> trace;  // engines first, then the gradient; steps run on

  std::int64_t mixes() const;
  std::int64_t waste() const;
};

/// Replays every op list in the document. Engine outputs bound the boundary
/// supply of the gradient replay when engines are present.
Simulation simulate(const PlanDocument& doc);

std::string metrics_json(const Simulation& sim, int indent = 2);

}  // namespace lindil
