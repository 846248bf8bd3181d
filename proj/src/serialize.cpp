#include "lindil/serialize.hpp"

#include <json.hpp>

namespace lindil {

using nlohmann::ordered_json;

namespace {

ordered_json op_json(const PlanOp& op, bool engine) {
  ordered_json j;
  j["op"] = std::string(op_name(op));
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::DispenseBoundary>) {
          j["side"] = std::string(to_string(o.side));
          j["cf"] = o.cf.to_string();
        } else if constexpr (std::is_same_v<T, op::DispenseStock>) {
          j["kind"] = std::string(to_string(o.kind));
          j["cf"] = o.cf.to_string();
          if (engine) j["source"] = "engine";
        } else if constexpr (std::is_same_v<T, op::Mix>) {
          j["in_a"] = o.in_a.to_string();
          j["in_b"] = o.in_b.to_string();
          j["out"] = o.out.to_string();
          if (o.indices) j["indices"] = {(*o.indices)[0], (*o.indices)[1], (*o.indices)[2]};
          if (o.regeneration) j["regeneration"] = true;
          if (o.reserve_one) j["reserve_one"] = true;
        } else if constexpr (std::is_same_v<T, op::Output>) {
          j["cf"] = o.cf.to_string();
          j["target_index"] = o.target_index;
        } else {
          j["cf"] = o.cf.to_string();
        }
      },
      op);
  return j;
}

ordered_json ops_json(std::span<const PlanOp> ops, bool engine) {
  ordered_json arr = ordered_json::array();
  for (const auto& o : ops) arr.push_back(op_json(o, engine));
  return arr;
}

ordered_json gradient_json(const GradientSpec& g) {
  return {{"a", g.start}, {"d", g.step}, {"n", g.scale}, {"S", g.count}};
}

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

template <class T>
T field(const ordered_json& j, const char* key) {
  if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(std::string("field '") + key + "' has the wrong type");
  }
}

CF cf_field(const ordered_json& j, const char* key) {
  const auto text = field<std::string>(j, key);
  try {
    return CF::parse(text);
  } catch (const DomainError& e) {
    fail(std::string("field '") + key + "': " + e.what());
  }
}

PlanOp parse_op(const ordered_json& j) {
  if (!j.is_object()) fail("op entries must be objects");
  const auto name = field<std::string>(j, "op");
  if (name == "dispense_boundary") {
    const auto side = field<std::string>(j, "side");
    if (side != "left" && side != "right") fail("side must be left or right");
    return op::DispenseBoundary{side == "left" ? Side::Left : Side::Right, cf_field(j, "cf")};
  }
  if (name == "dispense_stock") {
    const auto kind = field<std::string>(j, "kind");
    if (kind != "sample" && kind != "buffer") fail("kind must be sample or buffer");
    return op::DispenseStock{kind == "sample" ? Stock::Sample : Stock::Buffer, cf_field(j, "cf")};
  }
  if (name == "mix") {
    op::Mix m{cf_field(j, "in_a"), cf_field(j, "in_b"), cf_field(j, "out"), std::nullopt, false, false};
    if (j.contains("indices")) {
      const auto v = field<std::vector<std::int64_t>>(j, "indices");
      if (v.size() != 3) fail("indices must have three entries");
      m.indices = std::array{v[0], v[1], v[2]};
    }
    if (j.contains("regeneration")) m.regeneration = field<bool>(j, "regeneration");
    if (j.contains("reserve_one")) m.reserve_one = field<bool>(j, "reserve_one");
    return m;
  }
  if (name == "output") {
    op::Output o{cf_field(j, "cf"), -1};
    if (j.contains("target_index")) o.target_index = field<std::int64_t>(j, "target_index");
    return o;
  }
  if (name == "discard") return op::Discard{cf_field(j, "cf")};
  fail("unknown op '" + name + "'");
}

std::vector<PlanOp> parse_ops(const ordered_json& j) {
  if (!j.is_array()) fail("'ops' must be an array");
  std::vector<PlanOp> ops;
  ops.reserve(j.size());
  for (const auto& o : j) ops.push_back(parse_op(o));
  return ops;
}

ordered_json metrics_object(const Metrics& m) {
  ordered_json j;
  j["mixes"] = m.mixes;
  j["waste"] = m.waste;
  j["peak_storage"] = m.peak_storage;
  j["boundary_left"] = m.boundary_left;
  j["boundary_right"] = m.boundary_right;
  j["sample"] = m.sample;
  j["buffer"] = m.buffer;
  j["dispensed"] = m.dispensed;
  j["outputs"] = m.output_count;
  j["undisposed"] = m.undisposed;
  ordered_json per_cf = ordered_json::object();
  for (const auto& [cf, n] : m.outputs) per_cf[cf.to_string()] = n;
  j["outputs_by_cf"] = per_cf;
  return j;
}

}  // namespace

std::string to_json(const MixPlan& plan, int indent) {
  ordered_json j;
  j["gradient"] = gradient_json(plan.gradient);
  j["order_g"] = plan.order_g;
  j["embedded"] = plan.embedded;
  j["ops"] = ops_json(plan.ops, false);
  return j.dump(indent);
}

std::string to_json(const Synthesis& s, int indent) {
  ordered_json j;
  j["gradient"] = gradient_json(s.spec);
  j["order_g"] = s.gradient.order_g;
  j["embedded"] = s.gradient.embedded;
  j["policy"] = {{"surplus", std::string(to_string(s.policy.surplus))},
                 {"boundary_source", std::string(to_string(s.policy.boundary_source))}};
  ordered_json summary;
  summary["accuracy"] = s.accuracy;
  if (auto g = full_order(s.spec.count)) {
    summary["predicted_gradient_mixes"] = predicted_mixes(*g);
  } else {
    summary["predicted_gradient_mixes"] = nullptr;
  }
  summary["predicted_ldt_waste"] = predicted_waste(s.spec.count);
  summary["M_total"] = s.mixes_total();
  summary["M_gradient"] = s.mixes_gradient;
  summary["M_engines"] = s.mixes_engines;
  summary["W_total"] = s.waste_total();
  summary["W_ldt"] = s.waste_ldt;
  summary["W_engines"] = s.waste_engines;
  summary["peak_storage"] = s.peak_storage;
  summary["storage_bound"] = s.storage_bound;
  j["summary"] = summary;
  ordered_json engines = ordered_json::array();
  for (const auto& e : s.engines) {
    ordered_json ej;
    ej["side"] = std::string(to_string(e.side));
    ej["target"] = e.plan.target.to_string();
    ej["lattice_index"] = e.lattice_index;
    ej["requested"] = e.requested;
    ej["demand"] = e.plan.demand;
    ej["to_gradient"] = e.to_gradient;
    ej["produced"] = e.plan.produced;
    ej["leftover_spares"] = e.plan.leftover_spares;
    ej["mixes"] = e.metrics.mixes;
    ej["surplus"] = e.surplus;
    ej["waste"] = e.waste;
    ej["ops"] = ops_json(e.plan.ops, true);
    engines.push_back(std::move(ej));
  }
  j["engines"] = engines;
  j["ops"] = ops_json(s.gradient.ops, false);
  return j.dump(indent);
}

PlanDocument parse_plan(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("plan document must be a JSON object");
  PlanDocument doc;
  if (j.contains("gradient")) {
    const auto& g = j.at("gradient");
    GradientSpec spec{field<std::int64_t>(g, "a"), field<std::int64_t>(g, "d"),
                      field<unsigned>(g, "n"), field<std::int64_t>(g, "S")};
    try {
      spec.validate();
    } catch (const DomainError& e) {
      fail(std::string("gradient: ") + e.what());
    }
    doc.gradient = spec;
  }
  if (j.contains("order_g")) doc.order_g = field<int>(j, "order_g");
  if (j.contains("embedded")) doc.embedded = field<bool>(j, "embedded");
  doc.ops = parse_ops(j.contains("ops") ? j.at("ops") : ordered_json::array());
  if (j.contains("engines")) {
    const auto& arr = j.at("engines");
    if (!arr.is_array()) fail("'engines' must be an array");
    for (const auto& ej : arr) {
      PlanDocument::Engine e;
      const auto side = field<std::string>(ej, "side");
      if (side != "left" && side != "right") fail("engine side must be left or right");
      e.side = side == "left" ? Side::Left : Side::Right;
      e.target = cf_field(ej, "target");
      e.demand = field<std::int64_t>(ej, "demand");
      e.produced = field<std::int64_t>(ej, "produced");
      if (ej.contains("to_gradient")) e.to_gradient = field<std::int64_t>(ej, "to_gradient");
      e.ops = parse_ops(ej.contains("ops") ? ej.at("ops") : ordered_json::array());
      doc.engines.push_back(std::move(e));
    }
  }
  return doc;
}

std::int64_t Simulation::mixes() const {
  std::int64_t n = gradient.mixes;
  for (const auto& e : engines) n += e.mixes;
  return n;
}

std::int64_t Simulation::waste() const {
  std::int64_t n = gradient.waste;
  for (const auto& e : engines) n += e.waste;
  return n;
}

Simulation simulate(const PlanDocument& doc) {
  Simulation sim;
  Supplies gradient_supply = Supplies::unlimited();
  for (const auto& e : doc.engines) {
    Execution ex = execute(e.ops);
    if (ex.metrics.output_count != e.produced) {
      throw InvariantViolation("engine " + std::string(to_string(e.side)) + " declares " +
                               std::to_string(e.produced) + " droplets but outputs " +
                               std::to_string(ex.metrics.output_count));
    }
    const std::int64_t delivered = e.to_gradient >= 0 ? e.to_gradient : e.produced;
    (e.side == Side::Left ? gradient_supply.boundary_left : gradient_supply.boundary_right) = delivered;
    const auto offset = static_cast<std::int64_t>(sim.trace.size());
    for (auto& row : ex.trace) {
      row.step += offset;
      sim.trace.push_back(std::move(row));
    }
    sim.engines.push_back(std::move(ex.metrics));
  }
  Execution ex = execute(doc.ops, gradient_supply);
  const auto offset = static_cast<std::int64_t>(sim.trace.size());
  for (auto& row : ex.trace) {
    row.step += offset;
    sim.trace.push_back(std::move(row));
  }
  sim.gradient = std::move(ex.metrics);
  return sim;
}

std::string metrics_json(const Simulation& sim, int indent) {
  ordered_json j;
  j["M_total"] = sim.mixes();
  j["W_total"] = sim.waste();
  j["gradient"] = metrics_object(sim.gradient);
  ordered_json engines = ordered_json::array();
  for (const auto& m : sim.engines) engines.push_back(metrics_object(m));
  j["engines"] = engines;
  return j.dump(indent);
}

}  // namespace lindil
