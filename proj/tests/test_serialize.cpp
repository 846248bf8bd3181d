#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "lindil/serialize.hpp"

using namespace lindil;

TEST_CASE("plan JSON layout") {
  const Synthesis s = synthesize(GradientSpec{50, 20, 10, 5});
  const auto j = nlohmann::json::parse(to_json(s));
  CHECK(j["gradient"]["a"] == 50);
  CHECK(j["gradient"]["S"] == 5);
  CHECK(j["order_g"] == 2);
  CHECK(j["summary"]["M_total"] == 24);
  CHECK(j["summary"]["W_total"] == 14);
  CHECK(j["summary"]["predicted_gradient_mixes"] == 4);
  REQUIRE(j["engines"].size() == 2);
  CHECK(j["engines"][0]["target"] == "50/1024");
  CHECK(j["engines"][0]["ops"][0]["op"] == "dispense_stock");
  CHECK(j["engines"][0]["ops"][0]["source"] == "engine");
  CHECK(j["ops"][0]["op"] == "dispense_boundary");
  bool saw_mix = false;
  for (const auto& o : j["ops"]) {
    if (o["op"] == "mix") {
      saw_mix = true;
      CHECK(o.contains("in_a"));
      CHECK(o.contains("out"));
      CHECK(o["indices"].size() == 3);
    }
  }
  CHECK(saw_mix);
}

TEST_CASE("round trip replays to the same metrics") {
  for (const auto& c : table_cases()) {
    const Synthesis s = synthesize(c.spec);
    const PlanDocument doc = parse_plan(to_json(s));
    REQUIRE(doc.gradient);
    CHECK(*doc.gradient == c.spec);
    CHECK(doc.ops.size() == s.gradient.ops.size());
    const Simulation sim = simulate(doc);
    CHECK(sim.mixes() == s.mixes_total());
    CHECK(sim.gradient.waste == s.waste_ldt);
    CHECK(sim.gradient.mixes == s.mixes_gradient);
    CHECK(to_json(s) == to_json(s));
  }
}

TEST_CASE("bare MixPlan documents replay") {
  const MixPlan p = plan_full(GradientSpec{0, 1, 3, 9});
  const Simulation sim = simulate(parse_plan(to_json(p)));
  CHECK(sim.gradient.mixes == 11);
  CHECK(sim.engines.empty());
  CHECK(sim.trace.size() == p.ops.size());
  CHECK(sim.trace.back().step == static_cast<std::int64_t>(p.ops.size()));
}

TEST_CASE("trace steps run on across engines and gradient") {
  const Synthesis s = synthesize(GradientSpec{50, 20, 10, 5});
  const Simulation sim = simulate(parse_plan(to_json(s)));
  for (std::size_t i = 0; i < sim.trace.size(); ++i) {
    CHECK(sim.trace[i].step == static_cast<std::int64_t>(i + 1));
  }
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_plan("{"), ParseError);
  CHECK_THROWS_AS(parse_plan("[]"), ParseError);
  CHECK_THROWS_AS(parse_plan(R"({"ops":[{"op":"teleport"}]})"), ParseError);
  CHECK_THROWS_AS(parse_plan(R"({"ops":[{"op":"output","cf":"1/3"}]})"), ParseError);
  CHECK_THROWS_AS(parse_plan(R"({"ops":[{"op":"mix","in_a":"0/2"}]})"), ParseError);
  CHECK_THROWS_AS(parse_plan(R"({"gradient":{"a":0,"d":1,"n":2,"S":2},"ops":[]})"), ParseError);
}

TEST_CASE("tampered plans fail replay") {
  auto j = nlohmann::json::parse(to_json(plan_full(GradientSpec{0, 1, 3, 9})));
  j["ops"].erase(j["ops"].begin());
  CHECK_THROWS_AS(simulate(parse_plan(j.dump())), MissingDroplet);

  auto e = nlohmann::json::parse(to_json(synthesize(GradientSpec{50, 20, 10, 5})));
  e["engines"][0]["to_gradient"] = 1;
  CHECK_THROWS_AS(simulate(parse_plan(e.dump())), SupplyExhausted);
}
