#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <thread>

#include "lindil/lindil.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  lindil_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("closed forms through the C API") {
  int64_t v = 0;
  CHECK(lindil_predicted_mixes(3, &v) == LINDIL_OK);
  CHECK(v == 11);
  CHECK(lindil_predicted_waste(11, &v) == LINDIL_OK);
  CHECK(v == 1);
  CHECK(lindil_boundary_demand(7, &v) == LINDIL_OK);
  CHECK(v == 64);
  CHECK(lindil_copies_at_depth(3, 0, &v) == LINDIL_OK);
  CHECK(v == 6);
  CHECK(lindil_predicted_mixes(0, &v) == LINDIL_E_DOMAIN);
  CHECK(std::string(lindil_last_error()).find("order") != std::string::npos);
  CHECK(lindil_predicted_mixes(3, nullptr) == LINDIL_E_ARGUMENT);
}

TEST_CASE("synthesize, summarize, serialize, simulate") {
  const lindil_gradient ts1{50, 20, 10, 5};
  lindil_synthesis* s = nullptr;
  REQUIRE(lindil_synthesize(&ts1, 0, nullptr, &s) == LINDIL_OK);
  lindil_summary sum{};
  REQUIRE(lindil_synthesis_summary(s, &sum) == LINDIL_OK);
  CHECK(sum.m_total == 24);
  CHECK(sum.w_total == 14);
  CHECK(sum.order_g == 2);
  CHECK(sum.peak_storage <= sum.storage_bound);

  char* json = nullptr;
  REQUIRE(lindil_synthesis_json(s, &json) == LINDIL_OK);
  const std::string text = take(json);
  lindil_synthesis_free(s);

  lindil_simulation* sim = nullptr;
  REQUIRE(lindil_simulate_json(text.c_str(), &sim) == LINDIL_OK);
  int64_t mixes = 0, waste = 0;
  CHECK(lindil_simulation_totals(sim, &mixes, &waste) == LINDIL_OK);
  CHECK(mixes == 24);
  char* csv = nullptr;
  REQUIRE(lindil_simulation_trace_csv(sim, &csv) == LINDIL_OK);
  CHECK(take(csv).rfind("step,op,inA,inB,out,stored_after,waste_after\n", 0) == 0);
  char* metrics = nullptr;
  REQUIRE(lindil_simulation_metrics_json(sim, &metrics) == LINDIL_OK);
  CHECK(take(metrics).find("\"M_total\": 24") != std::string::npos);
  lindil_simulation_free(sim);
}

TEST_CASE("error codes") {
  lindil_synthesis* s = reinterpret_cast<lindil_synthesis*>(1);
  const lindil_gradient bad{50, 20, 10, 2};
  CHECK(lindil_synthesize(&bad, 0, nullptr, &s) == LINDIL_E_DOMAIN);
  CHECK(s == nullptr);
  CHECK(std::string(lindil_last_error()).find("at least 3") != std::string::npos);

  const lindil_gradient infeasible{600, 30, 10, 12};
  CHECK(lindil_synthesize(&infeasible, 0, nullptr, &s) == LINDIL_E_INFEASIBLE_EMBEDDING);
  CHECK(lindil_synthesize(nullptr, 0, nullptr, &s) == LINDIL_E_ARGUMENT);

  lindil_simulation* sim = nullptr;
  CHECK(lindil_simulate_json("{not json", &sim) == LINDIL_E_PARSE);
  CHECK(sim == nullptr);
  CHECK(lindil_simulate_json(R"({"ops":[{"op":"output","cf":"1/2"}]})", &sim) == LINDIL_E_MISSING_DROPLET);
  CHECK(std::string(lindil_status_name(LINDIL_E_INVARIANT)) == "invariant_violation");
  lindil_synthesis_free(nullptr);
  lindil_simulation_free(nullptr);
  lindil_string_free(nullptr);
}

TEST_CASE("last error is per thread") {
  int64_t v = 0;
  CHECK(lindil_predicted_mixes(0, &v) == LINDIL_E_DOMAIN);
  std::string other;
  std::thread t([&] {
    int64_t w = 0;
    lindil_predicted_mixes(2, &w);
    other = lindil_last_error();
  });
  t.join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(lindil_last_error()).empty());
}

TEST_CASE("experiments and verify") {
  char* table = nullptr;
  REQUIRE(lindil_table_csv(nullptr, &table) == LINDIL_OK);
  CHECK(take(table).find("\nTS1,5,2,10,50,20,24,") != std::string::npos);

  char* csv = nullptr;
  char* summary = nullptr;
  int exact = 0;
  REQUIRE(lindil_sweep_csv(7, nullptr, &csv, &summary, &exact) == LINDIL_OK);
  CHECK(exact == 1);
  const std::string a = take(csv);
  CHECK(take(summary).rfind("g,cases,mean_M,mean_W,gradient_exact\n", 0) == 0);
  REQUIRE(lindil_sweep_csv(7, nullptr, &csv, nullptr, nullptr) == LINDIL_OK);
  CHECK(take(csv) == a);

  char* report = nullptr;
  int ok = 0;
  REQUIRE(lindil_verify(1, 4, 0, &report, &ok) == LINDIL_OK);
  CHECK(ok == 1);
  CHECK(take(report).find("PASS mix_count_zero_waste") != std::string::npos);
  CHECK(lindil_verify(0, 4, 0, &report, &ok) == LINDIL_E_DOMAIN);
}
