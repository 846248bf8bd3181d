#pragma once

// End-to-end synthesis: dilution engines for the two boundary CFs feeding
// the gradient plan, plus the table and sweep experiments built on it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lindil/engine.hpp"
#include "lindil/executor.hpp"
#include "lindil/ldt.hpp"

namespace lindil {

enum class SurplusHandling {
  AsOutput,  // surplus engine droplets of a requested CF count as outputs
  AsWaste,
};

enum class BoundarySource {
  Engines,      // build each boundary CF from sample and buffer
  DirectStock,  // boundary droplets are supplied ready-made
};

struct Policy {
  SurplusHandling surplus = SurplusHandling::AsOutput;
  BoundarySource boundary_source = BoundarySource::Engines;
};

std::string_view to_string(SurplusHandling s);
std::string_view to_string(BoundarySource s);
SurplusHandling parse_surplus(std::string_view text);

struct EngineRun {
  Side side = Side::Left;
  std::int64_t lattice_index = 0;
  bool requested = false;        // boundary is itself a gradient target
  std::int64_t to_gradient = 0;  // droplets consumed by the gradient plan
  EnginePlan plan;               // empty when the CF is a stock value
  Metrics metrics;
  std::int64_t surplus = 0;  // produced beyond demand
  std::int64_t waste = 0;    // leftover spares plus surplus classified as waste
};

struct Synthesis {
  GradientSpec spec;
  unsigned accuracy = 0;
  Policy policy;
  MixPlan gradient;
  Metrics gradient_metrics;
  std::vector<EngineRun> engines;  // left then right; absent for direct supply

  std::int64_t mixes_gradient = 0;
  std::int64_t mixes_engines = 0;
  std::int64_t waste_ldt = 0;
  std::int64_t waste_engines = 0;
  std::int64_t peak_storage = 0;  // engine stacks plus gradient storage
  std::int64_t storage_bound = 0;

  std::int64_t mixes_total() const { return mixes_gradient + mixes_engines; }
  std::int64_t waste_total() const { return waste_ldt + waste_engines; }
  bool within_storage_bound() const { return peak_storage <= storage_bound; }
};

/// Plans and replays the gradient and its engines. Engine demand per side is
/// the gradient plan's boundary consumption plus one when the boundary is a
/// requested target, rounded up to a pair. Stock-valued boundaries cost no
/// mixes. Propagates InfeasibleEmbedding.
Synthesis synthesize(const GradientSpec& spec, unsigned accuracy, const Policy& policy = {});
inline Synthesis synthesize(const GradientSpec& spec, const Policy& policy = {}) {
  return synthesize(spec, spec.scale, policy);
}

/// 2(n + g - 2): n - 1 stack cells per engine plus 2(g - 1) for the gradient.
std::int64_t storage_budget(unsigned accuracy, int g);

struct ReportRow {
  std::string case_id;
  std::int64_t count = 0;
  int g = 0;
  unsigned n = 0;
  std::int64_t a = 0;
  std::int64_t d = 0;
  std::int64_t m_total = 0;
  std::int64_t m_gradient = 0;
  std::int64_t m_engines = 0;
  std::int64_t w_total = 0;
  std::int64_t w_ldt = 0;
  std::int64_t peak_storage = 0;
  std::optional<std::int64_t> ref_m;
  std::optional<std::int64_t> ref_w;
  std::optional<std::int64_t> ref_w_ldt;

  std::optional<std::int64_t> delta_m() const;
  std::optional<std::int64_t> delta_w() const;
};

ReportRow report_row(std::string case_id, const Synthesis& s);

struct ExperimentReport {
  std::vector<std::string> preamble;  // written as leading "# " lines
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;     // written as trailing "# " lines

  std::string to_csv() const;
};

struct TableCase {
  const char* name;
  GradientSpec spec;
  std::int64_t ref_m;
  std::int64_t ref_w;
  std::int64_t ref_w_ldt;
};

/// The four benchmark target sets at n = 10 with their published totals.
const std::vector<TableCase>& table_cases();

ExperimentReport run_table_experiment(const Policy& policy = {});

struct SweepSummary {
  int g = 0;
  std::int64_t cases = 0;
  double mean_m = 0;
  double mean_w = 0;
  bool gradient_exact = true;  // every case: LDT waste 0 and the closed-form mix count
};

struct SweepResult {
  ExperimentReport report;
  std::vector<SweepSummary> summary;
};

inline constexpr int kSweepMinOrder = 2;
inline constexpr int kSweepMaxOrder = 7;
inline constexpr int kSweepCasesPerOrder = 100;
inline constexpr unsigned kSweepAccuracy = 10;

/// Seeded random gradients: for each g in 2..7, 100 uniform (a, d) with
/// a >= 1, d >= 1, a + (S-1) d <= 2^n - 1, built by engines from stock.
SweepResult run_sweep(std::uint64_t seed, const Policy& policy = {});

/// Uniform integer in [lo, hi] from a 64-bit generator, portable across
/// standard libraries.
template <class Gen>
std::int64_t uniform_draw(Gen& gen, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(gen());
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % span + 1) % span;
  std::uint64_t x;
  do {
    x = gen();
  } while (x > limit);
  return lo + static_cast<std::int64_t>(x % span);
}

/// Random feasible spec with `count` points on scale n, a >= 1 and the
/// (embedded, if needed) right boundary strictly below 1.
template <class Gen>
GradientSpec random_spec(Gen& gen, std::int64_t count, unsigned n) {
  const std::int64_t top = (std::int64_t{1} << n) - 1;
  const int order = execution_order(count);
  const std::int64_t reach = std::int64_t{1} << order;  // embedded right boundary index
  const std::int64_t span = std::max(count - 1, reach);
  for (;;) {
    const std::int64_t a = uniform_draw(gen, 1, top - 1);
    const std::int64_t d = uniform_draw(gen, 1, std::max<std::int64_t>(1, (top - 1) / (count - 1)));
    if (a + (count - 1) * d <= top && a + span * d <= top + 1) return {a, d, n, count};
  }
}

}  // namespace lindil
