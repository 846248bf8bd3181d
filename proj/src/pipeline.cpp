#include "lindil/pipeline.hpp"

#include <random>
#include <sstream>

namespace lindil {

std::string_view to_string(SurplusHandling s) {
  return s == SurplusHandling::AsOutput ? "surplus-as-output" : "surplus-as-waste";
}

std::string_view to_string(BoundarySource s) {
  return s == BoundarySource::Engines ? "engines" : "direct-stock";
}

SurplusHandling parse_surplus(std::string_view text) {
  if (text == "surplus-as-output" || text == "output") return SurplusHandling::AsOutput;
  if (text == "surplus-as-waste" || text == "waste") return SurplusHandling::AsWaste;
  throw DomainError("unknown policy '" + std::string(text) + "'");
}

std::int64_t storage_budget(unsigned accuracy, int g) {
  return 2 * (static_cast<std::int64_t>(accuracy) + g - 2);
}

Synthesis synthesize(const GradientSpec& spec, unsigned accuracy, const Policy& policy) {
  spec.validate();
  if (accuracy < spec.scale) throw DomainError("accuracy is coarser than the gradient scale");

  Synthesis s;
  s.spec = spec;
  s.accuracy = accuracy;
  s.policy = policy;
  s.gradient = plan_arbitrary(spec);

  const Metrics usage = execute(s.gradient).metrics;
  s.gradient_metrics =
      execute(s.gradient, Supplies::boundaries(usage.boundary_left, usage.boundary_right)).metrics;
  s.mixes_gradient = s.gradient_metrics.mixes;
  s.waste_ldt = s.gradient_metrics.waste;
  s.peak_storage = s.gradient_metrics.peak_storage;
  s.storage_bound = storage_budget(accuracy, s.gradient.order_g);

  if (policy.boundary_source == BoundarySource::DirectStock) return s;

  const std::int64_t top = s.gradient.lattice_top();
  for (const Side side : {Side::Left, Side::Right}) {
    EngineRun run;
    run.side = side;
    run.lattice_index = side == Side::Left ? 0 : top;
    run.requested = run.lattice_index <= spec.count - 1;
    run.to_gradient = usage.boundary_used(side);
    const std::int64_t demand = run.to_gradient + (run.requested ? 1 : 0);
    run.plan = engine_plan(spec.at(run.lattice_index), demand, accuracy, run.lattice_index);
    run.metrics = execute(run.plan).metrics;
    run.surplus = run.plan.produced - demand;
    run.waste = run.metrics.waste;
    if (policy.surplus == SurplusHandling::AsWaste || !run.requested) run.waste += run.surplus;
    s.mixes_engines += run.metrics.mixes;
    s.waste_engines += run.waste;
    s.peak_storage += run.metrics.peak_storage;
    s.engines.push_back(std::move(run));
  }
  return s;
}

std::optional<std::int64_t> ReportRow::delta_m() const {
  if (!ref_m) return std::nullopt;
  return m_total - *ref_m;
}

std::optional<std::int64_t> ReportRow::delta_w() const {
  if (!ref_w) return std::nullopt;
  return w_total - *ref_w;
}

ReportRow report_row(std::string case_id, const Synthesis& s) {
  ReportRow r;
  r.case_id = std::move(case_id);
  r.count = s.spec.count;
  r.g = s.gradient.order_g;
  r.n = s.accuracy;
  r.a = s.spec.start;
  r.d = s.spec.step;
  r.m_total = s.mixes_total();
  r.m_gradient = s.mixes_gradient;
  r.m_engines = s.mixes_engines;
  r.w_total = s.waste_total();
  r.w_ldt = s.waste_ldt;
  r.peak_storage = s.peak_storage;
  return r;
}

namespace {

void put(std::ostream& out, const std::optional<std::int64_t>& v) {
  if (v) out << *v;
}

}  // namespace

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  for (const auto& line : preamble) out << "# " << line << '\n';
  out << "case_id,S,g,n,a,d,M_total,M_gradient,M_engines,W_total,W_ldt,peak_storage,ref_M,ref_W,"
         "delta_M,delta_W\n";
  for (const auto& r : rows) {
    out << r.case_id << ',' << r.count << ',' << r.g << ',' << r.n << ',' << r.a << ',' << r.d << ','
        << r.m_total << ',' << r.m_gradient << ',' << r.m_engines << ',' << r.w_total << ','
        << r.w_ldt << ',' << r.peak_storage << ',';
    put(out, r.ref_m);
    out << ',';
    put(out, r.ref_w);
    out << ',';
    put(out, r.delta_m());
    out << ',';
    put(out, r.delta_w());
    out << '\n';
  }
  for (const auto& line : notes) out << "# " << line << '\n';
  return out.str();
}

const std::vector<TableCase>& table_cases() {
  static const std::vector<TableCase> cases = {
      {"TS1", {50, 20, 10, 5}, 24, 14, 0},
      {"TS2", {110, 10, 10, 10}, 40, 13, 2},
      {"TS3", {20, 50, 10, 17}, 57, 12, 0},
      {"TS4", {40, 30, 10, 20}, 65, 10, 2},
  };
  return cases;
}

ExperimentReport run_table_experiment(const Policy& policy) {
  ExperimentReport report;
  report.preamble.push_back("policy=" + std::string(to_string(policy.surplus)) +
                            " boundaries=" + std::string(to_string(policy.boundary_source)));
  for (const auto& c : table_cases()) {
    const Synthesis s = synthesize(c.spec, policy);
    ReportRow row = report_row(c.name, s);
    row.ref_m = c.ref_m;
    row.ref_w = c.ref_w;
    row.ref_w_ldt = c.ref_w_ldt;
    if (row.w_ldt != c.ref_w_ldt) {
      report.notes.push_back(std::string(c.name) + ": W_ldt " + std::to_string(row.w_ldt) +
                             " vs reference " + std::to_string(c.ref_w_ldt) +
                             " (ZC formula gives " + std::to_string(predicted_waste(c.spec.count)) +
                             ")");
    }
    if (s.gradient.embedded) {
      report.notes.push_back(
          std::string(c.name) + ": non-power size embedded at g=" + std::to_string(s.gradient.order_g) +
          "; engine demand = pruned plan's boundary use (left " +
          std::to_string(s.gradient_metrics.boundary_left) + ", right " +
          std::to_string(s.gradient_metrics.boundary_right) +
          ") plus one target droplet on the left; the embedded right boundary is not a target, so "
          "its surplus is waste. Totals are compared by delta only.");
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

SweepResult run_sweep(std::uint64_t seed, const Policy& policy) {
  SweepResult result;
  result.report.preamble.push_back("generator=mt19937_64 seed=" + std::to_string(seed));
  std::mt19937_64 gen(seed);
  for (int g = kSweepMinOrder; g <= kSweepMaxOrder; ++g) {
    const std::int64_t count = (std::int64_t{1} << g) + 1;
    SweepSummary sum;
    sum.g = g;
    for (int i = 0; i < kSweepCasesPerOrder; ++i) {
      const GradientSpec spec = random_spec(gen, count, kSweepAccuracy);
      const Synthesis s = synthesize(spec, policy);
      if (s.waste_ldt != 0 || s.mixes_gradient != predicted_mixes(g)) sum.gradient_exact = false;
      sum.mean_m += static_cast<double>(s.mixes_total());
      sum.mean_w += static_cast<double>(s.waste_total());
      ++sum.cases;
      result.report.rows.push_back(report_row("g" + std::to_string(g) + "-" + std::to_string(i), s));
    }
    sum.mean_m /= static_cast<double>(sum.cases);
    sum.mean_w /= static_cast<double>(sum.cases);
    result.summary.push_back(sum);
  }
  return result;
}

}  // namespace lindil
