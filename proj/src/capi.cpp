#include "lindil/lindil.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "lindil/pipeline.hpp"
#include "lindil/serialize.hpp"
#include "lindil/verify.hpp"

struct lindil_synthesis {
  lindil::Synthesis value;
};

struct lindil_simulation {
  lindil::Simulation value;
};

namespace {

thread_local std::string last_error;

lindil_status code_for(lindil::ErrorKind kind) {
  using lindil::ErrorKind;
  switch (kind) {
    case ErrorKind::Domain: return LINDIL_E_DOMAIN;
    case ErrorKind::InfeasibleEmbedding: return LINDIL_E_INFEASIBLE_EMBEDDING;
    case ErrorKind::MissingDroplet: return LINDIL_E_MISSING_DROPLET;
    case ErrorKind::SupplyExhausted: return LINDIL_E_SUPPLY_EXHAUSTED;
    case ErrorKind::InvariantViolation: return LINDIL_E_INVARIANT;
    case ErrorKind::Parse: return LINDIL_E_PARSE;
  }
  return LINDIL_E_INTERNAL;
}

lindil_status fail(lindil_status code, const std::string& message) {
  last_error = message;
  return code;
}

template <class F>
lindil_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return LINDIL_OK;
  } catch (const lindil::Error& e) {
    return fail(code_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LINDIL_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LINDIL_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

lindil::Policy to_policy(const lindil_policy* p) {
  lindil::Policy policy;
  if (!p) return policy;
  policy.surplus = p->surplus_as_waste ? lindil::SurplusHandling::AsWaste : lindil::SurplusHandling::AsOutput;
  policy.boundary_source = p->direct_stock ? lindil::BoundarySource::DirectStock : lindil::BoundarySource::Engines;
  return policy;
}

}  // namespace

extern "C" {

const char* lindil_last_error(void) { return last_error.c_str(); }

const char* lindil_status_name(lindil_status status) {
  switch (status) {
    case LINDIL_OK: return "ok";
    case LINDIL_E_DOMAIN: return "domain";
    case LINDIL_E_INFEASIBLE_EMBEDDING: return "infeasible_embedding";
    case LINDIL_E_MISSING_DROPLET: return "missing_droplet";
    case LINDIL_E_SUPPLY_EXHAUSTED: return "supply_exhausted";
    case LINDIL_E_INVARIANT: return "invariant_violation";
    case LINDIL_E_PARSE: return "parse";
    case LINDIL_E_ARGUMENT: return "argument";
    case LINDIL_E_INTERNAL: return "internal";
  }
  return "unknown";
}

void lindil_string_free(char* s) { std::free(s); }

lindil_status lindil_predicted_mixes(int g, int64_t* out) {
  if (!out) return fail(LINDIL_E_ARGUMENT, "out is null");
  return guarded([&] { *out = lindil::predicted_mixes(g); });
}

lindil_status lindil_predicted_waste(int64_t count, int64_t* out) {
  if (!out) return fail(LINDIL_E_ARGUMENT, "out is null");
  return guarded([&] { *out = lindil::predicted_waste(count); });
}

lindil_status lindil_boundary_demand(int g, int64_t* out) {
  if (!out) return fail(LINDIL_E_ARGUMENT, "out is null");
  return guarded([&] { *out = lindil::boundary_demand(g); });
}

lindil_status lindil_copies_at_depth(int g, int depth, int64_t* out) {
  if (!out) return fail(LINDIL_E_ARGUMENT, "out is null");
  return guarded([&] { *out = lindil::copies_at_depth(g, depth); });
}

lindil_status lindil_synthesize(const lindil_gradient* spec, uint32_t accuracy, const lindil_policy* policy,
                                lindil_synthesis** out) {
  if (!spec || !out) return fail(LINDIL_E_ARGUMENT, "spec and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    const lindil::GradientSpec g{spec->a, spec->d, spec->n, spec->count};
    auto s = std::make_unique<lindil_synthesis>();
    s->value = lindil::synthesize(g, accuracy == 0 ? spec->n : accuracy, to_policy(policy));
    *out = s.release();
  });
}

void lindil_synthesis_free(lindil_synthesis* s) { delete s; }

lindil_status lindil_synthesis_summary(const lindil_synthesis* s, lindil_summary* out) {
  if (!s || !out) return fail(LINDIL_E_ARGUMENT, "synthesis and out must be non-null");
  const auto& v = s->value;
  out->order_g = v.gradient.order_g;
  out->embedded = v.gradient.embedded ? 1 : 0;
  out->m_total = v.mixes_total();
  out->m_gradient = v.mixes_gradient;
  out->m_engines = v.mixes_engines;
  out->w_total = v.waste_total();
  out->w_ldt = v.waste_ldt;
  out->w_engines = v.waste_engines;
  out->peak_storage = v.peak_storage;
  out->storage_bound = v.storage_bound;
  return LINDIL_OK;
}

lindil_status lindil_synthesis_json(const lindil_synthesis* s, char** out) {
  if (!s || !out) return fail(LINDIL_E_ARGUMENT, "synthesis and out must be non-null");
  return guarded([&] { *out = dup(lindil::to_json(s->value) + "\n"); });
}

lindil_status lindil_simulate_json(const char* plan_json, lindil_simulation** out) {
  if (!plan_json || !out) return fail(LINDIL_E_ARGUMENT, "plan_json and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    auto sim = std::make_unique<lindil_simulation>();
    sim->value = lindil::simulate(lindil::parse_plan(plan_json));
    *out = sim.release();
  });
}

void lindil_simulation_free(lindil_simulation* sim) { delete sim; }

lindil_status lindil_simulation_totals(const lindil_simulation* sim, int64_t* mixes, int64_t* waste) {
  if (!sim) return fail(LINDIL_E_ARGUMENT, "simulation is null");
  if (mixes) *mixes = sim->value.mixes();
  if (waste) *waste = sim->value.waste();
  return LINDIL_OK;
}

lindil_status lindil_simulation_metrics_json(const lindil_simulation* sim, char** out) {
  if (!sim || !out) return fail(LINDIL_E_ARGUMENT, "simulation and out must be non-null");
  return guarded([&] { *out = dup(lindil::metrics_json(sim->value) + "\n"); });
}

lindil_status lindil_simulation_trace_csv(const lindil_simulation* sim, char** out) {
  if (!sim || !out) return fail(LINDIL_E_ARGUMENT, "simulation and out must be non-null");
  return guarded([&] { *out = dup(lindil::trace_csv(sim->value.trace)); });
}

lindil_status lindil_table_csv(const lindil_policy* policy, char** out) {
  if (!out) return fail(LINDIL_E_ARGUMENT, "out is null");
  return guarded([&] { *out = dup(lindil::run_table_experiment(to_policy(policy)).to_csv()); });
}

lindil_status lindil_sweep_csv(uint64_t seed, const lindil_policy* policy, char** csv, char** summary_csv,
                               int* gradient_exact) {
  if (!csv) return fail(LINDIL_E_ARGUMENT, "csv is null");
  return guarded([&] {
    const auto result = lindil::run_sweep(seed, to_policy(policy));
    bool exact = true;
    std::ostringstream sum;
    sum << "g,cases,mean_M,mean_W,gradient_exact\n";
    for (const auto& s : result.summary) {
      sum << s.g << ',' << s.cases << ',' << s.mean_m << ',' << s.mean_w << ',' << (s.gradient_exact ? 1 : 0)
          << '\n';
      exact = exact && s.gradient_exact;
    }
    char* body = dup(result.report.to_csv());
    if (summary_csv) {
      try {
        *summary_csv = dup(sum.str());
      } catch (...) {
        std::free(body);
        throw;
      }
    }
    *csv = body;
    if (gradient_exact) *gradient_exact = exact ? 1 : 0;
  });
}

lindil_status lindil_verify(int g_min, int g_max, int pruned_g_max, char** report, int* all_passed) {
  if (!report) return fail(LINDIL_E_ARGUMENT, "report is null");
  if (g_min < 1 || g_max > 20 || g_min > g_max || pruned_g_max > 12) {
    return fail(LINDIL_E_DOMAIN, "verify range outside 1 <= g_min <= g_max <= 20, pruned <= 12");
  }
  return guarded([&] {
    const auto results = lindil::run_invariant_suite({g_min, g_max, pruned_g_max});
    std::ostringstream out;
    bool ok = true;
    for (const auto& r : results) {
      out << (r.passed() ? "PASS " : "FAIL ") << r.name << " cases=" << r.cases << " failures=" << r.failures;
      if (!r.passed()) out << " first: " << r.first_failure;
      out << '\n';
      ok = ok && r.passed();
    }
    *report = dup(out.str());
    if (all_passed) *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"
