// lindil: plan, replay and verify linear dilution gradients.
//
// Exit status: 0 success, 1 validation failure, 2 invariant violation,
// 3 infeasible embedding.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "lindil/lindil.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitInfeasible = 3;

struct Failure {
  int exit_code;
  std::string code;
  std::string message;
};

int exit_for(lindil_status s) {
  switch (s) {
    case LINDIL_OK: return kExitOk;
    case LINDIL_E_INFEASIBLE_EMBEDDING: return kExitInfeasible;
    case LINDIL_E_MISSING_DROPLET:
    case LINDIL_E_SUPPLY_EXHAUSTED:
    case LINDIL_E_INVARIANT:
    case LINDIL_E_INTERNAL: return kExitInvariant;
    default: return kExitValidation;
  }
}

void check(lindil_status s) {
  if (s != LINDIL_OK) throw Failure{exit_for(s), lindil_status_name(s), lindil_last_error()};
}

struct CString {
  char* p = nullptr;
  ~CString() { lindil_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("LINDIL_OUTPUT_DIR"); dir && *dir) return std::filesystem::path(dir) / p;
  }
  return p;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  const auto path = resolve_out(out);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{kExitValidation, "io", "cannot write " + path.string()};
  f << text;
  if (!f) throw Failure{kExitValidation, "io", "write failed for " + path.string()};
}

lindil_policy policy_from(const std::string& surplus, const std::string& boundaries) {
  return {surplus == "surplus-as-waste" ? 1 : 0, boundaries == "direct-stock" ? 1 : 0};
}

void add_policy(CLI::App* cmd, std::string& surplus, std::string& boundaries) {
  cmd->add_option("--policy", surplus, "Surplus engine droplets")
      ->check(CLI::IsMember({"surplus-as-output", "surplus-as-waste"}))
      ->capture_default_str();
  cmd->add_option("--boundaries", boundaries, "Boundary droplet source")
      ->check(CLI::IsMember({"engines", "direct-stock"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan, replay and verify linear dilution gradients"};
  app.require_subcommand(1);

  std::string surplus = "surplus-as-output";
  std::string boundaries = "engines";
  std::string out;
  std::string format;

  std::int64_t a = 0, d = 0, count = 0;
  unsigned n = 0, accuracy = 0;
  auto* plan = app.add_subcommand("plan", "Synthesize a gradient plan (JSON)");
  plan->add_option("--n", n, "Scale: targets are x/2^n")->required()->check(CLI::Range(1, 62));
  plan->add_option("--a", a, "Start numerator")->required()->check(CLI::NonNegativeNumber);
  plan->add_option("--d", d, "Step numerator")->required()->check(CLI::PositiveNumber);
  plan->add_option("--count", count, "Number of targets")->required();
  plan->add_option("--accuracy", accuracy, "Engine accuracy in bits (default n)")->check(CLI::Range(1, 62));
  plan->add_option("--out", out, "Output file (relative paths use LINDIL_OUTPUT_DIR)");
  plan->add_option("--format", format, "Output format")->check(CLI::IsMember({"json"}));
  add_policy(plan, surplus, boundaries);

  std::string plan_file;
  auto* simulate = app.add_subcommand("simulate", "Replay a plan file");
  simulate->add_option("--plan", plan_file, "Plan JSON file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--format", format, "json: metrics, csv: step trace")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--out", out, "Output file (relative paths use LINDIL_OUTPUT_DIR)");

  int g_min = 1, g_max = 8, pruned_g_max = 6;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--g-min", g_min, "Smallest full order")->check(CLI::Range(1, 20))->capture_default_str();
  verify->add_option("--g-max", g_max, "Largest full order")->check(CLI::Range(1, 20))->capture_default_str();
  verify->add_option("--pruned-g-max", pruned_g_max, "Largest order for non-power sizes")
      ->check(CLI::Range(0, 12))
      ->capture_default_str();

  auto* table = app.add_subcommand("table", "Benchmark target sets against published totals");
  table->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));
  table->add_option("--out", out, "Output file (relative paths use LINDIL_OUTPUT_DIR)");
  add_policy(table, surplus, boundaries);

  std::uint64_t seed = 0;
  auto* sweep = app.add_subcommand("sweep", "Seeded random sweep, g = 2..7, 100 sets each");
  sweep->add_option("--seed", seed, "Generator seed")->required();
  sweep->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));
  sweep->add_option("--out", out, "Output file (relative paths use LINDIL_OUTPUT_DIR)");
  add_policy(sweep, surplus, boundaries);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& c : msg) c = c == '\n' ? ' ' : c;
    std::cerr << "error: usage: " << msg << '\n';
    return kExitValidation;
  }

  try {
    const lindil_policy policy = policy_from(surplus, boundaries);
    if (*plan) {
      const lindil_gradient spec{a, d, n, count};
      lindil_synthesis* s = nullptr;
      check(lindil_synthesize(&spec, accuracy, &policy, &s));
      std::unique_ptr<lindil_synthesis, decltype(&lindil_synthesis_free)> owner(s, lindil_synthesis_free);
      CString json;
      check(lindil_synthesis_json(s, &json.p));
      emit(json.str(), out);
      lindil_summary sum{};
      check(lindil_synthesis_summary(s, &sum));
      if (sum.peak_storage > sum.storage_bound) {
        throw Failure{kExitInvariant, "invariant_violation",
                      "peak storage " + std::to_string(sum.peak_storage) + " exceeds " +
                          std::to_string(sum.storage_bound)};
      }
    } else if (*simulate) {
      std::ifstream f(plan_file, std::ios::binary);
      std::stringstream buf;
      buf << f.rdbuf();
      lindil_simulation* sim = nullptr;
      check(lindil_simulate_json(buf.str().c_str(), &sim));
      std::unique_ptr<lindil_simulation, decltype(&lindil_simulation_free)> owner(sim, lindil_simulation_free);
      CString text;
      if (format == "csv") {
        check(lindil_simulation_trace_csv(sim, &text.p));
      } else {
        check(lindil_simulation_metrics_json(sim, &text.p));
      }
      emit(text.str(), out);
    } else if (*verify) {
      CString report;
      int ok = 0;
      check(lindil_verify(g_min, g_max, pruned_g_max, &report.p, &ok));
      std::cout << report.str();
      if (!ok) {
        std::cerr << "error: invariant_violation: verify found failing checks\n";
        return kExitInvariant;
      }
    } else if (*table) {
      CString csv;
      check(lindil_table_csv(&policy, &csv.p));
      emit(csv.str(), out);
    } else if (*sweep) {
      CString csv, summary;
      int exact = 0;
      check(lindil_sweep_csv(seed, &policy, &csv.p, &summary.p, &exact));
      emit(csv.str(), out);
      std::cerr << summary.str();
      if (!exact) {
        std::cerr << "error: invariant_violation: gradient part not exact in some sweep case\n";
        return kExitInvariant;
      }
    }
  } catch (const Failure& f) {
    std::string msg = f.message;
    for (auto& c : msg) c = c == '\n' ? ' ' : c;
    std::cerr << "error: " << f.code << ": " << msg << '\n';
    return f.exit_code;
  }
  return kExitOk;
}
