#include "lindil/verify.hpp"

#include <functional>
#include <numeric>
#include <sstream>

#include "lindil/engine.hpp"
#include "lindil/executor.hpp"
#include "lindil/ldt.hpp"

namespace lindil {

namespace {

class Check {
 public:
  explicit Check(std::string name) { r_.name = std::move(name); }

  void expect(bool ok, const std::function<std::string()>& detail) {
    ++r_.cases;
    if (ok) return;
    if (r_.failures++ == 0) r_.first_failure = detail();
  }

  // Runs body; an exception counts as one failed case.
  void guard(const std::string& where, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      expect(false, [&] { return where + ": " + e.what(); });
    }
  }

  CheckResult result() const { return r_; }

 private:
  CheckResult r_;
};

GradientSpec unit_spec(std::int64_t count) {
  const int order = execution_order(count);
  return {0, 1, static_cast<unsigned>(order), count};
}

template <class... Args>
std::string str(const Args&... args) {
  std::ostringstream out;
  (out << ... << args);
  return out.str();
}

void collect_depths(const LdtNode& n, std::vector<std::pair<std::int64_t, int>>& out) {
  out.emplace_back(n.index, n.depth);
  if (n.left) collect_depths(*n.left, out);
  if (n.right) collect_depths(*n.right, out);
}

// Median property and lattice membership for every mix of a plan.
bool lattice_ok(const MixPlan& plan, std::string& why) {
  const std::int64_t top = plan.lattice_top();
  for (const auto& o : plan.ops) {
    const auto* m = std::get_if<op::Mix>(&o);
    if (!m) continue;
    if (!m->indices) {
      why = "mix without lattice indices";
      return false;
    }
    const auto [a, b, out] = *m->indices;
    if ((a + b) % 2 != 0 || (a + b) / 2 != out) {
      why = str("indices ", a, "+", b, " -> ", out);
      return false;
    }
    for (auto i : {a, b, out}) {
      if (i < 0 || i > top || !(plan.gradient.at(i) == (i == a ? m->in_a : i == b ? m->in_b : m->out))) {
        why = str("CF off lattice at index ", i);
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const VerifyRange& range) {
  Check t1("mix_count_zero_waste");
  Check l1("copies_per_depth");
  Check l2("boundary_demand_exhaustion");
  Check t2("peak_storage_bound");
  Check order("output_order_post_order");
  Check lattice("median_and_lattice_membership");
  Check t3("pruned_waste_zc");
  Check valid("plans_validate");
  Check engine("engine_capacity_and_stack_bound");

  for (int g = range.g_min; g <= range.g_max; ++g) {
    const GradientSpec spec = unit_spec((std::int64_t{1} << g) + 1);
    const std::string where = str("g=", g);
    t1.guard(where, [&] {
      const MixPlan plan = plan_full(spec);
      const auto failure = validate(plan);
      valid.expect(!failure, [&] { return str(where, ": op ", failure->op_index, ": ", failure->message); });

      const std::int64_t demand = boundary_demand(g);
      const Metrics m = execute(plan, Supplies::boundaries(demand, demand)).metrics;
      t1.expect(m.mixes == predicted_mixes(g) && m.waste == 0, [&] {
        return str(where, ": mixes ", m.mixes, " (expected ", predicted_mixes(g), "), waste ", m.waste);
      });

      l2.expect(m.boundary_left == demand && m.boundary_right == demand, [&] {
        return str(where, ": boundary use ", m.boundary_left, "/", m.boundary_right, " expected ", demand);
      });
      for (const auto& limits : {Supplies::boundaries(demand - 1, demand), Supplies::boundaries(demand, demand - 1)}) {
        bool exhausted = false;
        try {
          execute(plan, limits);
        } catch (const SupplyExhausted&) {
          exhausted = true;
        }
        l2.expect(exhausted, [&] { return str(where, ": plan ran with one boundary droplet fewer"); });
      }

      std::vector<std::pair<std::int64_t, int>> depths;
      std::vector<std::int64_t> interior(static_cast<std::size_t>((std::int64_t{1} << g) - 1));
      std::iota(interior.begin(), interior.end(), std::int64_t{1});
      const auto root = build_ldt(interior);
      collect_depths(*root, depths);
      for (const auto& [idx, depth] : depths) {
        const auto it = m.produced.find(spec.at(idx));
        const std::int64_t got = it == m.produced.end() ? 0 : it->second;
        l1.expect(got == copies_at_depth(g, depth), [&] {
          return str(where, " node ", idx, " depth ", depth, ": produced ", got, " expected ",
                     copies_at_depth(g, depth));
        });
      }

      const std::int64_t bound = 2 * (g - 1);
      t2.expect(m.peak_storage <= bound, [&] {
        return str(where, ": peak storage ", m.peak_storage, " > ", bound);
      });

      std::vector<std::int64_t> expect = post_order(*root);
      expect.push_back(expect.back());
      const auto got = output_order(plan);
      order.expect(got == expect, [&] { return str(where, ": output order differs from post-order"); });

      std::string why;
      lattice.expect(lattice_ok(plan, why), [&] { return str(where, ": ", why); });
    });
  }

  for (int g = std::max(1, range.g_min); g <= range.pruned_g_max; ++g) {
    for (std::int64_t count = (std::int64_t{1} << g) + 2; count < (std::int64_t{2} << g) + 1; ++count) {
      const std::string where = str("S=", count);
      t3.guard(where, [&] {
        const MixPlan plan = plan_arbitrary(unit_spec(count));
        const auto failure = validate(plan);
        valid.expect(!failure, [&] { return str(where, ": op ", failure->op_index, ": ", failure->message); });
        const Metrics m = execute(plan).metrics;
        t3.expect(m.waste == predicted_waste(count), [&] {
          return str(where, ": waste ", m.waste, " expected ZC ", predicted_waste(count));
        });
        std::string why;
        lattice.expect(lattice_ok(plan, why), [&] { return str(where, ": ", why); });
      });
    }
  }

  engine.guard("176/256", [&] {
    const EnginePlan p = engine_plan(make_cf(176, 8), 16, 8);
    const Metrics m = execute(p).metrics;
    engine.expect(p.produced == 16 && m.mixes == 15 && p.leftover_spares == 0 && p.peak_stack <= 7, [&] {
      return str("176/256 q=16: produced ", p.produced, ", mixes ", m.mixes, ", leftover ",
                 p.leftover_spares, ", stack ", p.peak_stack);
    });
  });
  for (unsigned n = 2; n <= 10; ++n) {
    for (std::uint64_t x = 1; x < (std::uint64_t{1} << n); x += 2) {
      const CF target = make_cf(x, n);
      const int m = bs_sequence(target).length;
      const std::int64_t cap = std::int64_t{1} << m;
      const EnginePlan p = engine_plan(target, cap, n);
      engine.expect(p.mixes == cap - 1 && p.peak_stack <= static_cast<int>(n) - 1 && p.leftover_spares == 0,
                    [&] { return str(target.to_string(), " q=", cap, ": mixes ", p.mixes); });
    }
  }

  return {t1.result(), l1.result(), l2.result(),    t2.result(),    order.result(),
          t3.result(), lattice.result(), valid.result(), engine.result()};
}

}  // namespace lindil
