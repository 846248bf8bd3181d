#include "lindil/executor.hpp"

#include <sstream>

namespace lindil {

namespace {

struct Droplets {
  std::int64_t free = 0;
  std::int64_t reserved = 0;
};

struct Held {
  CF cf;
  bool reserved = false;
};

class Replayer {
 public:
  explicit Replayer(const Supplies& supplies) : supplies_(supplies) {}

  std::size_t index() const { return index_; }

  Execution run(std::span<const PlanOp> ops) {
    for (index_ = 0; index_ < ops.size(); ++index_) {
      TraceRow row;
      row.step = static_cast<std::int64_t>(index_ + 1);
      row.op = std::string(op_name(ops[index_]));
      std::visit([&](const auto& o) { apply(o, row); }, ops[index_]);
      check_conservation();
      const std::int64_t stored = stored_count();
      m_.peak_storage = std::max(m_.peak_storage, stored);
      row.stored_after = stored;
      row.waste_after = m_.waste;
      trace_.push_back(std::move(row));
    }
    m_.undisposed = inventory_count();
    m_.waste += m_.undisposed;
    return {std::move(m_), std::move(trace_)};
  }

 private:
  [[noreturn]] void missing(const CF& cf, std::string_view what) const {
    throw MissingDroplet("op " + std::to_string(index_ + 1) + ": no " + std::string(what) +
                         " droplet of " + cf.to_string());
  }

  void draw(const std::optional<std::int64_t>& limit, std::int64_t& used, std::string_view name) {
    if (limit && used >= *limit) {
      throw SupplyExhausted("op " + std::to_string(index_ + 1) + ": " + std::string(name) +
                            " supply exhausted after " + std::to_string(used));
    }
    ++used;
    ++m_.dispensed;
  }

  void apply(const op::DispenseBoundary& o, TraceRow& row) {
    if (o.side == Side::Left) {
      draw(supplies_.boundary_left, m_.boundary_left, "left boundary");
    } else {
      draw(supplies_.boundary_right, m_.boundary_right, "right boundary");
    }
    ++pending_[o.cf];
    row.out = o.cf.to_string();
  }

  void apply(const op::DispenseStock& o, TraceRow& row) {
    if (o.kind == Stock::Sample) {
      draw(supplies_.sample, m_.sample, "sample");
    } else {
      draw(supplies_.buffer, m_.buffer, "buffer");
    }
    ++pending_[o.cf];
    row.out = o.cf.to_string();
  }

  // Takes one droplet for a mix: the module's own pair first, then a waiting
  // dispensed droplet, then storage.
  void take_for_mix(const CF& cf, bool reserved) {
    for (auto it = module_.begin(); it != module_.end(); ++it) {
      if (it->cf == cf && it->reserved == reserved) {
        module_.erase(it);
        return;
      }
    }
    if (!reserved) {
      if (auto it = pending_.find(cf); it != pending_.end() && it->second > 0) {
        --it->second;
        return;
      }
    }
    auto it = storage_.find(cf);
    std::int64_t* slot = nullptr;
    if (it != storage_.end()) slot = reserved ? &it->second.reserved : &it->second.free;
    if (!slot || *slot == 0) missing(cf, reserved ? "reserved" : "available");
    --*slot;
  }

  void take_unreserved(const CF& cf) {
    for (auto it = module_.begin(); it != module_.end(); ++it) {
      if (it->cf == cf && !it->reserved) {
        module_.erase(it);
        return;
      }
    }
    if (auto it = pending_.find(cf); it != pending_.end() && it->second > 0) {
      --it->second;
      return;
    }
    auto it = storage_.find(cf);
    if (it == storage_.end() || it->second.free == 0) missing(cf, "available");
    --it->second.free;
  }

  void apply(const op::Mix& o, TraceRow& row) {
    const CF expect = mix_cf(o.in_a, o.in_b);
    if (!(expect == o.out)) {
      throw InvariantViolation("op " + std::to_string(index_ + 1) + ": mix of " + o.in_a.to_string() +
                               " and " + o.in_b.to_string() + " is " + expect.to_string() + ", not " +
                               o.out.to_string());
    }
    if (o.indices) {
      const auto [a, b, out] = *o.indices;
      if ((a + b) % 2 != 0 || (a + b) / 2 != out) {
        throw InvariantViolation("op " + std::to_string(index_ + 1) + ": lattice indices are not a median");
      }
    }
    take_for_mix(o.in_a, o.regeneration);
    take_for_mix(o.in_b, o.regeneration);
    for (const Held& h : module_) {
      auto& d = storage_[h.cf];
      (h.reserved ? d.reserved : d.free) += 1;
    }
    module_.clear();
    for (auto& [cf, n] : pending_) storage_[cf].free += n;
    pending_.clear();
    module_.push_back({o.out, o.reserve_one});
    module_.push_back({o.out, false});
    ++m_.mixes;
    m_.produced[o.out] += 2;
    row.in_a = o.in_a.to_string();
    row.in_b = o.in_b.to_string();
    row.out = o.out.to_string();
  }

  void apply(const op::Output& o, TraceRow& row) {
    take_unreserved(o.cf);
    ++m_.output_count;
    ++m_.outputs[o.cf];
    m_.output_targets.push_back(o.target_index);
    row.out = o.cf.to_string();
  }

  void apply(const op::Discard& o, TraceRow& row) {
    take_unreserved(o.cf);
    ++m_.waste;
    row.out = o.cf.to_string();
  }

  std::int64_t stored_count() const {
    std::int64_t n = 0;
    for (const auto& [cf, d] : storage_) n += d.free + d.reserved;
    return n;
  }

  std::int64_t inventory_count() const {
    std::int64_t n = stored_count() + static_cast<std::int64_t>(module_.size());
    for (const auto& [cf, c] : pending_) n += c;
    return n;
  }

  // 1:1 mixing preserves droplet count, so everything dispensed is either
  // still on chip, output, or discarded.
  void check_conservation() const {
    const std::int64_t accounted = m_.output_count + m_.waste + inventory_count();
    if (accounted != m_.dispensed) {
      throw InvariantViolation("op " + std::to_string(index_ + 1) + ": conservation broken (dispensed " +
                               std::to_string(m_.dispensed) + ", accounted " +
                               std::to_string(accounted) + ")");
    }
  }

  Supplies supplies_;
  std::size_t index_ = 0;
  Metrics m_;
  std::vector<TraceRow> trace_;
  std::map<CF, Droplets> storage_;
  std::map<CF, std::int64_t> pending_;
  std::vector<Held> module_;
};

}  // namespace

Execution execute(std::span<const PlanOp> ops, const Supplies& supplies) {
  return Replayer(supplies).run(ops);
}

Execution execute(const MixPlan& plan, const Supplies& supplies) { return execute(plan.ops, supplies); }

Execution execute(const EnginePlan& plan, const Supplies& supplies) {
  return execute(plan.ops, supplies);
}

std::optional<ValidationFailure> validate(std::span<const PlanOp> ops) {
  Replayer r(Supplies::unlimited());
  try {
    r.run(ops);
  } catch (const Error& e) {
    return ValidationFailure{r.index(), e.what()};
  }
  return std::nullopt;
}

std::optional<ValidationFailure> validate(const MixPlan& plan) { return validate(plan.ops); }

std::string trace_csv(std::span<const TraceRow> trace) {
  std::ostringstream out;
  out << "step,op,inA,inB,out,stored_after,waste_after\n";
  for (const auto& r : trace) {
    out << r.step << ',' << r.op << ',' << r.in_a << ',' << r.in_b << ',' << r.out << ','
        << r.stored_after << ',' << r.waste_after << '\n';
  }
  return out.str();
}

}  // namespace lindil
