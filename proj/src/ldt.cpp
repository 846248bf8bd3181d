#include "lindil/ldt.hpp"

#include <numeric>
#include <string>

namespace lindil {

namespace {

std::unique_ptr<LdtNode> build_range(std::span<const std::int64_t> items, std::int64_t lo,
                                     std::int64_t hi, int depth) {
  if (items.empty()) return nullptr;
  const std::size_t mid = items.size() / 2;
  auto node = std::make_unique<LdtNode>();
  node->index = items[mid];
  node->lo_index = lo;
  node->hi_index = hi;
  node->depth = depth;
  node->left = build_range(items.first(mid), lo, node->index, depth + 1);
  node->right = build_range(items.subspan(mid + 1), node->index, hi, depth + 1);
  return node;
}

void post_order_into(const LdtNode& n, std::vector<std::int64_t>& out) {
  if (n.left) post_order_into(*n.left, out);
  if (n.right) post_order_into(*n.right, out);
  out.push_back(n.index);
}

// Emits the demand-driven schedule over the LDT of order `order`, producing
// targets 1..requested_top. Boundaries are lattice points 0 and 2^order.
class ScheduleBuilder {
 public:
  ScheduleBuilder(const GradientSpec& spec, int order, std::int64_t requested_top)
      : spec_(spec), top_(std::int64_t{1} << order), requested_top_(requested_top) {
    std::vector<std::int64_t> interior(static_cast<std::size_t>(top_ - 1));
    std::iota(interior.begin(), interior.end(), std::int64_t{1});
    root_ = build_ldt(interior);
    nodes_.assign(static_cast<std::size_t>(top_ + 1), nullptr);
    index_nodes(*root_);
    spare_.assign(static_cast<std::size_t>(top_ + 1), 0);
  }

  std::vector<PlanOp> run() {
    process(*root_, false);
    // Leftover unreserved droplets: requested CFs leave as extra outputs,
    // everything else is waste.
    for (std::int64_t i = 1; i < top_; ++i) {
      for (int k = 0; k < spare_[static_cast<std::size_t>(i)]; ++k) {
        if (requested(i)) {
          ops_.push_back(op::Output{spec_.at(i), i});
        } else {
          ops_.push_back(op::Discard{spec_.at(i)});
        }
      }
    }
    return std::move(ops_);
  }

 private:
  bool requested(std::int64_t i) const { return i >= 1 && i <= requested_top_; }
  bool boundary(std::int64_t i) const { return i == 0 || i == top_; }
  bool complete(const LdtNode& n) const { return n.hi_index - 1 <= requested_top_; }

  void index_nodes(const LdtNode& n) {
    nodes_[static_cast<std::size_t>(n.index)] = &n;
    if (n.left) index_nodes(*n.left);
    if (n.right) index_nodes(*n.right);
  }

  // Makes one droplet of lattice point i available to the next mix. Boundary
  // dispenses are deferred until the consuming mix so they never wait.
  void ensure(std::int64_t i, std::vector<PlanOp>& deferred) {
    if (boundary(i)) {
      const Side side = i == 0 ? Side::Left : Side::Right;
      deferred.push_back(op::DispenseBoundary{side, spec_.at(i)});
      return;
    }
    int& spare = spare_[static_cast<std::size_t>(i)];
    if (spare > 0) {
      --spare;
      return;
    }
    produce(*nodes_[static_cast<std::size_t>(i)], false);
    ++spare;  // the second droplet of the pair
  }

  void produce(const LdtNode& n, bool reserve_one) {
    std::vector<PlanOp> deferred;
    ensure(n.lo_index, deferred);
    ensure(n.hi_index, deferred);
    for (auto& d : deferred) ops_.push_back(std::move(d));
    op::Mix m{spec_.at(n.lo_index), spec_.at(n.hi_index), spec_.at(n.index),
              std::array{n.lo_index, n.hi_index, n.index}, false, reserve_one};
    ops_.push_back(std::move(m));
  }

  void regenerate(const LdtNode& n, bool reserve_one) {
    const auto a = n.left->index;
    const auto b = n.right->index;
    ops_.push_back(op::Mix{spec_.at(a), spec_.at(b), spec_.at(n.index), std::array{a, b, n.index},
                           true, reserve_one});
  }

  void output(std::int64_t i) { ops_.push_back(op::Output{spec_.at(i), i}); }

  // Post-order visit. When the parent will regenerate from this node, one
  // droplet is reserved for it; otherwise both droplets are output.
  void process(const LdtNode& n, bool reserve_for_parent) {
    if (!requested(n.index)) {
      if (n.left && n.lo_index + 1 <= requested_top_) process(*n.left, false);
      return;
    }
    if (complete(n)) {
      if (n.is_leaf()) {
        produce(n, reserve_for_parent);
      } else {
        process(*n.left, true);
        process(*n.right, true);
        regenerate(n, reserve_for_parent);
      }
      output(n.index);
      if (!reserve_for_parent) output(n.index);
      return;
    }
    // Partial node: its range reaches past the requested targets, so it
    // cannot be regenerated from both children.
    if (n.left) process(*n.left, false);
    if (n.right && n.index + 1 <= requested_top_) process(*n.right, false);
    std::vector<PlanOp> deferred;
    ensure(n.index, deferred);
    for (auto& d : deferred) ops_.push_back(std::move(d));
    output(n.index);
  }

  const GradientSpec& spec_;
  std::int64_t top_;
  std::int64_t requested_top_;
  std::unique_ptr<LdtNode> root_;
  std::vector<const LdtNode*> nodes_;
  std::vector<int> spare_;
  std::vector<PlanOp> ops_;
};

}  // namespace

std::unique_ptr<LdtNode> build_ldt(std::span<const std::int64_t> indices) {
  const auto len = static_cast<std::uint64_t>(indices.size());
  if (len == 0 || !is_power_of_two(len + 1)) {
    throw DomainError("LDT needs 2^g - 1 indices, got " + std::to_string(len));
  }
  for (std::size_t i = 1; i < indices.size(); ++i) {
    if (indices[i] != indices[i - 1] + 1) {
      throw DomainError("LDT indices must be consecutive and increasing");
    }
  }
  return build_range(indices, indices.front() - 1, indices.back() + 1, 0);
}

std::vector<std::int64_t> post_order(const LdtNode& root) {
  std::vector<std::int64_t> out;
  post_order_into(root, out);
  return out;
}

std::size_t node_count(const LdtNode& root) {
  return 1 + (root.left ? node_count(*root.left) : 0) + (root.right ? node_count(*root.right) : 0);
}

int tree_height(const LdtNode& root) {
  int h = 0;
  if (root.left) h = std::max(h, 1 + tree_height(*root.left));
  if (root.right) h = std::max(h, 1 + tree_height(*root.right));
  return h;
}

std::string_view to_string(Side side) { return side == Side::Left ? "left" : "right"; }
std::string_view to_string(Stock stock) { return stock == Stock::Sample ? "sample" : "buffer"; }

std::string_view op_name(const PlanOp& op) {
  struct Visitor {
    std::string_view operator()(const op::DispenseBoundary&) const { return "dispense_boundary"; }
    std::string_view operator()(const op::DispenseStock&) const { return "dispense_stock"; }
    std::string_view operator()(const op::Mix&) const { return "mix"; }
    std::string_view operator()(const op::Output&) const { return "output"; }
    std::string_view operator()(const op::Discard&) const { return "discard"; }
  };
  return std::visit(Visitor{}, op);
}

std::size_t MixPlan::mix_count() const {
  std::size_t n = 0;
  for (const auto& o : ops) n += std::holds_alternative<op::Mix>(o);
  return n;
}

std::optional<int> full_order(std::int64_t count) {
  if (count < 3) return std::nullopt;
  const auto span = static_cast<std::uint64_t>(count - 1);
  if (!is_power_of_two(span)) return std::nullopt;
  return trailing_zeros(span);
}

int execution_order(std::int64_t count) {
  if (count < 3) throw DomainError("gradient needs at least 3 points");
  if (auto g = full_order(count)) return *g;
  return bit_length(static_cast<std::uint64_t>(count - 1));
}

MixPlan plan_full(const GradientSpec& spec) {
  spec.validate();
  const auto g = full_order(spec.count);
  if (!g) {
    throw DomainError("plan_full needs S = 2^g + 1 points (S=" + std::to_string(spec.count) +
                      "); use plan_arbitrary");
  }
  MixPlan plan{spec, *g, false, {}};
  const std::int64_t top = std::int64_t{1} << *g;
  plan.ops = ScheduleBuilder(spec, *g, top - 1).run();
  return plan;
}

MixPlan plan_arbitrary(const GradientSpec& spec) {
  spec.validate();
  if (full_order(spec.count)) return plan_full(spec);
  const int order = execution_order(spec.count);
  const std::int64_t top = std::int64_t{1} << order;
  __extension__ using u128 = unsigned __int128;
  const auto right = static_cast<u128>(spec.start) + static_cast<u128>(top) * static_cast<u128>(spec.step);
  if (right > (static_cast<u128>(1) << spec.scale)) {
    throw InfeasibleEmbedding("embedded right boundary (a + " + std::to_string(top) +
                              "d)/2^n exceeds 1 for S=" + std::to_string(spec.count));
  }
  MixPlan plan{spec, order, true, {}};
  plan.ops = ScheduleBuilder(spec, order, spec.count - 1).run();
  return plan;
}

std::vector<std::int64_t> output_order(const MixPlan& plan) {
  std::vector<std::int64_t> out;
  const std::int64_t top = plan.lattice_top();
  for (const auto& o : plan.ops) {
    if (const auto* x = std::get_if<op::Output>(&o)) {
      if (x->target_index > 0 && x->target_index < top) out.push_back(x->target_index);
    }
  }
  return out;
}

std::int64_t predicted_mixes(int g) {
  if (g < 1 || g > 60) throw DomainError("order g must lie in [1, 60]");
  // 2^(g-2) (g+3) - 1, kept integral for g = 1.
  return ((static_cast<std::int64_t>(g) + 3) << g) / 4 - 1;
}

std::int64_t predicted_waste(std::int64_t count) {
  if (count < 3) throw DomainError("gradient needs at least 3 points");
  if (full_order(count)) return 0;
  const auto last = static_cast<std::uint64_t>(count - 1);
  return zc(bin_repr(last, static_cast<unsigned>(bit_length(last) + 1)));
}

std::int64_t copies_at_depth(int g, int depth) {
  if (g < 1 || g > 60 || depth < 0 || depth > g - 1) throw DomainError("depth outside 0..g-1");
  if (depth == g - 1) return 2;
  return (std::int64_t{1} << (g - 1 - depth)) + 2;
}

std::int64_t boundary_demand(int g) {
  if (g < 1 || g > 60) throw DomainError("order g must lie in [1, 60]");
  return std::int64_t{1} << (g - 1);
}

}  // namespace lindil
