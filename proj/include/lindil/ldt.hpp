#pragma once

// Linear dilution tree (LDT) and the mix-split plans built from it.
//
// Sizes use the gradient order g: a full gradient has S = 2^g + 1 points,
// indices 0..2^g, with the two ends supplied externally. The tree holds the
// 2^g - 1 interior indices; every node is the median of its range endpoints.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "lindil/concentration.hpp"

namespace lindil {

struct LdtNode {
  std::int64_t index = 0;
  std::int64_t lo_index = 0;
  std::int64_t hi_index = 0;
  int depth = 0;
  std::unique_ptr<LdtNode> left;
  std::unique_ptr<LdtNode> right;

  bool is_leaf() const { return !left && !right; }
};

/// Builds the complete BST over consecutive lattice indices (length 2^g - 1).
/// The root's range is (front - 1, back + 1).
std::unique_ptr<LdtNode> build_ldt(std::span<const std::int64_t> indices);

std::vector<std::int64_t> post_order(const LdtNode& root);
std::size_t node_count(const LdtNode& root);
int tree_height(const LdtNode& root);

enum class Side { Left, Right };
enum class Stock { Sample, Buffer };

std::string_view to_string(Side side);
std::string_view to_string(Stock stock);

namespace op {

struct DispenseBoundary {
  Side side = Side::Left;
  CF cf;
};

struct DispenseStock {
  Stock kind = Stock::Sample;
  CF cf;
};

/// (1:1) mix-split: one droplet of each input, two droplets of `out`.
/// Regeneration mixes draw reserved droplets; `reserve_one` tags one of the
/// two results for the parent's regeneration.
struct Mix {
  CF in_a;
  CF in_b;
  CF out;
  std::optional<std::array<std::int64_t, 3>> indices;  // lattice (a, b, out)
  bool regeneration = false;
  bool reserve_one = false;
};

struct Output {
  CF cf;
  std::int64_t target_index = -1;
};

struct Discard {
  CF cf;
};

}  // namespace op

using PlanOp = std::variant<op::DispenseBoundary, op::DispenseStock, op::Mix, op::Output, op::Discard>;

std::string_view op_name(const PlanOp& op);

struct MixPlan {
  GradientSpec gradient;
  int order_g = 0;        // order of the LDT actually executed
  bool embedded = false;  // true when pruned from a larger full gradient
  std::vector<PlanOp> ops;

  std::int64_t lattice_top() const { return std::int64_t{1} << order_g; }
  std::size_t mix_count() const;
};

/// Zero-waste plan for S = 2^g + 1. DomainError for other sizes.
MixPlan plan_full(const GradientSpec& spec);

/// Any S >= 3. Non-power sizes are embedded as the prefix of the next full
/// gradient and pruned to the demanded nodes. InfeasibleEmbedding when the
/// embedded right boundary exceeds 1.
MixPlan plan_arbitrary(const GradientSpec& spec);

/// Output target indices in execution order, excluding boundary outputs.
std::vector<std::int64_t> output_order(const MixPlan& plan);

/// Gradient order g with S = 2^g + 1, or nullopt.
std::optional<int> full_order(std::int64_t count);

/// Order of the LDT used for `count` points (embedding order for non-power sizes).
int execution_order(std::int64_t count);

// Closed forms. All exact integer arithmetic.
std::int64_t predicted_mixes(int g);
std::int64_t predicted_waste(std::int64_t count);
std::int64_t copies_at_depth(int g, int depth);
std::int64_t boundary_demand(int g);

}  // namespace lindil
