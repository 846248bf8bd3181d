#pragma once

// Exact dyadic concentration factors and the binary-string helpers used by
// the waste formula and the bit-scanning engine.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "lindil/error.hpp"

namespace lindil {

/// Largest supported accuracy (bits). Keeps every cross-multiplication in
/// 128-bit range.
inline constexpr unsigned kMaxScale = 62;

/// A concentration factor x / 2^scale, 0 <= x <= 2^scale.
///
/// The stored (numerator, scale) pair may be held at a fixed, non-canonical
/// scale so that reports print on the working lattice ("176/256"). Equality
/// and ordering always compare the exact value.
class ConcentrationFactor {
 public:
  constexpr ConcentrationFactor() = default;

  /// Holds x / 2^scale exactly as given. Throws DomainError when out of range.
  static ConcentrationFactor at_scale(std::uint64_t numerator, unsigned scale);

  static ConcentrationFactor buffer() { return {}; }
  static ConcentrationFactor sample() { return at_scale(1, 0); }

  std::uint64_t numerator() const { return numerator_; }
  unsigned scale() const { return scale_; }

  /// Numerator odd (or the value is 0 at scale 0, or 1 at scale 0).
  ConcentrationFactor canonical() const;
  bool is_canonical() const;

  /// Same value re-expressed at the requested scale; DomainError if the value
  /// is not representable there.
  ConcentrationFactor rescaled(unsigned scale) const;
  bool representable_at(unsigned scale) const;

  bool is_stock() const { return numerator_ == 0 || numerator_ == (std::uint64_t{1} << scale_); }
  double to_double() const;

  /// "x/2^n" with the denominator written out in decimal, e.g. "176/256".
  std::string to_string() const;
  static ConcentrationFactor parse(std::string_view text);

  friend bool operator==(const ConcentrationFactor& a, const ConcentrationFactor& b);
  friend std::strong_ordering operator<=>(const ConcentrationFactor& a,
                                          const ConcentrationFactor& b);

 private:
  constexpr ConcentrationFactor(std::uint64_t num, unsigned scale)
      : numerator_(num), scale_(scale) {}

  std::uint64_t numerator_ = 0;
  unsigned scale_ = 0;
};

using CF = ConcentrationFactor;

/// Canonical CF for numerator / 2^scale.
CF make_cf(std::uint64_t numerator, unsigned scale);

/// Nearest x / 2^scale to target (ties round half up). Held at `scale`.
CF approx_real(double target, unsigned scale);

/// Exact (c1 + c2) / 2. The result lives at max(scale) when the numerator sum
/// at that scale is even, otherwise one bit finer.
CF mix_cf(const CF& c1, const CF& c2);

/// MSB-first m-bit string of x. DomainError if x >= 2^m.
std::string bin_repr(std::uint64_t x, unsigned m);

/// Zeros strictly between the leftmost and rightmost '1'.
int zc(std::string_view bits);

/// Low-order zero bits; trailing_zeros(0) == 0.
int trailing_zeros(std::uint64_t x);

/// Number of significant bits; bit_length(0) == 0.
int bit_length(std::uint64_t x);

inline bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

/// Linear gradient (a + i*d) / 2^n for i = 0..count-1.
struct GradientSpec {
  std::int64_t start = 0;  // a
  std::int64_t step = 1;   // d
  unsigned scale = 1;      // n
  std::int64_t count = 3;  // S

  /// Throws DomainError unless every target is a valid CF and count >= 3.
  void validate() const;

  std::int64_t numerator_at(std::int64_t index) const { return start + index * step; }

  /// CF of lattice point `index` held at the gradient's scale. Indices past
  /// count-1 are allowed (embedded lattice) as long as they stay <= 1.
  CF at(std::int64_t index) const;

  friend bool operator==(const GradientSpec&, const GradientSpec&) = default;
};

}  // namespace lindil
