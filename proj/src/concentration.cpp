#include "lindil/concentration.hpp"

#include <bit>
#include <charconv>
#include <cmath>

namespace lindil {

namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t pow2(unsigned e) { return std::uint64_t{1} << e; }

}  // namespace

CF ConcentrationFactor::at_scale(std::uint64_t numerator, unsigned scale) {
  if (scale > kMaxScale) {
    throw DomainError("scale " + std::to_string(scale) + " exceeds " + std::to_string(kMaxScale));
  }
  if (numerator > pow2(scale)) {
    throw DomainError("numerator " + std::to_string(numerator) + " exceeds 2^" +
                      std::to_string(scale));
  }
  return CF(numerator, scale);
}

CF ConcentrationFactor::canonical() const {
  if (numerator_ == 0) return CF(0, 0);
  const int tz = std::min<int>(std::countr_zero(numerator_), static_cast<int>(scale_));
  return CF(numerator_ >> tz, scale_ - static_cast<unsigned>(tz));
}

bool ConcentrationFactor::is_canonical() const {
  if (numerator_ == 0) return scale_ == 0;
  return scale_ == 0 || (numerator_ & 1u) == 1u;
}

bool ConcentrationFactor::representable_at(unsigned scale) const {
  if (scale > kMaxScale) return false;
  return canonical().scale_ <= scale;
}

CF ConcentrationFactor::rescaled(unsigned scale) const {
  if (!representable_at(scale)) {
    throw DomainError(to_string() + " is not representable at scale " + std::to_string(scale));
  }
  const CF c = canonical();
  return CF(c.numerator_ << (scale - c.scale_), scale);
}

double ConcentrationFactor::to_double() const {
  return std::ldexp(static_cast<double>(numerator_), -static_cast<int>(scale_));
}

std::string ConcentrationFactor::to_string() const {
  return std::to_string(numerator_) + "/" + std::to_string(pow2(scale_));
}

CF ConcentrationFactor::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw ParseError("CF '" + std::string(text) + "' lacks '/'");
  std::uint64_t num = 0;
  std::uint64_t den = 0;
  const auto lhs = text.substr(0, slash);
  const auto rhs = text.substr(slash + 1);
  auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), num);
  auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), den);
  if (r1.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size() || r2.ec != std::errc{} ||
      r2.ptr != rhs.data() + rhs.size()) {
    throw ParseError("CF '" + std::string(text) + "' is not of the form x/2^n");
  }
  if (!is_power_of_two(den)) throw ParseError("CF '" + std::string(text) + "' denominator is not 2^n");
  const auto scale = static_cast<unsigned>(std::countr_zero(den));
  if (scale > kMaxScale || num > den) throw ParseError("CF '" + std::string(text) + "' out of range");
  return CF(num, scale);
}

bool operator==(const CF& a, const CF& b) {
  const CF ca = a.canonical();
  const CF cb = b.canonical();
  return ca.numerator_ == cb.numerator_ && ca.scale_ == cb.scale_;
}

std::strong_ordering operator<=>(const CF& a, const CF& b) {
  const u128 lhs = static_cast<u128>(a.numerator_) << b.scale_;
  const u128 rhs = static_cast<u128>(b.numerator_) << a.scale_;
  return lhs <=> rhs;
}

CF make_cf(std::uint64_t numerator, unsigned scale) {
  return CF::at_scale(numerator, scale).canonical();
}

CF approx_real(double target, unsigned scale) {
  if (!(target >= 0.0 && target <= 1.0)) throw DomainError("target must lie in [0, 1]");
  if (scale < 1 || scale > kMaxScale) throw DomainError("scale must lie in [1, 62]");
  const long double scaled = std::ldexp(static_cast<long double>(target), static_cast<int>(scale));
  auto x = static_cast<std::uint64_t>(std::floor(scaled + 0.5L));
  x = std::min(x, pow2(scale));
  return CF::at_scale(x, scale);
}

CF mix_cf(const CF& c1, const CF& c2) {
  const unsigned s = std::max(c1.scale(), c2.scale());
  const std::uint64_t sum = (c1.numerator() << (s - c1.scale())) + (c2.numerator() << (s - c2.scale()));
  if (sum % 2 == 0) return CF::at_scale(sum / 2, s);
  if (s + 1 > kMaxScale) throw DomainError("mix result exceeds maximum scale");
  return CF::at_scale(sum, s + 1);
}

std::string bin_repr(std::uint64_t x, unsigned m) {
  if (m > 64 || (m < 64 && x >= (std::uint64_t{1} << m))) {
    throw DomainError(std::to_string(x) + " does not fit in " + std::to_string(m) + " bits");
  }
  std::string out(m, '0');
  for (unsigned i = 0; i < m; ++i) {
    if ((x >> i) & 1u) out[m - 1 - i] = '1';
  }
  return out;
}

int zc(std::string_view bits) {
  const auto first = bits.find('1');
  const auto last = bits.rfind('1');
  if (first == std::string_view::npos || first == last) return 0;
  int zeros = 0;
  for (auto i = first; i < last; ++i) zeros += bits[i] == '0';
  return zeros;
}

int trailing_zeros(std::uint64_t x) { return x == 0 ? 0 : std::countr_zero(x); }

int bit_length(std::uint64_t x) { return static_cast<int>(std::bit_width(x)); }

void GradientSpec::validate() const {
  if (count < 3) throw DomainError("gradient needs at least 3 points (count=" + std::to_string(count) + ")");
  if (scale < 1 || scale > kMaxScale) throw DomainError("scale n must lie in [1, 62]");
  if (step < 1) throw DomainError("step d must be positive");
  if (start < 0) throw DomainError("start a must be non-negative");
  const u128 last = static_cast<u128>(start) + static_cast<u128>(count - 1) * static_cast<u128>(step);
  if (last > pow2(scale)) {
    throw DomainError("last target exceeds 2^n (a + (S-1)d > 2^n)");
  }
}

CF GradientSpec::at(std::int64_t index) const {
  const std::int64_t num = numerator_at(index);
  if (num < 0) throw DomainError("negative lattice numerator");
  return CF::at_scale(static_cast<std::uint64_t>(num), scale);
}

}  // namespace lindil
