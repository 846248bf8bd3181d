#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <bitset>
#include <random>

#include "lindil/concentration.hpp"

using namespace lindil;

TEST_CASE("make_cf reduces to canonical form") {
  const CF half = make_cf(512, 10);
  CHECK(half.numerator() == 1);
  CHECK(half.scale() == 1);

  const CF zero = make_cf(0, 10);
  CHECK(zero.numerator() == 0);
  CHECK(zero == CF::buffer());

  const CF c = make_cf(176, 8);
  CHECK(c.numerator() == 11);
  CHECK(c.scale() == 4);
  CHECK(c.to_string() == "11/16");

  CHECK_THROWS_AS(make_cf(1025, 10), DomainError);
  CHECK(make_cf(1024, 10) == CF::sample());
}

TEST_CASE("fixed-scale CFs compare by value and print at their scale") {
  const CF held = CF::at_scale(176, 8);
  CHECK(held.to_string() == "176/256");
  CHECK(held == make_cf(11, 4));
  CHECK(held.canonical().to_string() == "11/16");
  CHECK(held.rescaled(10).to_string() == "704/1024");
  CHECK_THROWS_AS(make_cf(11, 4).rescaled(3), DomainError);
  CHECK(make_cf(1, 3) < make_cf(1, 2));
  CHECK(CF::parse("50/1024") == make_cf(25, 9));
  CHECK_THROWS(CF::parse("3/10"));
  CHECK_THROWS(CF::parse("5/4"));
  CHECK_THROWS(CF::parse("abc"));
}

TEST_CASE("approx_real rounds to the nearest lattice point") {
  CHECK(approx_real(0.5, 4).to_string() == "8/16");
  CHECK(approx_real(1.0, 10).to_string() == "1024/1024");

  // Oracle: 0.17 = 17/100, so x = round(17 * 64 / 100) in integers.
  const std::uint64_t x = (17 * 64 * 2 + 100) / 200;
  const CF r = approx_real(0.17, 6);
  CHECK(r.numerator() == x);
  CHECK(r.scale() == 6);
  const double err = std::abs(r.to_double() - 0.17);
  CHECK(err == doctest::Approx(0.001875).epsilon(1e-9));
  CHECK(err <= 1.0 / 128);

  // Exactly halfway between 1/8 and 2/8 rounds up.
  CHECK(approx_real(3.0 / 16, 3).numerator() == 2);
  CHECK_THROWS_AS(approx_real(1.5, 4), DomainError);
}

TEST_CASE("approx_real error bound and fixed points") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (unsigned n = 1; n <= 20; ++n) {
    for (int i = 0; i < 200; ++i) {
      const double v = u(gen);
      CHECK(std::abs(approx_real(v, n).to_double() - v) <= std::ldexp(1.0, -static_cast<int>(n) - 1));
    }
    for (std::uint64_t x = 0; x <= (std::uint64_t{1} << n); x += (n < 8 ? 1 : 37)) {
      CHECK(approx_real(std::ldexp(static_cast<double>(x), -static_cast<int>(n)), n) == make_cf(x, n));
    }
  }
}

TEST_CASE("mix_cf is the exact mean") {
  CHECK(mix_cf(CF::at_scale(50, 10), CF::at_scale(130, 10)).to_string() == "90/1024");
  CHECK(mix_cf(CF::buffer(), CF::sample()) == make_cf(1, 1));

  // Lattice medians: (a + i d) and (a + j d) with i + j even.
  const GradientSpec spec{20, 50, 10, 17};
  for (int i = 0; i <= 16; ++i) {
    for (int j = i % 2; j <= 16; j += 2) {
      CHECK(mix_cf(spec.at(i), spec.at(j)) == spec.at((i + j) / 2));
    }
  }
  // Odd numerator sum needs one more bit.
  const CF odd = mix_cf(CF::at_scale(1, 4), CF::at_scale(2, 4));
  CHECK(odd.to_string() == "3/32");
}

TEST_CASE("mix_cf properties") {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 500; ++i) {
    const unsigned s1 = gen() % 20, s2 = gen() % 20;
    const CF a = CF::at_scale(gen() % ((std::uint64_t{1} << s1) + 1), s1);
    const CF b = CF::at_scale(gen() % ((std::uint64_t{1} << s2) + 1), s2);
    CHECK(mix_cf(a, b) == mix_cf(b, a));
    CHECK(mix_cf(a, a) == a);
    CHECK(a.canonical().canonical().numerator() == a.canonical().numerator());
    CHECK(a.canonical().is_canonical());
    // mean lies between the inputs
    const CF m = mix_cf(a, b);
    CHECK(std::min(a, b) <= m);
    CHECK(m <= std::max(a, b));
  }
}

TEST_CASE("bin_repr") {
  CHECK(bin_repr(10, 4) == "1010");
  CHECK(bin_repr(0, 3) == "000");
  CHECK(bin_repr(19, 5) == std::bitset<5>(19).to_string());
  CHECK(bin_repr(19, 5) == "10011");
  CHECK_THROWS_AS(bin_repr(16, 4), DomainError);
}

TEST_CASE("zc counts interior zeros") {
  CHECK(zc("1010") == 1);
  CHECK(zc("1001") == 2);
  CHECK(zc("1111") == 0);
  CHECK(zc("0000") == 0);
  CHECK(zc("0100") == 0);
  CHECK(zc("0010010") == 2);
}

TEST_CASE("zc is independent of padding width") {
  for (std::uint64_t x = 0; x < 5000; ++x) {
    const auto w = static_cast<unsigned>(std::max(1, bit_length(x)));
    const int base = zc(bin_repr(x, w));
    for (unsigned m = w; m < w + 5; ++m) CHECK(zc(bin_repr(x, m)) == base);
  }
}

TEST_CASE("trailing_zeros") {
  CHECK(trailing_zeros(176) == std::countr_zero(std::uint64_t{176}));
  CHECK(trailing_zeros(176) == 4);
  CHECK(trailing_zeros(50) == std::countr_zero(std::uint64_t{50}));
  CHECK(trailing_zeros(50) == 1);
  CHECK(trailing_zeros(1) == 0);
  CHECK(trailing_zeros(0) == 0);
}

TEST_CASE("GradientSpec validation") {
  CHECK_NOTHROW((GradientSpec{50, 20, 10, 5}.validate()));
  CHECK_THROWS_AS((GradientSpec{50, 20, 10, 2}.validate()), DomainError);
  CHECK_THROWS_AS((GradientSpec{1000, 20, 10, 5}.validate()), DomainError);
  CHECK_THROWS_AS((GradientSpec{0, 0, 10, 5}.validate()), DomainError);
  CHECK((GradientSpec{50, 20, 10, 5}.at(4).to_string() == "130/1024"));
}
