#include <catch_amalgamated.hpp>

#include <cmath>

#include "korobov/oracle.hpp"
#include "support.hpp"

using namespace korobov;
using namespace testing_support;
using Catch::Matchers::WithinRel;

TEST_CASE("box enumeration of a small space") {
  const auto box = oracle::brute_spectrum(unit_space(2), 3, 5);
  REQUIRE(box.exponents.size() == 5);
  CHECK(box.exponents == std::vector<double>{0, 1, 1, 1, 1});
  CHECK(box.freq[0] == std::vector<std::int64_t>{0, 0});
  CHECK(box.certificate == 4.0);
}

TEST_CASE("box enumeration refuses boxes that are too small") {
  CHECK_THROWS_AS(oracle::brute_spectrum(unit_space(2), 1, 9), certification_failure);
  CHECK_NOTHROW(oracle::brute_spectrum(unit_space(1), 2, 3));
  CHECK_THROWS_AS(oracle::brute_spectrum(unit_space(1), 1, 10), certification_failure);
  CHECK_THROWS_AS(oracle::brute_spectrum(unit_space(8), 10, 1), resource_cap_exceeded);
}

TEST_CASE("certified half-width") {
  const auto sp = explicit_space(0.5, {1.0, 2.0}, {1.0, 2.0});
  CHECK(oracle::certified_half_width(sp, 0.5) == 0);
  CHECK(oracle::certified_half_width(sp, 1.0) == 1);
  CHECK(oracle::certified_half_width(sp, 6.5) == 6);
}

TEST_CASE("brute mass interval is tight and valid") {
  // s = 1, a = b = 1, m = 1: everything but h = 0, mass 2 omega / (1 - omega)
  const auto iv = oracle::brute_out_of_vn(unit_space(1, 0.5), RegularGrid({1}), 60);
  CHECK(iv.contains(2.0));
  CHECK(iv.hi - iv.lo < 1e-10);
  // b < 1 uses the incomplete-gamma tail
  const auto sp = explicit_space(0.5, {1.0}, {0.5});
  const auto wide = oracle::brute_out_of_vn(sp, RegularGrid({3}), 2000);
  long double direct = 0.0L;
  for (std::int64_t h = 2; h < 2'000'000; ++h) direct += 2.0L * std::pow(0.5L, std::sqrt(static_cast<long double>(h)));
  CHECK(wide.contains(static_cast<double>(direct)));
  CHECK_THROWS_AS(oracle::brute_out_of_vn(unit_space(1), RegularGrid({9}), 3), certification_failure);
}

TEST_CASE("naive DFT of a character") {
  const RegularGrid g({4});
  std::vector<std::complex<double>> f;
  for (int k = 0; k < 4; ++k) f.push_back(std::polar(1.0, 2.0 * M_PI * k * 2 / 4.0));
  const auto d = oracle::naive_grid_dft(g, f);
  // V_4 = {-1, 0, 1, 2}; the character h = 2 lands on index 3
  CHECK(std::abs(d[3] - std::complex<double>(1.0)) < 1e-15);
  CHECK(std::abs(d[0]) < 1e-15);
}
