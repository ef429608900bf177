#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "korobov/oracle.hpp"
#include "korobov/spline.hpp"
#include "support.hpp"

using namespace korobov;
using namespace testing_support;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using V = std::vector<std::int64_t>;

std::vector<cplx> kernel_samples(const WeightedSpace& sp, const RegularGrid& g, const std::vector<double>& y) {
  const KernelEvaluator k(sp);
  return sample_grid(g, [&](std::span<const double> x) { return cplx(k(x, y), 0.0); });
}

std::vector<double> real_parts(const std::vector<cplx>& z) {
  std::vector<double> out;
  for (auto c : z) out.push_back(c.real());
  return out;
}

// Small exponents keep the kernel matrix well conditioned.
WeightedSpace mild_space(std::mt19937_64& gen, std::size_t s) {
  std::uniform_real_distribution<double> om(0.4, 0.8);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> a(s);
  std::vector<double> b(s);
  for (auto& x : a) x = u(gen);
  for (auto& x : b) x = u(gen);
  std::sort(a.begin(), a.end());
  return explicit_space(om(gen), a, b);
}

}  // namespace

TEST_CASE("fast DFT agrees with the naive sum") {
  std::mt19937_64 gen(79);
  std::normal_distribution<double> nd;
  for (const V& mesh : {V{1}, V{7}, V{8}, V{4, 3}, V{5, 1, 2}, V{3, 3, 3}}) {
    const RegularGrid g(mesh);
    std::vector<cplx> f(g.size());
    for (auto& z : f) z = {nd(gen), nd(gen)};
    const auto fast = grid_dft(g, f);
    const auto slow = oracle::naive_grid_dft(g, f);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) <= 1e-12);
  }
}

TEST_CASE("characters in the fundamental box") {
  const auto sp = explicit_space(0.4, {1.0, 1.5}, {1.0, 2.0});
  const RegularGrid g({5, 4});
  const V h{-2, 2};
  const auto f = sample_grid(g, [&](std::span<const double> x) {
    const double ph = 2.0 * M_PI * (h[0] * x[0] + h[1] * x[1]);
    return cplx(std::cos(ph), std::sin(ph));
  });
  const SplineInterpolant spl(sp, g, f);
  const auto d = spl.dft();
  for (std::uint64_t i = 0; i < g.size(); ++i) {
    const bool target = (i % 5) == static_cast<std::uint64_t>(h[0] + 2) && (i / 5) == static_cast<std::uint64_t>(h[1] + 1);
    CHECK(std::abs(d[i] - (target ? cplx(1.0) : cplx(0.0))) <= 1e-13);
  }
  // oracle: 1/Omega_h from direct alias sums
  double omega_h = 1.0;
  const std::int64_t m[2] = {5, 4};
  for (int j = 0; j < 2; ++j) {
    long double acc = 0.0L;
    for (std::int64_t t = -200; t <= 200; ++t)
      acc += std::pow(0.4L, static_cast<long double>(sp.a(j)) * std::pow(std::abs(h[j] + m[j] * t), sp.b(j)));
    omega_h *= static_cast<double>(acc);
  }
  CHECK_THAT(spl.norm_squared(), WithinRel(1.0 / omega_h, 1e-12));
}

TEST_CASE("interpolation at the nodes") {
  std::mt19937_64 gen(83);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t s = 1 + trial % 3;
    const auto sp = random_space(gen, s);
    V mesh(s);
    for (std::size_t j = 0; j < s; ++j) mesh[j] = 1 + (trial + 2 * j) % 6;
    const RegularGrid g(mesh);
    std::vector<cplx> f(g.size());
    for (auto& z : f) z = {nd(gen), nd(gen)};
    const SplineInterpolant spl(sp, g, f);
    const PowerFunction pf(sp, g);
    for (std::uint64_t k = 0; k < g.size(); ++k) {
      const auto x = g.point(k);
      CHECK(std::abs(spl(x) - f[k]) <= 1e-10);
      CHECK(pf(x) <= 1e-12 * trace(sp));
    }
  }
}

TEST_CASE("fast route matches the dense kernel matrix") {
  std::mt19937_64 gen(89);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t s = 1 + trial % 3;
    const auto sp = mild_space(gen, s);
    V mesh(s);
    for (std::size_t j = 0; j < s; ++j) mesh[j] = 2 + (trial + j) % 3;
    const RegularGrid g(mesh);
    const auto y = random_point(gen, s);
    const auto f = kernel_samples(sp, g, y);
    const SplineInterpolant spl(sp, g, f);
    const auto gram = gram_oracle(sp, g, real_parts(f));
    // The kernel section K(., y) has norm^2 K(y, y); its interpolant is the
    // projection, so the norm cannot exceed that.
    CHECK(spl.norm_squared() <= trace(sp) * (1.0 + 1e-10));
    const PowerFunction pf(sp, g);
    for (int i = 0; i < 20; ++i) {
      const auto x = random_point(gen, s);
      CHECK(std::abs(spl(x).real() - gram(x)) <= 1e-9);
      CHECK(std::abs(spl(x).imag()) <= 1e-12);
      CHECK_THAT(pf(x), WithinAbs(gram.power_function(x), 1e-9 * trace(sp)));
    }
  }
}

TEST_CASE("single-node grid") {
  const auto sp = explicit_space(0.5, {1.0, 2.0}, {1.0, 1.0});
  const RegularGrid g({1, 1});
  const KernelEvaluator k(sp);
  const std::vector<double> origin{0.0, 0.0};
  for (const auto& x : {std::vector<double>{0.3, 0.8}, std::vector<double>{0.5, 0.5}}) {
    const double kx = k(x, origin);
    const double expected = k.diagonal() - kx * kx / k.diagonal();
    CHECK_THAT(power_function(sp, g, x), WithinAbs(expected, 1e-12 * k.diagonal()));
    CHECK_THAT(gram_power_function(sp, g, x), WithinAbs(expected, 1e-12 * k.diagonal()));
  }
}

TEST_CASE("refining a grid lowers the power function") {
  const auto sp = explicit_space(0.5, {1.0, 1.0}, {1.0, 2.0});
  const PowerFunction coarse(sp, RegularGrid({3, 2}));
  const PowerFunction fine(sp, RegularGrid({9, 4}));
  std::mt19937_64 gen(97);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_point(gen, 2);
    CHECK(fine(x) <= coarse(x) + 1e-13);
  }
}

TEST_CASE("power function bound chain") {
  std::mt19937_64 gen(101);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t s = 1 + trial % 3;
    const auto sp = random_space(gen, s);
    V mesh(s);
    for (std::size_t j = 0; j < s; ++j) mesh[j] = 1 + (3 * trial + j) % 7;
    const RegularGrid g(mesh);
    const auto est = empirical_wc_error(sp, g, 200, trial);
    CHECK(est.lower <= est.upper * (1.0 + 1e-12));
    CHECK(est.upper <= est.fn_bound * (1.0 + 1e-12));
  }
}

TEST_CASE("Halton points are deterministic and in the unit cube") {
  const HaltonSequence a(3, 5);
  const HaltonSequence b(3, 5);
  const HaltonSequence c(3, 6);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto x = a.point(i);
    CHECK(x == b.point(i));
    for (double v : x) CHECK((v >= 0.0 && v < 1.0));
  }
  CHECK(a.point(0) != c.point(0));
}

TEST_CASE("spline preconditions") {
  const auto sp = unit_space(2);
  const RegularGrid g({2, 2});
  std::vector<cplx> wrong(3);
  CHECK_THROWS_AS(SplineInterpolant(sp, g, wrong), precondition_error);
  CHECK_THROWS_AS(PowerFunction(unit_space(3), g), dimension_mismatch);
  const RegularGrid big({65, 64});
  std::vector<double> zeros(big.size());
  CHECK_THROWS_AS(GramInterpolant(sp, big, zeros), resource_cap_exceeded);
  CHECK_THROWS_AS(AliasTable(sp, 0, 3, 0.0), precondition_error);
}
