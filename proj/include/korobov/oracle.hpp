#pragma once

// Brute-force references for tests and --verify runs. Nothing here reuses the
// summation or enumeration code of the fast paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "korobov/errors.hpp"
#include "korobov/grid.hpp"
#include "korobov/space.hpp"

namespace korobov::oracle {

struct BoxEnumeration {
  std::int64_t half_width = 0;
  std::vector<std::vector<std::int64_t>> freq;
  std::vector<double> exponents;  // ascending
  double certificate = 0.0;       // every frequency outside the box has a larger exponent than this
};

namespace detail {

inline bool next_in_box(std::vector<std::int64_t>& h, std::int64_t lo, std::int64_t hi) {
  for (auto& c : h) {
    if (c < hi) {
      ++c;
      return true;
    }
    c = lo;
  }
  return false;
}

inline double box_exponent(const WeightedSpace& space, const std::vector<std::int64_t>& h) {
  long double e = 0.0L;
  for (std::size_t j = 0; j < h.size(); ++j)
    if (h[j] != 0) e += static_cast<long double>(space.a(j)) * std::pow(static_cast<long double>(std::llabs(h[j])), static_cast<long double>(space.b(j)));
  return static_cast<double>(e);
}

// Upper bound for sum_{h > big} exp(-rate h^power).
inline double tail_majorant(double rate, double power, std::int64_t big) {
  const double h0 = static_cast<double>(big + 1);
  if (power >= 1.0) {
    // h^power >= h0^{power-1} h for h >= h0
    const double r = rate * std::pow(h0, power - 1.0);
    return std::exp(-r * h0) / -std::expm1(-r);
  }
  // integral of the decreasing summand from big to infinity
  const double a = 1.0 / power;
  return boost::math::tgamma(a, rate * std::pow(static_cast<double>(big), power)) / (power * std::pow(rate, a));
}

}  // namespace detail

inline std::uint64_t box_cardinality(std::size_t s, std::int64_t half_width) {
  double c = std::pow(2.0 * static_cast<double>(half_width) + 1.0, static_cast<double>(s));
  if (c > 1e7) throw resource_cap_exceeded("box too large for brute-force enumeration");
  return static_cast<std::uint64_t>(c);
}

/// All frequencies with |h_j| <= H sorted by exponent, valid as a k-prefix
/// oracle when min_j a_j (H+1)^{b_j} exceeds the k-th exponent.
inline BoxEnumeration brute_spectrum(const WeightedSpace& space, std::int64_t half_width, std::size_t k) {
  korobov::detail::require(half_width >= 0, "box half-width must be nonnegative");
  korobov::detail::require(k >= 1, "prefix length must be positive");
  const std::size_t s = space.dim();
  box_cardinality(s, half_width);
  BoxEnumeration box;
  box.half_width = half_width;
  std::vector<std::pair<double, std::vector<std::int64_t>>> all;
  std::vector<std::int64_t> h(s, -half_width);
  do {
    all.emplace_back(detail::box_exponent(space, h), h);
  } while (detail::next_in_box(h, -half_width, half_width));
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  if (all.size() < k) throw certification_failure("box holds fewer than k frequencies");
  double cert = kInf;
  for (std::size_t j = 0; j < s; ++j)
    cert = std::min(cert, space.a(j) * std::pow(static_cast<double>(half_width + 1), space.b(j)));
  box.certificate = cert;
  if (!(cert > all[k - 1].first * (1.0 + 1e-12)))
    throw certification_failure("box too small: boundary exponent does not exceed the k-th exponent");
  for (std::size_t i = 0; i < k; ++i) {
    box.exponents.push_back(all[i].first);
    box.freq.push_back(std::move(all[i].second));
  }
  return box;
}

/// Smallest half-width whose certificate covers exponent `e`.
inline std::int64_t certified_half_width(const WeightedSpace& space, double e) {
  std::int64_t h = 0;
  for (;;) {
    double cert = kInf;
    for (std::size_t j = 0; j < space.dim(); ++j)
      cert = std::min(cert, space.a(j) * std::pow(static_cast<double>(h + 1), space.b(j)));
    if (cert > e * (1.0 + 1e-12)) return h;
    ++h;
  }
}

struct MassInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// sum_{h not in V_n} omega_h by direct summation over the box |h_j| <= H,
/// widened by a closed-form bound on everything outside the box.
inline MassInterval brute_out_of_vn(const WeightedSpace& space, const RegularGrid& grid, std::int64_t half_width) {
  const std::size_t s = space.dim();
  if (grid.dim() != s) throw dimension_mismatch(s, grid.dim());
  for (std::size_t j = 0; j < s; ++j)
    if (half_width < grid.mesh(j) / 2 + 1) throw certification_failure("box does not cover V_n");
  box_cardinality(s, half_width);
  const double lw = space.log_inv_omega();
  long double inside_box = 0.0L;
  std::vector<std::int64_t> h(s, -half_width);
  do {
    if (!grid.in_vn(h)) inside_box += std::exp(-static_cast<long double>(detail::box_exponent(space, h)) * lw);
  } while (detail::next_in_box(h, -half_width, half_width));

  // Mass outside the box: sum_j (two-sided tail of coordinate j) prod_{i != j} (full sum of i).
  std::vector<double> full(s);
  std::vector<double> tail(s);
  for (std::size_t j = 0; j < s; ++j) {
    const double rate = space.a(j) * lw;
    long double box_sum = 1.0L;
    for (std::int64_t k = 1; k <= half_width; ++k)
      box_sum += 2.0L * std::exp(-static_cast<long double>(rate) * std::pow(static_cast<long double>(k), space.b(j)));
    tail[j] = 2.0 * detail::tail_majorant(rate, space.b(j), half_width);
    full[j] = static_cast<double>(box_sum) + tail[j];
  }
  double outside = 0.0;
  for (std::size_t j = 0; j < s; ++j) {
    double t = tail[j];
    for (std::size_t i = 0; i < s; ++i)
      if (i != j) t *= full[i];
    outside += t;
  }
  const double core = static_cast<double>(inside_box);
  return {core * (1.0 - 1e-12), (core + outside) * (1.0 + 1e-12)};
}

/// fhat_v = (1/n) sum_k f(x_k) e^{-2 pi i v.x_k} evaluated term by term, O(n^2).
inline std::vector<std::complex<double>> naive_grid_dft(const RegularGrid& grid,
                                                         std::span<const std::complex<double>> samples) {
  const std::uint64_t n = grid.size();
  if (samples.size() != n) throw precondition_error("sample count does not match the grid");
  std::vector<std::complex<double>> out(n);
  const double two_pi = 6.283185307179586476925286766559;
  for (std::uint64_t vi = 0; vi < n; ++vi) {
    std::vector<std::int64_t> v(grid.dim());
    std::uint64_t rest = vi;
    for (std::size_t j = 0; j < grid.dim(); ++j) {
      const auto m = static_cast<std::uint64_t>(grid.mesh(j));
      v[j] = RegularGrid::vn_low(grid.mesh(j)) + static_cast<std::int64_t>(rest % m);
      rest /= m;
    }
    std::complex<long double> acc = 0.0L;
    for (std::uint64_t k = 0; k < n; ++k) {
      const auto x = grid.point(k);
      long double phase = 0.0L;
      for (std::size_t j = 0; j < grid.dim(); ++j) phase += static_cast<long double>(v[j]) * x[j];
      phase -= std::floor(phase);
      const long double ang = -two_pi * phase;
      acc += std::complex<long double>(samples[k]) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    out[vi] = std::complex<double>(acc / static_cast<long double>(n));
  }
  return out;
}

}  // namespace korobov::oracle
