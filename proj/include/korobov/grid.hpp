#pragma once

// Regular grids G_{n,s} = {(k_1/m_1, ..., k_s/m_s)}, their dual lattice
// G^perp = {l : m_j | l_j}, the fundamental frequency box
// V_n = Z^s cap prod_j (-m_j/2, m_j/2], and the mesh-size constructions used
// to certify exponential convergence with function values only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "korobov/errors.hpp"
#include "korobov/numeric.hpp"
#include "korobov/space.hpp"

namespace korobov {

class RegularGrid {
 public:
  explicit RegularGrid(std::vector<std::int64_t> mesh) : mesh_(std::move(mesh)) {
    detail::require(!mesh_.empty(), "grid needs at least one coordinate");
    for (auto m : mesh_) detail::require(m >= 1, "mesh sizes must be positive");
  }

  std::size_t dim() const { return mesh_.size(); }
  std::span<const std::int64_t> mesh() const { return mesh_; }
  std::int64_t mesh(std::size_t j) const { return mesh_[j]; }

  /// log n = sum_j log m_j; always representable.
  double log_size() const {
    double l = 0.0;
    for (auto m : mesh_) l += std::log(static_cast<double>(m));
    return l;
  }

  /// n = prod_j m_j.
  std::uint64_t size() const {
    std::uint64_t n = 1;
    for (auto m : mesh_) {
      const auto mu = static_cast<std::uint64_t>(m);
      if (n > std::numeric_limits<std::uint64_t>::max() / mu)
        throw resource_cap_exceeded("grid cardinality overflows 64 bits");
      n *= mu;
    }
    return n;
  }

  /// Lower and upper end of the V_n range in coordinate j.
  static std::int64_t vn_low(std::int64_t m) { return -((m - 1) / 2); }
  static std::int64_t vn_high(std::int64_t m) { return m / 2; }

  /// Point with linear index `index`; the first coordinate varies fastest.
  std::vector<double> point(std::uint64_t index) const {
    std::vector<double> x(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
      const auto m = static_cast<std::uint64_t>(mesh_[j]);
      x[j] = static_cast<double>(index % m) / static_cast<double>(m);
      index /= m;
    }
    return x;
  }

  bool in_vn(std::span<const std::int64_t> h) const {
    check(h.size());
    for (std::size_t j = 0; j < dim(); ++j) {
      // -m/2 < h <= m/2 in integer arithmetic
      if (!(2 * h[j] > -mesh_[j] && 2 * h[j] <= mesh_[j])) return false;
    }
    return true;
  }

  bool in_dual(std::span<const std::int64_t> l) const {
    check(l.size());
    for (std::size_t j = 0; j < dim(); ++j)
      if (l[j] % mesh_[j] != 0) return false;
    return true;
  }

  /// The unique v in V_n with h - v in the dual lattice.
  std::vector<std::int64_t> reduce(std::span<const std::int64_t> h) const {
    check(h.size());
    std::vector<std::int64_t> v(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
      const std::int64_t m = mesh_[j];
      std::int64_t r = ((h[j] % m) + m) % m;
      if (r > vn_high(m)) r -= m;
      v[j] = r;
    }
    return v;
  }

  friend bool operator==(const RegularGrid&, const RegularGrid&) = default;

 private:
  void check(std::size_t n) const {
    if (n != dim()) throw dimension_mismatch(dim(), n);
  }
  std::vector<std::int64_t> mesh_;
};

inline bool vn_membership(const RegularGrid& grid, std::span<const std::int64_t> h) { return grid.in_vn(h); }

namespace detail {

inline void check_grid(const WeightedSpace& space, const RegularGrid& grid) {
  if (grid.dim() != space.dim()) throw dimension_mismatch(space.dim(), grid.dim());
}

// Per-coordinate split of sum_{h in Z} omega^{a_j |h|^{b_j}} into the part inside
// (-m/2, m/2] and the part outside.
struct CoordinateSplit {
  double total;
  double outside;
  double inside() const { return total - outside; }
};

inline CoordinateSplit coordinate_split(const WeightedSpace& space, std::size_t j, std::int64_t m,
                                        double rel_tol) {
  const double rate = space.rate(j);
  const double bj = space.b(j);
  const double total = 1.0 + 2.0 * power_series(rate, bj, 1, rel_tol);
  const auto pos_start = static_cast<std::uint64_t>(RegularGrid::vn_high(m) + 1);
  const auto neg_start = static_cast<std::uint64_t>(-RegularGrid::vn_low(m) + 1);
  const double outside = power_series(rate, bj, pos_start, rel_tol) + power_series(rate, bj, neg_start, rel_tol);
  return {total, outside};
}

}  // namespace detail

/// sum_{h in V_n} omega_h.
inline double in_vn_mass(const WeightedSpace& space, const RegularGrid& grid, double tol = kDefaultTol) {
  detail::check_grid(space, grid);
  double p = 1.0;
  for (std::size_t j = 0; j < space.dim(); ++j) p *= detail::coordinate_split(space, j, grid.mesh(j), tol).inside();
  return p;
}

/// sum_{h not in V_n} omega_h. Evaluated as
///   sum_j E_j prod_{i<j} S_i prod_{i>j} A_i
/// (A = full coordinate sum, S = inside part, E = outside part), which has no
/// cancellation; 4 times this value bounds the squared worst-case L-infinity
/// error of the grid spline.
inline double out_of_vn_mass(const WeightedSpace& space, const RegularGrid& grid, double tol = kDefaultTol) {
  detail::check_grid(space, grid);
  const std::size_t s = space.dim();
  std::vector<detail::CoordinateSplit> split;
  split.reserve(s);
  for (std::size_t j = 0; j < s; ++j) split.push_back(detail::coordinate_split(space, j, grid.mesh(j), tol));
  std::vector<double> total_suffix(s + 1, 1.0);
  for (std::size_t j = s; j-- > 0;) total_suffix[j] = total_suffix[j + 1] * split[j].total;
  CompensatedSum sum;
  double inside_prefix = 1.0;
  for (std::size_t j = 0; j < s; ++j) {
    sum.add(split[j].outside * inside_prefix * total_suffix[j + 1]);
    inside_prefix *= split[j].inside();
  }
  return sum.value();
}

/// F_n = -1 + prod_j (1 + 2 sum_{h>=1} wbar^{a_j 2^{-b_j} (m_j h)^{b_j}}), wbar = omega^{1/2};
/// 4 n F_n bounds the squared worst-case L-infinity error of the grid spline.
inline double f_n(const WeightedSpace& space, const RegularGrid& grid, double tol = kDefaultTol) {
  detail::check_grid(space, grid);
  CompensatedSum log_prod;
  for (std::size_t j = 0; j < space.dim(); ++j) {
    const double bj = space.b(j);
    const double m = static_cast<double>(grid.mesh(j));
    const double scale = 0.5 * std::pow(2.0, -bj) * std::pow(m, bj);
    const double t = std::exp(coord_log_series(space, j, 1, scale, tol).log_value);
    log_prod.add(std::log1p(2.0 * t));
  }
  return std::expm1(log_prod.value());
}

/// log(n F_n), useful when n does not fit in 64 bits.
inline double log_n_f_n(const WeightedSpace& space, const RegularGrid& grid, double tol = kDefaultTol) {
  return grid.log_size() + std::log(f_n(space, grid, tol));
}

/// 2 sqrt(n F_n).
inline double fn_error_bound(const WeightedSpace& space, const RegularGrid& grid, double tol = kDefaultTol) {
  return 2.0 * std::exp(0.5 * log_n_f_n(space, grid, tol));
}

/// 2 sqrt(sum_{h not in V_n} omega_h).
inline double alias_error_bound(const WeightedSpace& space, const RegularGrid& grid, double tol = kDefaultTol) {
  return 2.0 * std::sqrt(out_of_vn_mass(space, grid, tol));
}

// ---------------------------------------------------------------------------
// Mesh constructions

struct UexpDesign {
  RegularGrid grid;
  double m = 0.0;          // the real-valued target m with n <= m
  double omega1 = 0.0;
  double b_used = 0.0;     // B(s), or the caller-supplied B
  double r_const = 0.0;    // R
  std::vector<double> c_const;  // C_j
};

namespace detail {

// sup over integers m >= 1 of m^{1/s} q^{m^{1/B} c'} = exp((1/s) log m - c m^{1/B}).
// In u = m^{1/B} the log is (B/s) log u - c u, concave with maximizer u* = B/(s c),
// so the integer sup is attained next to m* = u*^B.
inline double uexp_sup_constant(double s, double b_used, double c) {
  auto log_g = [&](double m) { return std::log(m) / s - c * std::pow(m, 1.0 / b_used); };
  const double u_star = b_used / (s * c);
  const double log_m_star = b_used * std::log(u_star);
  if (log_m_star <= 0.0) return std::exp(log_g(1.0));
  if (log_m_star > std::log(1e15)) return std::exp(b_used / s * (std::log(u_star) - 1.0));
  const double m_star = std::exp(log_m_star);
  const double lo = std::max(1.0, std::floor(m_star));
  return std::exp(std::max(log_g(lo), log_g(lo + 1.0)));
}

}  // namespace detail

/// Mesh sizes guaranteeing 2 sqrt(n F_n) <= eps with n = O(log^{B(s)}(1 + 1/eps)).
/// `omega1` must lie in (sqrt(omega), 1); it defaults to omega^{1/4}, the
/// geometric midpoint of that interval. `b_override` replaces B(s) (it must
/// not be smaller than B(s)).
inline UexpDesign mesh_uexp(const WeightedSpace& space, double eps, std::optional<double> omega1 = {},
                            std::optional<double> b_override = {}) {
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  const std::size_t s = space.dim();
  const double log_inv_wbar = 0.5 * space.log_inv_omega();
  const double w1 = omega1.value_or(std::exp(-0.5 * log_inv_wbar));
  detail::require(w1 > std::exp(-log_inv_wbar) && w1 < 1.0, "omega1 must lie in (sqrt(omega), 1)");
  const double log_inv_w1 = -std::log(w1);
  const double log_inv_q = log_inv_wbar - log_inv_w1;  // q = wbar / omega1
  const double b_s = space.b_reciprocal_sum();
  const double b_used = b_override.value_or(b_s);
  detail::require(b_used >= b_s * (1.0 - 1e-12), "B override must not be smaller than B(s)");

  UexpDesign d{RegularGrid(std::vector<std::int64_t>(s, 1)), 0.0, w1, b_used, 0.0, {}};
  d.c_const.resize(s);
  double r = 0.0;
  for (std::size_t j = 0; j < s; ++j) {
    const double bj = space.b(j);
    const double four_b = std::pow(4.0, -bj);
    d.c_const[j] = detail::uexp_sup_constant(static_cast<double>(s), b_used, space.a_star() * four_b * log_inv_q);
    const double rate = space.a(j) * four_b * log_inv_w1;
    r = std::max(r, std::exp(rate + log_power_series(rate, bj, 1, kDefaultTol).log_value));
  }
  d.r_const = r;

  const double denom = std::log1p(eps * eps / 4.0);
  double m = 1.0;
  for (std::size_t j = 0; j < s; ++j) {
    const double bj = space.b(j);
    const double inner = std::pow(4.0, bj) / space.a(j) *
                         std::log1p(r * d.c_const[j] * 2.0 * static_cast<double>(s) / denom) / log_inv_w1;
    m = std::max(m, std::ceil(std::pow(inner, b_used)));
  }
  d.m = m;

  std::vector<std::int64_t> mesh(s);
  for (std::size_t j = 0; j < s; ++j) {
    const double mj = std::floor(std::pow(m, 1.0 / (b_used * space.b(j))));
    if (mj > 9e18) throw resource_cap_exceeded("mesh size does not fit in 64 bits");
    mesh[j] = std::max<std::int64_t>(1, static_cast<std::int64_t>(mj));
  }
  d.grid = RegularGrid(std::move(mesh));
  return d;
}

struct SptDesign {
  RegularGrid grid;
  double beta = 0.0;
  std::vector<double> raw;  // (log eps^{-2} / (a_j^beta log omega^{-1}))^{1/b_j}
};

/// Mesh sizes m_j = 2 ceil((log eps^{-2} / (a_j^beta log omega^{-1}))^{1/b_j}) - 1.
/// Every m_j is odd, and m_j = 1 once a_j^beta >= log eps^{-2} / log omega^{-1}.
inline SptDesign mesh_spt(const WeightedSpace& space, double eps, double beta) {
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  detail::require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  const std::size_t s = space.dim();
  const double ratio = -2.0 * std::log(eps) / space.log_inv_omega();
  SptDesign d{RegularGrid(std::vector<std::int64_t>(s, 1)), beta, std::vector<double>(s)};
  std::vector<std::int64_t> mesh(s);
  for (std::size_t j = 0; j < s; ++j) {
    const double raw = std::pow(ratio / std::pow(space.a(j), beta), 1.0 / space.b(j));
    d.raw[j] = raw;
    const double c = std::max(1.0, fuzzy_ceil(raw));
    if (c > 4e18) throw resource_cap_exceeded("mesh size does not fit in 64 bits");
    mesh[j] = 2 * static_cast<std::int64_t>(c) - 1;
  }
  d.grid = RegularGrid(std::move(mesh));
  return d;
}

/// Report-time quantities for the polynomial-tractability grid: the guaranteed
/// error exponent min(a_*^{1-beta}, 1) - eta, the cardinality exponent
/// B + log 3 / (beta delta), and, for exponentially growing a-families, the
/// explicit constant C_{beta,delta} and the resulting error bound
///   2 sqrt(n C_{beta,delta} (e - 1)) eps^{min(a_*^{1-beta}, 1)}.
struct SptGuarantee {
  double error_exponent = 0.0;
  std::optional<double> size_exponent;
  std::optional<double> j_star_delta;
  std::optional<double> j_star_beta_delta;
  double d_const = 0.0;
  std::optional<double> c_beta_delta;
  std::optional<double> error_bound;  // set only when its validity conditions hold
};

inline SptGuarantee spt_guarantee(const WeightedSpace& space, const RegularGrid& grid, double eps, double beta,
                                  double delta, double eta) {
  detail::require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  detail::require(delta > 0.0, "delta must be positive");
  detail::require(eta > 0.0, "eta must be positive");
  SptGuarantee g;
  const double lead = std::min(std::pow(space.a_star(), 1.0 - beta), 1.0);
  g.error_exponent = lead - eta;
  if (auto b = space.b_family().reciprocal_sum(); b && std::isfinite(*b))
    g.size_exponent = *b + std::log(3.0) / (beta * delta);
  {
    const double rate = space.a_star() * space.log_inv_omega();
    g.d_const = std::exp(rate + log_power_series(rate, space.b_star(), 1).log_value);
  }

  const auto& fam = space.a_family();
  const auto alpha = fam.log_growth_liminf();
  if (!alpha || !(delta < *alpha)) return g;
  if (fam.kind() != SequenceFamily::Kind::exponential && fam.kind() != SequenceFamily::Kind::super_exponential)
    return g;
  // g(j) = log a_j - delta j is linear or convex, so once it is nonnegative and
  // nondecreasing it stays nonnegative.
  double j_star = 1.0;
  for (std::size_t j = 1; j < 1'000'000; ++j) {
    const double gj = std::log(fam(j)) - delta * static_cast<double>(j);
    const double gn = std::log(fam(j + 1)) - delta * static_cast<double>(j + 1);
    if (gj >= 0.0 && gn >= gj) {
      j_star = static_cast<double>(j);
      break;
    }
  }
  g.j_star_delta = j_star;
  const double ratio = -2.0 * std::log(eps) / space.log_inv_omega();
  const double jbd = std::max(j_star, std::log(std::pow(ratio, 1.0 / beta)) / delta);
  g.j_star_beta_delta = jbd;
  const double j0 = std::ceil(jbd);
  CompensatedSum tail;
  for (double j = j0;; j += 1.0) {
    const double t = std::pow(0.5, std::exp((1.0 - beta) * delta * j) - 1.0);
    tail.add(t);
    if (t < 1e-18 * std::max(tail.value(), 1e-300) || t == 0.0) break;
  }
  const double c = 2.0 * g.d_const * (j0 - 1.0 + tail.value());
  g.c_beta_delta = c;
  if (eps * eps <= 0.5 && std::pow(eps, -2.0 * lead) >= c) {
    g.error_bound = 2.0 * std::sqrt(std::exp(grid.log_size()) * c * (std::exp(1.0) - 1.0)) * std::pow(eps, lead);
  }
  return g;
}

/// Greedy search for a grid with at most n_max points and small alias mass:
/// repeatedly bumps the mesh size that lowers sum_{h not in V_n} omega_h the most.
inline RegularGrid greedy_grid(const WeightedSpace& space, std::uint64_t n_max, double tol = kDefaultTol) {
  detail::require(n_max >= 1, "grid needs at least one point");
  const std::size_t s = space.dim();
  std::vector<std::int64_t> mesh(s, 1);
  std::uint64_t n = 1;
  for (;;) {
    double best = out_of_vn_mass(space, RegularGrid(mesh), tol);
    std::optional<std::size_t> pick;
    for (std::size_t j = 0; j < s; ++j) {
      const auto mj = static_cast<std::uint64_t>(mesh[j]);
      if (n / mj * (mj + 1) > n_max) continue;
      auto trial = mesh;
      ++trial[j];
      const double mass = out_of_vn_mass(space, RegularGrid(trial), tol);
      if (mass < best) {
        best = mass;
        pick = j;
      }
    }
    if (!pick) break;
    n = n / static_cast<std::uint64_t>(mesh[*pick]) * static_cast<std::uint64_t>(mesh[*pick] + 1);
    ++mesh[*pick];
  }
  return RegularGrid(std::move(mesh));
}

}  // namespace korobov
