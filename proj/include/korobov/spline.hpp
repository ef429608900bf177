#pragma once

// Minimal-norm interpolation on regular grids.
//
// For samples on G_{n,s} the interpolant is
//   sigma(x) = sum_{v in V_n} fhat_v sum_{l in G^perp} omega_{v+l} e^{2 pi i (v+l).x} / sum_{l} omega_{v+l},
// and since omega_h is a product over coordinates, each alias class sum splits
// into one-dimensional factors psi_j(v_j, x_j) / Omega_j(v_j). The same
// factorization gives the power function
//   P(x) = prod_j A_j - prod_j B_j(x_j),   B_j(x) = sum_v |psi_j(v, x)|^2 / Omega_j(v),
// evaluated below as a telescoping sum of nonnegative terms.
//
// A dense kernel-matrix route (GramInterpolant, gram_power_function) is kept
// as an independent check for small grids.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "korobov/errors.hpp"
#include "korobov/grid.hpp"
#include "korobov/numeric.hpp"
#include "korobov/space.hpp"

namespace korobov {

using cplx = std::complex<double>;

/// Default relative cut-off for the alias class sums.
inline constexpr double kDefaultTailCutoff = 1e-15;

/// Alias classes {v + m t : t in Z} of one coordinate, truncated symmetrically
/// in |h|. Weights are stored relative to omega^{a_j |v|^{b_j}}, so classes far
/// out in frequency do not underflow.
class AliasTable {
 public:
  struct Channel {
    std::int64_t v;
    std::vector<std::int64_t> freq;
    std::vector<double> rel_weight;  // omega_j(h) / omega_j(v)
    double rel_total;                // Omega_j(v) / omega_j(v)
    double log_weight_v;             // log omega_j(v)
  };

  AliasTable(const WeightedSpace& space, std::size_t j, std::int64_t m, double cutoff) : m_(m) {
    detail::require(cutoff > 0.0, "tail cut-off must be positive");
    const double rate = space.rate(j);
    const double bj = space.b(j);
    const double log_cut = std::log(cutoff);
    channels_.reserve(static_cast<std::size_t>(m));
    for (std::int64_t v = RegularGrid::vn_low(m); v <= RegularGrid::vn_high(m); ++v) {
      Channel c;
      c.v = v;
      const double av = std::pow(static_cast<double>(std::abs(v)), bj);
      c.log_weight_v = -rate * av;
      // Members in order of increasing |h|: v, then v +- m, v +- 2m, ...
      std::vector<std::int64_t> members{v};
      for (std::int64_t t = 1;; ++t) {
        const std::int64_t hi = v + m * t;
        const std::int64_t lo = v - m * t;
        const std::int64_t bound = std::min(std::abs(hi), std::abs(lo));
        // Every member not yet listed has |h| >= bound; the two one-sided
        // remainders are each at most sum_{h >= bound} omega_j(h).
        const double log_rem = kLn2 + log_power_series_majorant(rate, bj, static_cast<std::uint64_t>(bound));
        if (log_rem - c.log_weight_v <= log_cut) break;
        if (t > 100'000'000 / std::max<std::int64_t>(m, 1))
          throw resource_cap_exceeded("alias class truncation did not converge");
        members.push_back(hi);
        members.push_back(lo);
      }
      CompensatedSum total;
      for (auto h : members) {
        const double w = std::exp(-rate * (std::pow(static_cast<double>(std::abs(h)), bj) - av));
        c.freq.push_back(h);
        c.rel_weight.push_back(w);
      }
      // Add smallest first.
      for (std::size_t i = c.rel_weight.size(); i-- > 0;) total.add(c.rel_weight[i]);
      c.rel_total = total.value();
      channels_.push_back(std::move(c));
    }
  }

  std::int64_t mesh() const { return m_; }
  const std::vector<Channel>& channels() const { return channels_; }

  /// psi(v, x) / Omega(v) for every channel, in V-range order.
  void normalized_psi(double x, std::vector<cplx>& out) const {
    out.resize(channels_.size());
    for (std::size_t r = 0; r < channels_.size(); ++r) {
      const Channel& c = channels_[r];
      cplx acc = 0.0;
      for (std::size_t i = c.freq.size(); i-- > 0;) {
        const double phase = 2.0 * kPi * std::remainder(static_cast<double>(c.freq[i]) * x, 1.0);
        acc += c.rel_weight[i] * cplx(std::cos(phase), std::sin(phase));
      }
      out[r] = acc / c.rel_total;
    }
  }

  /// A_j - B_j(x) = sum_v sum_{t,t'} w_t w_t' (1 - cos(2 pi (h_t - h_t') x)) / Omega(v).
  /// With W = sum_t w_t and D = sum_t w_t (1 - e(theta_t)), theta_t = (h_t - v) x,
  /// the double sum equals 2 W Re(D) - |D|^2. Both terms are formed from
  /// half-angle sines, so nothing cancels near the nodes and the cost is
  /// linear in the class size.
  double power_defect(double x) const {
    CompensatedSum sum;
    for (const Channel& c : channels_) {
      CompensatedSum re;
      CompensatedSum im;
      for (std::size_t i = c.freq.size(); i-- > 0;) {
        const double theta = std::remainder(static_cast<double>(c.freq[i] - c.v) * x, 1.0);
        const double sn = std::sin(kPi * theta);
        re.add(2.0 * c.rel_weight[i] * sn * sn);
        im.add(-c.rel_weight[i] * std::sin(2.0 * kPi * theta));
      }
      const double d_re = re.value();
      const double d_im = im.value();
      const double inner = std::max(0.0, 2.0 * c.rel_total * d_re - (d_re * d_re + d_im * d_im));
      sum.add(std::exp(c.log_weight_v) * inner / c.rel_total);
    }
    return sum.value();
  }

 private:
  std::int64_t m_;
  std::vector<Channel> channels_;
};

/// Multidimensional DFT fhat_v = (1/n) sum_k f(x_k) e^{-2 pi i v.x_k}, v in V_n,
/// computed one axis at a time. Both input and output use the grid's linear
/// order (first coordinate fastest); output index r_j corresponds to
/// v_j = vn_low(m_j) + r_j.
inline std::vector<cplx> grid_dft(const RegularGrid& grid, std::span<const cplx> samples) {
  const std::uint64_t n = grid.size();
  if (samples.size() != n) throw precondition_error("sample count does not match the grid");
  std::vector<cplx> data(samples.begin(), samples.end());
  std::vector<cplx> line;
  std::vector<cplx> twiddle;
  std::uint64_t stride = 1;
  for (std::size_t j = 0; j < grid.dim(); ++j) {
    const std::int64_t m = grid.mesh(j);
    const auto mu = static_cast<std::uint64_t>(m);
    twiddle.resize(mu);
    for (std::int64_t r = 0; r < m; ++r) {
      const double phase = -2.0 * kPi * static_cast<double>(r) / static_cast<double>(m);
      twiddle[static_cast<std::size_t>(r)] = cplx(std::cos(phase), std::sin(phase));
    }
    line.resize(mu);
    const std::int64_t v0 = RegularGrid::vn_low(m);
    const std::uint64_t block = stride * mu;
    for (std::uint64_t outer = 0; outer < n; outer += block) {
      for (std::uint64_t inner = 0; inner < stride; ++inner) {
        const std::uint64_t base = outer + inner;
        for (std::int64_t r = 0; r < m; ++r) {
          const std::int64_t v = v0 + r;
          cplx acc = 0.0;
          for (std::int64_t k = 0; k < m; ++k) {
            const std::int64_t idx = (((v * k) % m) + m) % m;
            acc += data[base + static_cast<std::uint64_t>(k) * stride] * twiddle[static_cast<std::size_t>(idx)];
          }
          line[static_cast<std::size_t>(r)] = acc / static_cast<double>(m);
        }
        for (std::uint64_t r = 0; r < mu; ++r) data[base + r * stride] = line[r];
      }
    }
    stride = block;
  }
  return data;
}

/// Values of f at the grid points in linear order.
inline std::vector<cplx> sample_grid(const RegularGrid& grid, const std::function<cplx(std::span<const double>)>& f) {
  const std::uint64_t n = grid.size();
  std::vector<cplx> out(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const auto x = grid.point(k);
    out[k] = f(x);
  }
  return out;
}

namespace detail {

inline std::vector<AliasTable> build_alias_tables(const WeightedSpace& space, const RegularGrid& grid, double cutoff) {
  check_grid(space, grid);
  std::vector<AliasTable> tables;
  tables.reserve(space.dim());
  // Per-coordinate budget so that the product of s factors stays within cutoff.
  const double per = cutoff / static_cast<double>(space.dim());
  for (std::size_t j = 0; j < space.dim(); ++j) tables.emplace_back(space, j, grid.mesh(j), per);
  return tables;
}

// sum_r coeff[r] prod_j phi_j[r_j], contracting the fastest axis first.
inline cplx contract(const RegularGrid& grid, std::vector<cplx> work, const std::vector<std::vector<cplx>>& phi) {
  std::uint64_t len = work.size();
  for (std::size_t j = 0; j < grid.dim(); ++j) {
    const auto m = static_cast<std::uint64_t>(grid.mesh(j));
    const std::uint64_t out_len = len / m;
    for (std::uint64_t o = 0; o < out_len; ++o) {
      cplx acc = 0.0;
      for (std::uint64_t r = 0; r < m; ++r) acc += work[o * m + r] * phi[j][r];
      work[o] = acc;
    }
    len = out_len;
  }
  return work[0];
}

}  // namespace detail

class SplineInterpolant {
 public:
  SplineInterpolant(const WeightedSpace& space, RegularGrid grid, std::span<const cplx> samples,
                    double tail_cutoff = kDefaultTailCutoff)
      : grid_(std::move(grid)),
        tables_(detail::build_alias_tables(space, grid_, tail_cutoff)),
        coeffs_(grid_dft(grid_, samples)) {}

  const RegularGrid& grid() const { return grid_; }
  /// fhat_v in grid linear order.
  std::span<const cplx> dft() const { return coeffs_; }
  const std::vector<AliasTable>& alias_tables() const { return tables_; }

  cplx operator()(std::span<const double> x) const {
    if (x.size() != grid_.dim()) throw dimension_mismatch(grid_.dim(), x.size());
    std::vector<std::vector<cplx>> phi(grid_.dim());
    for (std::size_t j = 0; j < grid_.dim(); ++j) tables_[j].normalized_psi(x[j], phi[j]);
    return detail::contract(grid_, coeffs_, phi);
  }

  /// Squared norm in the space: sum_v |fhat_v|^2 / Omega_v.
  double norm_squared() const {
    CompensatedSum sum;
    const std::uint64_t n = coeffs_.size();
    for (std::uint64_t idx = 0; idx < n; ++idx) {
      const double a = std::norm(coeffs_[idx]);
      if (a == 0.0) continue;
      std::uint64_t rest = idx;
      double log_omega = 0.0;
      for (std::size_t j = 0; j < grid_.dim(); ++j) {
        const auto m = static_cast<std::uint64_t>(grid_.mesh(j));
        const auto& c = tables_[j].channels()[rest % m];
        log_omega += c.log_weight_v + std::log(c.rel_total);
        rest /= m;
      }
      sum.add(std::exp(std::log(a) - log_omega));
    }
    return sum.value();
  }

 private:
  RegularGrid grid_;
  std::vector<AliasTable> tables_;
  std::vector<cplx> coeffs_;
};

inline SplineInterpolant interpolate(const WeightedSpace& space, const RegularGrid& grid,
                                     std::span<const cplx> samples, double tail_cutoff = kDefaultTailCutoff) {
  return SplineInterpolant(space, grid, samples, tail_cutoff);
}

/// Power function of the grid spline through the alias-class factorization.
class PowerFunction {
 public:
  PowerFunction(const WeightedSpace& space, const RegularGrid& grid, double tail_cutoff = kDefaultTailCutoff)
      : tables_(detail::build_alias_tables(space, grid, tail_cutoff)) {
    totals_.reserve(space.dim());
    for (std::size_t j = 0; j < space.dim(); ++j) totals_.push_back(std::exp(coord_log_total(space, j)));
  }

  /// P(x) = sum_j (A_j - B_j) prod_{i<j} B_i prod_{i>j} A_i.
  double operator()(std::span<const double> x) const {
    const std::size_t s = tables_.size();
    if (x.size() != s) throw dimension_mismatch(s, x.size());
    std::vector<double> defect(s);
    for (std::size_t j = 0; j < s; ++j) defect[j] = tables_[j].power_defect(x[j]);
    std::vector<double> suffix(s + 1, 1.0);
    for (std::size_t j = s; j-- > 0;) suffix[j] = suffix[j + 1] * totals_[j];
    CompensatedSum sum;
    double prefix = 1.0;
    for (std::size_t j = 0; j < s; ++j) {
      sum.add(defect[j] * prefix * suffix[j + 1]);
      prefix *= std::max(0.0, totals_[j] - defect[j]);
    }
    return std::max(0.0, sum.value());
  }

 private:
  std::vector<AliasTable> tables_;
  std::vector<double> totals_;
};

inline double power_function(const WeightedSpace& space, const RegularGrid& grid, std::span<const double> x,
                             double tail_cutoff = kDefaultTailCutoff) {
  return PowerFunction(space, grid, tail_cutoff)(x);
}

// ---------------------------------------------------------------------------
// Dense kernel-matrix route

inline constexpr std::uint64_t kMaxGramSize = 4096;

/// Interpolant sum_r c_r K(x, x_r) with G c = samples, G_{jr} = K(x_j, x_r).
class GramInterpolant {
 public:
  GramInterpolant(const WeightedSpace& space, const RegularGrid& grid, std::span<const double> samples,
                  double kernel_tol = 1e-14)
      : kernel_(space, kernel_tol) {
    detail::check_grid(space, grid);
    const std::uint64_t n = grid.size();
    if (n > kMaxGramSize) throw resource_cap_exceeded("grid too large for the dense kernel matrix", n);
    if (samples.size() != n) throw precondition_error("sample count does not match the grid");
    nodes_.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) nodes_.push_back(grid.point(k));
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd g(nn, nn);
    for (Eigen::Index r = 0; r < nn; ++r)
      for (Eigen::Index c = 0; c <= r; ++c) g(r, c) = g(c, r) = kernel_(nodes_[r], nodes_[c]);
    llt_.compute(g);
    const double rc = llt_.info() == Eigen::Success ? llt_.rcond() : 0.0;
    if (llt_.info() != Eigen::Success || !(rc > 64.0 * std::numeric_limits<double>::epsilon()))
      throw gram_conditioning_error("kernel matrix is numerically singular", rc);
    rcond_ = rc;
    Eigen::VectorXd rhs(nn);
    for (Eigen::Index r = 0; r < nn; ++r) rhs(r) = samples[static_cast<std::size_t>(r)];
    coeffs_ = llt_.solve(rhs);
  }

  double rcond() const { return rcond_; }
  const Eigen::VectorXd& coefficients() const { return coeffs_; }

  double operator()(std::span<const double> x) const {
    CompensatedSum sum;
    for (std::size_t r = 0; r < nodes_.size(); ++r) sum.add(coeffs_(static_cast<Eigen::Index>(r)) * kernel_(x, nodes_[r]));
    return sum.value();
  }

  /// K(x, x) - k_x^T G^{-1} k_x, clamped at zero when rounding drives it
  /// slightly negative.
  double power_function(std::span<const double> x) const {
    const auto nn = static_cast<Eigen::Index>(nodes_.size());
    Eigen::VectorXd k(nn);
    for (Eigen::Index r = 0; r < nn; ++r) k(r) = kernel_(x, nodes_[r]);
    const Eigen::VectorXd y = llt_.matrixL().solve(k);
    const double p = kernel_.diagonal() - y.squaredNorm();
    if (p < -1e-9 * kernel_.diagonal()) throw certification_failure("power function is negative beyond rounding");
    return std::max(0.0, p);
  }

 private:
  KernelEvaluator kernel_;
  std::vector<std::vector<double>> nodes_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd coeffs_;
  double rcond_ = 0.0;
};

inline GramInterpolant gram_oracle(const WeightedSpace& space, const RegularGrid& grid,
                                   std::span<const double> samples, double kernel_tol = 1e-14) {
  return GramInterpolant(space, grid, samples, kernel_tol);
}

/// Power function through the dense kernel matrix.
inline double gram_power_function(const WeightedSpace& space, const RegularGrid& grid, std::span<const double> x,
                                  double kernel_tol = 1e-14) {
  std::vector<double> zeros(grid.size(), 0.0);
  return GramInterpolant(space, grid, zeros, kernel_tol).power_function(x);
}

// ---------------------------------------------------------------------------
// Sampling the worst case

/// Halton sequence in the first `dim` prime bases with a Cranley-Patterson
/// shift drawn from a seeded mt19937_64.
class HaltonSequence {
 public:
  HaltonSequence(std::size_t dim, std::uint64_t seed) {
    detail::require(dim >= 1, "dimension must be positive");
    std::mt19937_64 gen(seed);
    for (std::uint64_t c = 2; bases_.size() < dim; ++c) {
      bool prime = true;
      for (auto p : bases_)
        if (c % p == 0) {
          prime = false;
          break;
        }
      if (prime) bases_.push_back(c);
    }
    for (std::size_t j = 0; j < dim; ++j) shift_.push_back(static_cast<double>(gen() >> 11) * 0x1.0p-53);
  }

  std::size_t dim() const { return bases_.size(); }

  /// Point number i (i >= 0); index i uses the radical inverse of i + 1.
  std::vector<double> point(std::uint64_t i) const {
    std::vector<double> x(bases_.size());
    for (std::size_t j = 0; j < bases_.size(); ++j) {
      const std::uint64_t b = bases_[j];
      double f = 1.0;
      double r = 0.0;
      for (std::uint64_t k = i + 1; k > 0; k /= b) {
        f /= static_cast<double>(b);
        r += f * static_cast<double>(k % b);
      }
      r += shift_[j];
      x[j] = r - std::floor(r);
    }
    return x;
  }

 private:
  std::vector<std::uint64_t> bases_;
  std::vector<double> shift_;
};

struct WorstCaseEstimate {
  double lower = 0.0;         // max over the sample of sqrt(P(x))
  double upper = 0.0;         // 2 sqrt(sum_{h not in V_n} omega_h)
  double fn_bound = 0.0;      // 2 sqrt(n F_n)
  std::vector<double> argmax;
};

/// Sampled sup of sqrt(P(x)) for the grid spline (a lower estimate of its
/// worst-case L-infinity error), paired with the analytic upper bounds.
inline WorstCaseEstimate empirical_wc_error(const WeightedSpace& space, const RegularGrid& grid,
                                            std::size_t sample_count, std::uint64_t seed = 0,
                                            double tail_cutoff = kDefaultTailCutoff) {
  detail::require(sample_count >= 1, "sample count must be positive");
  const PowerFunction pf(space, grid, tail_cutoff);
  const HaltonSequence seq(space.dim(), seed);
  WorstCaseEstimate est;
  double best = -1.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    auto x = seq.point(i);
    const double p = pf(x);
    if (p > best) {
      best = p;
      est.argmax = std::move(x);
    }
  }
  est.lower = std::sqrt(std::max(0.0, best));
  est.upper = alias_error_bound(space, grid);
  est.fn_bound = fn_error_bound(space, grid);
  return est;
}

}  // namespace korobov
