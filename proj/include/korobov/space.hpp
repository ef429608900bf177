#pragma once

// The weighted Korobov space H(K_{s,a,b}) with Fourier weights
//     omega_h = omega^{sum_j a_j |h_j|^{b_j}},   h in Z^s,
// its reproducing kernel and the per-coordinate series everything factorizes into.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "korobov/errors.hpp"
#include "korobov/numeric.hpp"
#include "korobov/sequence.hpp"

namespace korobov {

/// Default relative tolerance for every series in the library.
inline constexpr double kDefaultTol = 1e-14;

class WeightedSpace {
 public:
  WeightedSpace(std::size_t dim, double omega, SequenceFamily a, SequenceFamily b)
      : dim_(dim), omega_(omega), a_family_(std::move(a)), b_family_(std::move(b)) {
    detail::require(dim >= 1, "dimension must be positive");
    detail::require(omega > 0.0 && omega < 1.0, "omega must lie in (0, 1)");
    if (auto h = a_family_.horizon(); h && *h < dim)
      throw precondition_error("explicit a-sequence shorter than the dimension");
    if (auto h = b_family_.horizon(); h && *h < dim)
      throw precondition_error("explicit b-sequence shorter than the dimension");
    a_ = a_family_.take(dim);
    b_ = b_family_.take(dim);
    for (std::size_t j = 1; j < dim; ++j)
      detail::require(a_[j - 1] <= a_[j], "a-sequence must be nondecreasing");
    for (double bj : b_) detail::require(bj > 0.0 && std::isfinite(bj), "b_j must be positive and finite");
    a_star_ = *std::min_element(a_.begin(), a_.end());
    b_star_ = *std::min_element(b_.begin(), b_.end());
    log_inv_omega_ = -std::log(omega);
  }

  std::size_t dim() const { return dim_; }
  double omega() const { return omega_; }
  /// log(1/omega) > 0.
  double log_inv_omega() const { return log_inv_omega_; }
  std::span<const double> a() const { return a_; }
  std::span<const double> b() const { return b_; }
  double a(std::size_t j) const { return a_[j]; }
  double b(std::size_t j) const { return b_[j]; }
  double a_star() const { return a_star_; }
  double b_star() const { return b_star_; }
  const SequenceFamily& a_family() const { return a_family_; }
  const SequenceFamily& b_family() const { return b_family_; }

  /// Same omega and sequences in a different dimension.
  WeightedSpace with_dim(std::size_t s) const { return {s, omega_, a_family_, b_family_}; }

  /// Decay rate of coordinate j (zero-based): omega^{scale a_j h^{b_j}} = exp(-rate h^{b_j}).
  double rate(std::size_t j, double scale = 1.0) const { return scale * a_[j] * log_inv_omega_; }

  /// B(s) = sum_{j <= s} 1/b_j.
  double b_reciprocal_sum() const {
    CompensatedSum sum;
    for (double bj : b_) sum.add(1.0 / bj);
    return sum.value();
  }

 private:
  std::size_t dim_;
  double omega_;
  SequenceFamily a_family_;
  SequenceFamily b_family_;
  std::vector<double> a_;
  std::vector<double> b_;
  double a_star_ = 0.0;
  double b_star_ = 0.0;
  double log_inv_omega_ = 0.0;
};

/// A frequency vector with its exponent E(h) and log(1/omega_h) = E(h) log(1/omega).
struct FrequencyTerm {
  std::vector<std::int64_t> freq;
  double exponent = 0.0;
  double log_inv_eigenvalue = 0.0;  // stored nonnegated: omega_h = exp(-log_inv_eigenvalue)

  double eigenvalue() const { return std::exp(-log_inv_eigenvalue); }
};

/// E(h) = sum_j a_j |h_j|^{b_j}.
inline double exponent(const WeightedSpace& space, std::span<const std::int64_t> h) {
  if (h.size() != space.dim()) throw dimension_mismatch(space.dim(), h.size());
  double e = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] == 0) continue;
    e += space.a(j) * std::pow(static_cast<double>(h[j] < 0 ? -h[j] : h[j]), space.b(j));
  }
  return e;
}

inline FrequencyTerm make_term(const WeightedSpace& space, std::vector<std::int64_t> h) {
  const double e = exponent(space, h);
  return {std::move(h), e, e * space.log_inv_omega()};
}

/// log of sum_{h >= start} omega^{scale a_j h^{b_j}} for coordinate j (zero-based).
inline SeriesValue coord_log_series(const WeightedSpace& space, std::size_t j, std::uint64_t start,
                                    double scale = 1.0, double rel_tol = kDefaultTol) {
  detail::require(j < space.dim(), "coordinate index out of range");
  detail::require(scale > 0.0, "scale must be positive");
  return log_power_series(space.rate(j, scale), space.b(j), start, rel_tol);
}

/// T_j(scale) = sum_{h >= 1} omega^{scale a_j h^{b_j}} with absolute error <= tol.
inline double coord_series(const WeightedSpace& space, std::size_t j, double scale, double tol = kDefaultTol) {
  detail::require(tol > 0.0, "tolerance must be positive");
  double value = std::exp(coord_log_series(space, j, 1, scale, tol).log_value);
  // A relative bound of tol / T gives an absolute bound of tol.
  if (value > 1.0) value = std::exp(coord_log_series(space, j, 1, scale, tol / value).log_value);
  return value;
}

/// log(1 + 2 T_j(1)): the full coordinate sum over h in Z.
inline double coord_log_total(const WeightedSpace& space, std::size_t j, double rel_tol = kDefaultTol) {
  const double t = std::exp(coord_log_series(space, j, 1, 1.0, rel_tol).log_value);
  return std::log1p(2.0 * t);
}

/// log of the trace sum_h omega_h = prod_j (1 + 2 T_j(1)).
inline double log_trace(const WeightedSpace& space, double rel_tol = kDefaultTol) {
  CompensatedSum sum;
  for (std::size_t j = 0; j < space.dim(); ++j) sum.add(coord_log_total(space, j, rel_tol));
  return sum.value();
}

inline double trace(const WeightedSpace& space, double rel_tol = kDefaultTol) {
  return std::exp(log_trace(space, rel_tol));
}

/// The initial L-infinity error prod_j (1 + 2 T_j(1))^{1/2}, which equals the
/// norm of the embedding into L-infinity.
inline double initial_error_linf(const WeightedSpace& space, double tol = kDefaultTol) {
  return std::exp(0.5 * log_trace(space, tol / std::max<double>(1.0, space.dim())));
}

/// Evaluates K_{s,a,b}(x, y) = prod_j (1 + 2 sum_{h>=1} omega^{a_j h^{b_j}} cos(2 pi h (x_j - y_j))).
/// The per-coordinate cosine series are truncated once so that the product is
/// accurate to the requested absolute tolerance.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const WeightedSpace& space, double tol = 1e-14) : dim_(space.dim()) {
    detail::require(tol > 0.0, "kernel tolerance must be positive");
    const double tr = trace(space);
    diagonal_ = tr;
    // (1 + delta)^s - 1 <= 2 s delta for s delta <= 1, relative to the trace.
    const double per_factor = tol / (2.0 * static_cast<double>(dim_) * tr);
    coeffs_.resize(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      const double rate = space.rate(j);
      const double bj = space.b(j);
      for (std::uint64_t h = 1;; ++h) {
        const double c = std::exp(-rate * std::pow(static_cast<double>(h), bj));
        coeffs_[j].push_back(2.0 * c);
        const double tail = 2.0 * std::exp(log_power_series_majorant(rate, bj, h + 1));
        if (tail <= per_factor || c == 0.0) break;
      }
    }
  }

  std::size_t dim() const { return dim_; }
  /// K(x, x), independent of x.
  double diagonal() const { return diagonal_; }

  double factor(std::size_t j, double diff) const {
    CompensatedSum sum;
    const auto& c = coeffs_[j];
    // Smallest terms first.
    for (std::size_t h = c.size(); h-- > 0;)
      sum.add(c[h] * std::cos(2.0 * kPi * static_cast<double>(h + 1) * diff));
    sum.add(1.0);
    return sum.value();
  }

  double operator()(std::span<const double> x, std::span<const double> y) const {
    if (x.size() != dim_) throw dimension_mismatch(dim_, x.size());
    if (y.size() != dim_) throw dimension_mismatch(dim_, y.size());
    double k = 1.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      double d = x[j] - y[j];
      d -= std::floor(d);
      k *= factor(j, d);
    }
    return k;
  }

 private:
  std::size_t dim_;
  double diagonal_ = 0.0;
  std::vector<std::vector<double>> coeffs_;
};

/// K_{s,a,b}(x, y) with absolute error <= tol.
inline double kernel(const WeightedSpace& space, std::span<const double> x, std::span<const double> y,
                     double tol = 1e-12) {
  return KernelEvaluator(space, tol)(x, y);
}

}  // namespace korobov
