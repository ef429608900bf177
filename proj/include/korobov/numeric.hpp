#pragma once

// Log-domain helpers and certified evaluation of the one-dimensional series
//     sum_{h >= start} exp(-rate * h^power)
// that every product formula in the library is built from.

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include <boost/math/special_functions/gamma.hpp>

#include "korobov/errors.hpp"

namespace korobov {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kPi = 3.14159265358979323846;

/// log(exp(a) + exp(b)); either argument may be -inf.
inline double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -kInf) return a;
  return a + std::log1p(std::exp(b - a));
}

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Accumulates log(sum exp(x_i)) with a running maximum shift.
class LogSumAccumulator {
 public:
  void add(double log_x) { value_ = log_add_exp(value_, log_x); }
  double value() const { return value_; }

 private:
  double value_ = -kInf;
};

struct SeriesValue {
  double log_value;    // log of the series
  double rel_error;    // certified relative bound on the omitted tail
  std::uint64_t terms; // number of terms summed explicitly
};

namespace detail {

inline constexpr std::uint64_t kMaxSeriesTerms = 200'000'000;

// Upper bound for log Gamma(a, z), a >= 1.
inline double log_upper_gamma_bound(double a, double z) {
  if (z > 2.0 * (a - 1.0) && z > 0.0) {
    // Gamma(a, z) <= z^{a-1} e^{-z} / (1 - (a-1)/z) for z > a - 1.
    return (a - 1.0) * std::log(z) - z - std::log1p(-(a - 1.0) / z);
  }
  return boost::math::lgamma(a) + std::log(boost::math::gamma_q(a, z));
}

}  // namespace detail

/// Evaluates log sum_{h >= start} exp(-rate * h^power) with relative error at
/// most `rel_tol`. The cut-off is certified: for power >= 1 the remaining tail
/// is bounded by a geometric majorant along the secant slope of h^power, for
/// power < 1 by the integral of the (decreasing) summand.
inline SeriesValue log_power_series(double rate, double power, std::uint64_t start,
                                    double rel_tol = 1e-15) {
  detail::require(rate >= 0.0 && !std::isnan(rate), "series rate must be nonnegative");
  detail::require(power > 0.0, "series power must be positive");
  detail::require(rel_tol > 0.0, "series tolerance must be positive");
  if (std::isinf(rate)) return {start == 0 ? 0.0 : -kInf, 0.0, 1};
  detail::require(rate > 0.0, "series rate must be positive");

  const double base = rate * std::pow(static_cast<double>(start), power);
  CompensatedSum sum;
  for (std::uint64_t h = start;; ++h) {
    const double hp = std::pow(static_cast<double>(h), power);
    const double log_term = -(rate * hp - base);
    sum.add(std::exp(log_term));

    double log_tail;
    if (power >= 1.0) {
      const double step = rate * (std::pow(static_cast<double>(h + 1), power) - hp);
      // sum_{k>=1} rho^k = rho / (1 - rho), rho = exp(-step)
      log_tail = log_term - step - std::log(-std::expm1(-step));
    } else {
      const double a = 1.0 / power;
      log_tail = base + detail::log_upper_gamma_bound(a, rate * hp) - std::log(power) -
                 a * std::log(rate);
    }
    const double total = sum.value();
    const double rel = std::exp(log_tail) / total;
    if (rel <= rel_tol || log_tail == -kInf) {
      const std::uint64_t terms = h - start + 1;
      return {std::log(total) - base, rel, terms};
    }
    if (h - start > detail::kMaxSeriesTerms)
      throw resource_cap_exceeded("power series did not converge within the term cap",
                                  static_cast<std::size_t>(h - start));
  }
}

/// Closed-form upper bound for log sum_{h >= start} exp(-rate * h^power), start >= 1:
/// the first term plus the same majorants that certify log_power_series.
inline double log_power_series_majorant(double rate, double power, std::uint64_t start) {
  detail::require(start >= 1, "majorant needs start >= 1");
  detail::require(rate > 0.0 && power > 0.0, "rate and power must be positive");
  const double x = static_cast<double>(start);
  const double first = -rate * std::pow(x, power);
  if (power >= 1.0) {
    const double step = rate * (std::pow(x + 1.0, power) - std::pow(x, power));
    return first - std::log(-std::expm1(-step));
  }
  const double a = 1.0 / power;
  const double rest = detail::log_upper_gamma_bound(a, -first) - std::log(power) - a * std::log(rate);
  return log_add_exp(first, rest);
}

/// Plain-valued convenience: sum_{h >= start} exp(-rate * h^power).
inline double power_series(double rate, double power, std::uint64_t start, double rel_tol = 1e-15) {
  return std::exp(log_power_series(rate, power, start, rel_tol).log_value);
}

/// The smallest integer >= x, ignoring a relative rounding excess of `fuzz`.
inline double fuzzy_ceil(double x, double fuzz = 1e-12) {
  const double c = std::ceil(x);
  if (c - x > 1.0 - fuzz * std::max(1.0, std::abs(x))) return c - 1.0;
  return c;
}

}  // namespace korobov
