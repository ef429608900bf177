#pragma once

// n-th minimal worst-case errors and information complexities for
// L2- and L-infinity-approximation with arbitrary linear information, plus the
// bounds relating standard information to it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>

#include "korobov/errors.hpp"
#include "korobov/numeric.hpp"
#include "korobov/space.hpp"
#include "korobov/spectrum.hpp"

namespace korobov {

enum class Problem { l2, linf };
enum class Criterion { abs, norm };
enum class InfoClass { all, standard };

inline const char* to_string(Problem p) { return p == Problem::l2 ? "l2" : "linf"; }
inline const char* to_string(Criterion c) { return c == Criterion::abs ? "abs" : "norm"; }
inline const char* to_string(InfoClass c) { return c == InfoClass::all ? "all" : "std"; }

/// e(n) for L2 with arbitrary information: sqrt(lambda_{s,n+1}).
inline double error_l2_all(Spectrum& spectrum, std::size_t n) {
  return std::exp(-0.5 * spectrum.log_inv_eigenvalue(n + 1));
}

/// e(n) for L-infinity with arbitrary information: sqrt(sum_{k>n} lambda_{s,k}).
inline double error_linf_all(Spectrum& spectrum, std::size_t n) {
  return std::exp(0.5 * spectrum.log_tail_sum(n));
}

inline double log_error_linf_all(Spectrum& spectrum, std::size_t n) { return 0.5 * spectrum.log_tail_sum(n); }

inline double error_all(Spectrum& spectrum, std::size_t n, Problem problem) {
  return problem == Problem::l2 ? error_l2_all(spectrum, n) : error_linf_all(spectrum, n);
}

/// e(0): 1 for L2, sqrt(trace) for L-infinity.
inline double initial_error(const Spectrum& spectrum, Problem problem) {
  return problem == Problem::l2 ? 1.0 : std::exp(0.5 * spectrum.log_trace());
}

/// Smallest n with e(n) <= eps * CRI. When floating tolerances straddle the
/// threshold the answer is the interval [n_lo, n_hi]; otherwise n_lo == n_hi.
struct ComplexityResult {
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
  bool certified() const { return n_lo == n_hi; }
  std::size_t value() const { return n_hi; }
};

struct ComplexityOptions {
  /// Relative slack under which "error == threshold" still counts as met.
  double fuzz = 1e-10;
  std::size_t max_n = std::size_t{1} << 26;
};

/// n(eps) for the given problem and criterion. eps may equal 1, in which case
/// the threshold is exactly the (normalized) initial error.
inline ComplexityResult complexity(Spectrum& spectrum, double eps, Problem problem, Criterion criterion,
                                   ComplexityOptions options = {}) {
  detail::require(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
  // Work with squared errors in the log domain: log e(n)^2 <= log_thr.
  double log_thr = 2.0 * std::log(eps);
  if (criterion == Criterion::norm && problem == Problem::linf) log_thr += spectrum.log_trace();
  const double log_slack = std::log1p(options.fuzz);

  std::optional<std::size_t> n_lo;
  std::size_t chunk = 64;
  std::size_t n = 0;
  for (;;) {
    const std::size_t upto = std::min(options.max_n + 1, n + chunk);
    spectrum.extend_to(std::max<std::size_t>(upto, 1));
    for (; n < upto; ++n) {
      double log_value;
      double tol;
      if (problem == Problem::l2) {
        log_value = -spectrum.log_inv_eigenvalue(n + 1);
        tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, -log_value);
      } else {
        log_value = spectrum.log_tail_sum(n);
        tol = spectrum.tail_rel_tolerance();
      }
      if (!n_lo && log_value - tol <= log_thr + log_slack) n_lo = n;
      if (log_value + tol <= log_thr + log_slack) return {n_lo.value_or(n), n};
    }
    if (n > options.max_n)
      throw resource_cap_exceeded("complexity not certified within the index cap", n_lo.value_or(n));
    chunk *= 2;
  }
}

/// (1 - eps^2) prod_j (1 + 2 omega^{a_j}); the normalized L-infinity
/// complexity is at least this value minus one.
inline double lower_bound_norm(const WeightedSpace& space, double eps) {
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  CompensatedSum log_prod;
  for (std::size_t j = 0; j < space.dim(); ++j) log_prod.add(std::log1p(2.0 * std::exp(-space.rate(j))));
  return -std::expm1(2.0 * std::log(eps)) * std::exp(log_prod.value());
}

/// e(n) for L-infinity with arbitrary information plus n times a certified
/// upper bound for the L2 error with standard information; bounds the
/// L-infinity error with standard information.
inline double linf_std_error_bound(Spectrum& spectrum, std::size_t n, double l2_std_bound) {
  detail::require(l2_std_bound >= 0.0, "L2 bound must be nonnegative");
  return error_linf_all(spectrum, n) + static_cast<double>(n) * l2_std_bound;
}

/// C(x) = 2^{2x(2x+1) + x - 1/2} ((2x+1)/(2x-1))^{1/2} (1 + 1/(2x))^x for x > 1/2.
inline double log_decay_constant(double x) {
  detail::require(x > 0.5, "C(x) needs x > 1/2");
  return (2.0 * x * (2.0 * x + 1.0) + x - 0.5) * kLn2 + 0.5 * std::log((2.0 * x + 1.0) / (2.0 * x - 1.0)) +
         x * std::log1p(1.0 / (2.0 * x));
}
inline double decay_constant(double x) { return std::exp(log_decay_constant(x)); }

struct DecayBounds {
  double all;                      // arbitrary information
  std::optional<double> standard;  // standard information, needs beta > 3/2
};

/// Given lambda_{s,n} <= M^2 / n^{2 beta} for all n, returns
///   M / sqrt(2 beta - 1) n^{-(beta - 1/2)}  and  M (sqrt(2)/2 + C(beta)) n^{-(beta - 3/2)}.
inline DecayBounds decay_bounds(std::size_t n, double beta, double m_const) {
  detail::require(n >= 1, "n must be positive");
  detail::require(beta > 0.5, "beta must exceed 1/2");
  detail::require(m_const > 0.0, "M must be positive");
  const double ln = std::log(static_cast<double>(n));
  DecayBounds r;
  r.all = std::exp(std::log(m_const) - 0.5 * std::log(2.0 * beta - 1.0) - (beta - 0.5) * ln);
  if (beta > 1.5) {
    const double log_c = log_decay_constant(beta);
    const double log_factor = log_add_exp(std::log(std::sqrt(2.0) / 2.0), log_c);
    r.standard = std::exp(std::log(m_const) + log_factor - (beta - 1.5) * ln);
  }
  return r;
}

/// beta and M such that lambda_{s,n} <= M^2 / n^{2 beta}, read off the
/// eigenvalue bound with parameter eta: beta = 1/(2 eta), M = prod^{1/(2 eta)}.
inline std::pair<double, double> decay_parameters(const WeightedSpace& space, double eta) {
  const double log_m2 = log_eigenvalue_upper_bound(space, 1, eta);
  return {0.5 / eta, std::exp(0.5 * log_m2)};
}

/// Complexities for L_p, 2 <= p <= infinity, lie between the L2 and the
/// L-infinity values; only this bracket is computed.
struct LpBracket {
  ComplexityResult l2;
  ComplexityResult linf;
};

inline LpBracket lp_complexity_bracket(Spectrum& spectrum, double eps, Criterion criterion,
                                       ComplexityOptions options = {}) {
  return {complexity(spectrum, eps, Problem::l2, criterion, options),
          complexity(spectrum, eps, Problem::linf, criterion, options)};
}

}  // namespace korobov
