#pragma once

// Tractability diagnostics (B(s), B, alpha*), the verdict table for
// L-infinity and L2 approximation, the EC-SPT exponent interval, empirical
// exponential-rate fitting and the kappa-EC-WT complexity bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "korobov/errors.hpp"
#include "korobov/minimal_errors.hpp"
#include "korobov/numeric.hpp"
#include "korobov/sequence.hpp"
#include "korobov/space.hpp"
#include "korobov/spectrum.hpp"

namespace korobov {

struct Diagnostics {
  std::size_t s = 0;
  double b_s = 0.0;                  // sum_{j<=s} 1/b_j
  std::optional<double> b_total;     // sum_j 1/b_j (+inf if divergent), nullopt if unknowable
  std::optional<double> alpha_star;  // liminf log(a_j)/j, nullopt if unknowable
  Tri a_unbounded = Tri::unknown;    // lim a_j = infinity
};

inline Diagnostics diagnostics(const SequenceFamily& a, const SequenceFamily& b, std::size_t s) {
  detail::require(s >= 1, "dimension must be positive");
  if (auto h = a.horizon(); h && *h < s) throw precondition_error("a-sequence horizon below s");
  if (auto h = b.horizon(); h && *h < s) throw precondition_error("b-sequence horizon below s");
  Diagnostics d;
  d.s = s;
  CompensatedSum sum;
  for (std::size_t j = 1; j <= s; ++j) sum.add(1.0 / b(j));
  d.b_s = sum.value();
  d.b_total = b.reciprocal_sum();
  d.alpha_star = a.log_growth_liminf();
  d.a_unbounded = a.diverges();
  return d;
}

inline Diagnostics diagnostics(const WeightedSpace& space) {
  return diagnostics(space.a_family(), space.b_family(), space.dim());
}

enum class Verdict { holds, fails, undetermined, open };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::undetermined: return "undetermined";
    case Verdict::open: return "open";
  }
  return "undetermined";
}

namespace detail {

inline Verdict from_tri(Tri t) {
  switch (t) {
    case Tri::yes: return Verdict::holds;
    case Tri::no: return Verdict::fails;
    case Tri::unknown: return Verdict::undetermined;
  }
  return Verdict::undetermined;
}

inline Verdict both(Verdict x, Verdict y) {
  if (x == Verdict::fails || y == Verdict::fails) return Verdict::fails;
  if (x == Verdict::holds && y == Verdict::holds) return Verdict::holds;
  return Verdict::undetermined;
}

}  // namespace detail

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Verdicts {
  Verdict exp = Verdict::holds;
  Verdict uexp = Verdict::undetermined;
  Verdict ec_wt = Verdict::undetermined;
  Verdict ec_pt = Verdict::undetermined;
  Verdict ec_spt = Verdict::undetermined;
  Verdict ec_wt_uexp = Verdict::undetermined;
  Verdict ec_spt_uexp = Verdict::undetermined;
  // kappa-EC-WT with kappa > 1, per problem and information class
  Verdict kappa_wt_linf = Verdict::undetermined;
  Verdict kappa_wt_l2_all = Verdict::holds;
  Verdict kappa_wt_l2_std = Verdict::open;
  // EC-SPT exponent, present when EC-SPT holds
  std::optional<Interval> tau_linf;
  std::optional<Interval> tau_l2;
};

inline Verdicts verdicts(const Diagnostics& d) {
  Verdicts v;
  Verdict b_finite = Verdict::undetermined;
  if (d.b_total) b_finite = std::isfinite(*d.b_total) ? Verdict::holds : Verdict::fails;
  Verdict alpha_pos = Verdict::undetermined;
  if (d.alpha_star) alpha_pos = *d.alpha_star > 0.0 ? Verdict::holds : Verdict::fails;
  const Verdict a_inf = detail::from_tri(d.a_unbounded);

  v.uexp = b_finite;
  v.ec_wt = a_inf;
  v.kappa_wt_linf = a_inf;
  v.ec_spt = detail::both(b_finite, alpha_pos);
  v.ec_pt = v.ec_spt;
  v.ec_wt_uexp = detail::both(a_inf, b_finite);
  v.ec_spt_uexp = v.ec_spt;
  if (v.ec_spt == Verdict::holds) {
    const double b = *d.b_total;
    const double alpha = *d.alpha_star;
    const double gap = std::isinf(alpha) ? 0.0 : std::log(3.0) / alpha;
    v.tau_linf = Interval{b, b + gap};
    v.tau_l2 = Interval{b, b + std::min(b, gap)};
  }
  return v;
}

/// One row of the L-infinity / L2 comparison table.
struct TableRow {
  std::string property;
  Verdict linf;
  Verdict l2;
};

inline std::vector<TableRow> comparison_table(const Verdicts& v) {
  return {
      {"EXP", v.exp, v.exp},
      {"UEXP", v.uexp, v.uexp},
      {"kappa-EC-WT (kappa>1), all", v.kappa_wt_linf, v.kappa_wt_l2_all},
      {"kappa-EC-WT (kappa>1), std", v.kappa_wt_linf, v.kappa_wt_l2_std},
      {"EC-WT", v.ec_wt, v.ec_wt},
      {"EC-PT", v.ec_pt, v.ec_pt},
      {"EC-SPT", v.ec_spt, v.ec_spt},
  };
}

/// p*(s) = 1/B(s), the best uniform exponential-convergence exponent in dimension s.
inline double optimal_rate(const Diagnostics& d) { return 1.0 / d.b_s; }

// ---------------------------------------------------------------------------
// Rate fitting

struct RateSample {
  double n;
  double log_error;
  double rel_tolerance = 0.0;
};

struct RateFit {
  double p = 0.0;
  double log_log_inv_q = 0.0;  // intercept: log log(1/q) with C1 = 1
  double q = 0.0;
  double c = 1.0;
  double c1 = 1.0;
  double residual = 0.0;       // RMS residual of the tail-half regression
  std::size_t used = 0;
};

/// Fits e(n) ~ C q^{n^p} (C1 = 1) by least squares of log log(C/e(n)) on log n
/// over the tail half of the samples. C defaults to 1 when every error is below
/// 1 and to e times the largest error otherwise.
inline RateFit fit_rate(std::vector<RateSample> samples, std::optional<double> log_c = {}) {
  detail::require(samples.size() >= 6, "rate fit needs at least 6 samples");
  std::sort(samples.begin(), samples.end(), [](const RateSample& x, const RateSample& y) { return x.n < y.n; });
  detail::require(samples.front().n >= 1.0, "sample sizes must be at least 1");
  detail::require(samples.back().n >= 100.0 * samples.front().n, "samples must span two decades of n");
  double max_log = -kInf;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& smp = samples[i];
    if (!(smp.rel_tolerance <= 1e-6)) throw precondition_error("sample not certified to 1e-6 relative");
    if (!std::isfinite(smp.log_error)) throw precondition_error("saturated or non-finite error sample");
    if (i > 0 && !(smp.log_error < samples[i - 1].log_error))
      throw precondition_error("errors must be strictly decreasing in n");
    max_log = std::max(max_log, smp.log_error);
  }
  RateFit fit;
  const double lc = log_c.value_or(max_log < 0.0 ? 0.0 : 1.0 + max_log);
  fit.c = std::exp(lc);
  const std::size_t first = samples.size() / 2;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = first; i < samples.size(); ++i) {
    const double gap = lc - samples[i].log_error;
    if (!(gap > 0.0)) throw precondition_error("error sample exceeds the constant C");
    xs.push_back(std::log(samples[i].n));
    ys.push_back(std::log(gap));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  detail::require(sxx > 0.0, "tail samples must have distinct n");
  fit.p = sxy / sxx;
  fit.log_log_inv_q = my - fit.p * mx;
  fit.q = std::exp(-std::exp(fit.log_log_inv_q));
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.log_log_inv_q + fit.p * xs[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / k);
  fit.used = xs.size();
  return fit;
}

/// Roughly log-spaced sample sizes 1 <= n <= n_max, `count` of them, deduplicated.
inline std::vector<std::size_t> log_spaced_sizes(std::size_t n_max, std::size_t count) {
  detail::require(n_max >= 1 && count >= 2, "need n_max >= 1 and at least two sizes");
  std::vector<std::size_t> out;
  const double top = std::log(static_cast<double>(n_max));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = top * static_cast<double>(i) / static_cast<double>(count - 1);
    const auto n = static_cast<std::size_t>(std::llround(std::exp(t)));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

/// Samples of the L-infinity error with arbitrary information at the given sizes.
inline std::vector<RateSample> linf_rate_samples(Spectrum& spectrum, const std::vector<std::size_t>& sizes) {
  std::vector<RateSample> out;
  if (!sizes.empty()) spectrum.extend_to(*std::max_element(sizes.begin(), sizes.end()));
  for (auto n : sizes) {
    const double le = log_error_linf_all(spectrum, n);
    out.push_back({static_cast<double>(n), le, 0.5 * spectrum.tail_rel_tolerance()});
  }
  return out;
}

// ---------------------------------------------------------------------------
// kappa-EC-WT

/// log of (bound - 1), where
///   bound = 1 + ((sqrt(2)/2 + C(1/(2 eta))) eps^{-1} prod_j (1 + 2 D_eta omega^{eta a_j})^{1/(2 eta)})^{2 eta/(1 - 3 eta)}
/// bounds the absolute L-infinity complexity with standard information
/// (and hence with arbitrary information).
inline double log_wt_complexity_excess(const WeightedSpace& space, double eps, double eta) {
  detail::require(eta > 0.0 && eta < 1.0 / 3.0, "eta must lie in (0, 1/3)");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  const double d = d_eta(space, eta);
  CompensatedSum log_prod;
  for (std::size_t j = 0; j < space.dim(); ++j)
    log_prod.add(std::log1p(2.0 * d * std::exp(-eta * space.rate(j))));
  const double log_lead = log_add_exp(std::log(std::sqrt(2.0) / 2.0), log_decay_constant(0.5 / eta));
  const double inner = log_lead - std::log(eps) + log_prod.value() / (2.0 * eta);
  return inner * 2.0 * eta / (1.0 - 3.0 * eta);
}

inline double wt_complexity_bound(const WeightedSpace& space, double eps, double eta) {
  return 1.0 + std::exp(log_wt_complexity_excess(space, eps, eta));
}

}  // namespace korobov
