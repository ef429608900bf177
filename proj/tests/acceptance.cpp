// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "korobov/korobov.hpp"
#include "korobov/oracle.hpp"

using namespace korobov;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

std::vector<double> log_grid(double hi, double lo, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(std::exp(std::log(hi) + (std::log(lo) - std::log(hi)) * i / (count - 1)));
  return out;
}

// Spaces used by several sweeps.
std::vector<WeightedSpace> sweep_spaces() {
  std::vector<WeightedSpace> out;
  for (std::size_t s : {1u, 2u, 3u}) {
    out.emplace_back(s, 0.5, SequenceFamily::constant(1.0), SequenceFamily::constant(1.0));
    out.emplace_back(s, 0.3, SequenceFamily::linear(1.0), SequenceFamily::constant(1.0));
    out.emplace_back(s, 0.7, SequenceFamily::constant(1.0), SequenceFamily::power(2.0));
    out.emplace_back(s, 0.5, SequenceFamily::exponential(1.0), SequenceFamily::power(2.0));
  }
  return out;
}

Outcome spectral_oracle() {
  const auto t0 = Clock::now();
  Outcome o;
  const std::vector<std::pair<SequenceFamily, SequenceFamily>> families{
      {SequenceFamily::constant(1.0), SequenceFamily::constant(1.0)},
      {SequenceFamily::linear(1.0), SequenceFamily::constant(1.0)},
      {SequenceFamily::constant(1.0), SequenceFamily::linear(1.0)},
      {SequenceFamily::linear(1.0), SequenceFamily::linear(1.0)},
  };
  const std::size_t k = 1000;
  std::size_t mismatches = 0;
  for (std::size_t s : {1u, 2u, 3u})
    for (const auto& [a, b] : families) {
      const WeightedSpace sp(s, 0.5, a, b);
      Spectrum spec(sp);
      spec.extend_to(k);
      const double kth = spec.term(k).exponent;
      const auto box = oracle::brute_spectrum(sp, oracle::certified_half_width(sp, kth), k);
      for (std::size_t i = 0; i < k; ++i) {
        const double e = spec.terms()[i].exponent;
        if (std::abs(e - box.exponents[i]) > 1e-14 * std::max(1.0, std::abs(e))) ++mismatches;
      }
    }
  const double secs = seconds_since(t0);
  o.pass = mismatches == 0 && secs < 30.0;
  o.detail = "12 spaces, k=1000, mismatches=" + std::to_string(mismatches) + ", " + fmt("%.2f s", secs);
  return o;
}

Outcome closed_forms() {
  Outcome o;
  double worst = 0.0;
  for (double omega : {0.2, 0.5, 0.8})
    for (std::size_t s = 1; s <= 12; ++s) {
      const WeightedSpace sp(s, omega, SequenceFamily::constant(1.0), SequenceFamily::constant(1.0));
      const double expected = std::pow(1.0 + 2.0 * omega / (1.0 - omega), 0.5 * static_cast<double>(s));
      Spectrum spec(sp);
      worst = std::max(worst, std::abs(initial_error_linf(sp) / expected - 1.0));
      worst = std::max(worst, std::abs(error_linf_all(spec, 0) / expected - 1.0));
    }
  o.pass = worst <= 1e-10;
  o.detail = "max relative deviation " + fmt("%.3g", worst);
  return o;
}

Outcome orderings() {
  Outcome o;
  std::size_t points = 0;
  std::size_t violations = 0;
  const auto eps_grid = log_grid(0.9, 1e-4, 12);
  for (const auto& sp : sweep_spaces()) {
    Spectrum spec(sp);
    for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 13u, 30u, 100u}) {
      ++points;
      if (error_l2_all(spec, n) > error_linf_all(spec, n)) ++violations;
    }
    for (double eps : eps_grid)
      for (auto problem : {Problem::l2, Problem::linf}) {
        ++points;
        const auto nn = complexity(spec, eps, problem, Criterion::norm);
        const auto na = complexity(spec, eps, problem, Criterion::abs);
        if (nn.n_lo > na.n_hi) ++violations;
      }
  }
  o.pass = points >= 200 && violations == 0;
  o.detail = std::to_string(points) + " points, " + std::to_string(violations) + " violations";
  return o;
}

Outcome rate_recovery() {
  const auto t0 = Clock::now();
  Outcome o;
  struct Case {
    std::vector<double> b;
    double tol;
  };
  const std::vector<Case> cases{{{1.0}, 0.15}, {{1.0, 2.0}, 0.20}, {{1.0, 2.0, 4.0}, 0.20}};
  const auto sizes = log_spaced_sizes(10000, 25);
  for (const auto& c : cases) {
    const WeightedSpace sp(c.b.size(), 0.5, SequenceFamily::constant(1.0), SequenceFamily::explicit_values(c.b));
    Spectrum spec(sp);
    const auto fit = fit_rate(linf_rate_samples(spec, sizes));
    const double target = optimal_rate(diagnostics(sp));
    const double rel = std::abs(fit.p - target) / target;
    if (rel > c.tol) o.pass = false;
    o.detail += "s=" + std::to_string(c.b.size()) + " p=" + fmt("%.4f", fit.p) + " (1/B=" + fmt("%.4f", target) +
                ", " + fmt("%.1f%%", 100.0 * rel) + ") ";
  }
  const double secs = seconds_since(t0);
  if (secs >= 120.0) o.pass = false;
  o.detail += fmt("%.2f s", secs);
  return o;
}

Outcome bound_chain() {
  Outcome o;
  struct Case {
    WeightedSpace sp;
    std::vector<std::int64_t> mesh;
  };
  std::vector<Case> cases;
  const auto mild1 = WeightedSpace(1, 0.6, SequenceFamily::constant(1.0), SequenceFamily::constant(1.0));
  const auto mild2 = WeightedSpace(2, 0.5, SequenceFamily::linear(1.0), SequenceFamily::constant(1.0));
  const auto mild3 = WeightedSpace(3, 0.6, SequenceFamily::constant(1.0), SequenceFamily::linear(0.5));
  const auto steep2 = WeightedSpace(2, 0.4, SequenceFamily::exponential(0.5), SequenceFamily::power(2.0));
  for (std::int64_t m : {1, 2, 5, 8, 13, 16}) cases.push_back({mild1, {m}});
  for (const std::vector<std::int64_t>& m : {std::vector<std::int64_t>{2, 2}, {4, 2}, {5, 3}, {8, 8}, {7, 1}})
    cases.push_back({mild2, m});
  for (const std::vector<std::int64_t>& m : {std::vector<std::int64_t>{2, 2, 2}, {4, 2, 1}, {3, 3, 3}, {4, 4, 4}})
    cases.push_back({mild3, m});
  for (const std::vector<std::int64_t>& m : {std::vector<std::int64_t>{3, 1}, {6, 2}, {9, 3}, {40, 10}, {101, 5}})
    cases.push_back({steep2, m});

  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::size_t chain_violations = 0;
  double worst_residual = 0.0;
  double worst_gap = 0.0;
  std::size_t gram_cases = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& sp = cases[c].sp;
    const RegularGrid grid(cases[c].mesh);
    const auto est = empirical_wc_error(sp, grid, 512, c);
    if (est.lower > est.upper * (1.0 + 1e-12) || est.upper > est.fn_bound * (1.0 + 1e-12)) ++chain_violations;

    std::vector<cplx> samples(grid.size());
    for (auto& z : samples) z = {u(gen), 0.0};
    const SplineInterpolant spl(sp, grid, samples);
    for (std::uint64_t k = 0; k < grid.size(); ++k)
      worst_residual = std::max(worst_residual, std::abs(spl(grid.point(k)) - samples[k]));

    if (grid.size() <= 64) {
      ++gram_cases;
      std::vector<double> real(samples.size());
      for (std::size_t i = 0; i < real.size(); ++i) real[i] = samples[i].real();
      const auto gram = gram_oracle(sp, grid, real);
      const PowerFunction pf(sp, grid);
      const HaltonSequence seq(sp.dim(), 99 + c);
      for (std::uint64_t i = 0; i < 64; ++i) {
        const auto x = seq.point(i);
        worst_gap = std::max(worst_gap, std::abs(spl(x).real() - gram(x)));
        worst_gap = std::max(worst_gap, std::abs(pf(x) - gram.power_function(x)));
      }
    }
  }
  o.pass = cases.size() >= 20 && chain_violations == 0 && worst_residual <= 1e-8 && worst_gap <= 1e-8;
  o.detail = std::to_string(cases.size()) + " grids, chain violations " + std::to_string(chain_violations) +
             ", max residual " + fmt("%.3g", worst_residual) + ", max fast/Gram gap " + fmt("%.3g", worst_gap) +
             " over " + std::to_string(gram_cases) + " grids";
  return o;
}

Outcome construction_guarantees() {
  Outcome o;
  std::size_t misses = 0;
  std::size_t checked = 0;
  for (std::size_t s : {1u, 2u, 4u})
    for (const auto& sp : {WeightedSpace(s, 0.5, SequenceFamily::linear(1.0), SequenceFamily::linear(1.0)),
                           WeightedSpace(s, 0.5, SequenceFamily::constant(1.0), SequenceFamily::constant(1.0))})
      for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        ++checked;
        const auto d = mesh_uexp(sp, eps);
        if (!(fn_error_bound(sp, d.grid) <= eps)) ++misses;
      }

  const WeightedSpace ex(16, 0.5, SequenceFamily::exponential(1.0), SequenceFamily::power(2.0));
  const double beta = 0.5;
  const double delta = 1.0;
  std::vector<double> xs;
  std::vector<double> ys;
  for (double eps : log_grid(1e-1, 1e-8, 15)) {
    const auto d = mesh_spt(ex, eps, beta);
    xs.push_back(std::log(1.0 + std::log(1.0 / eps)));
    ys.push_back(d.grid.log_size());
  }
  const double measured = slope(xs, ys);
  const double limit = *ex.b_family().reciprocal_sum() + std::log(3.0) / (beta * delta) + 0.15;
  o.pass = misses == 0 && measured <= limit;
  o.detail = "uexp " + std::to_string(checked - misses) + "/" + std::to_string(checked) +
             " grids meet eps; spt slope " + fmt("%.3f", measured) + " <= " + fmt("%.3f", limit);
  return o;
}

Outcome lower_bound() {
  Outcome o;
  std::size_t points = 0;
  std::size_t violations = 0;
  for (const auto& sp : sweep_spaces()) {
    Spectrum spec(sp);
    double prod = 1.0;
    for (std::size_t j = 0; j < sp.dim(); ++j) prod *= 1.0 + 2.0 * std::pow(sp.omega(), sp.a(j));
    for (double eps : log_grid(0.95, 1e-4, 15)) {
      ++points;
      const auto n = complexity(spec, eps, Problem::linf, Criterion::norm);
      if (static_cast<double>(n.n_lo) < (1.0 - eps * eps) * prod - 1.0) ++violations;
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(points) + " points, " + std::to_string(violations) + " violations";
  return o;
}

Outcome wt_bound() {
  Outcome o;
  std::size_t points = 0;
  std::size_t violations = 0;
  double tightest = kInf;
  for (const auto& sp : sweep_spaces()) {
    Spectrum spec(sp);
    for (double eps : log_grid(0.9, 1e-4, 10)) {
      const auto n = complexity(spec, eps, Problem::linf, Criterion::abs);
      for (double eta : {0.05, 0.1, 0.2}) {
        ++points;
        const double bound = wt_complexity_bound(sp, eps, eta);
        if (static_cast<double>(n.n_hi) > bound) ++violations;
        tightest = std::min(tightest, bound / std::max<double>(1.0, static_cast<double>(n.n_hi)));
      }
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(points) + " points, " + std::to_string(violations) + " violations, min bound/n " +
             fmt("%.3g", tightest);
  return o;
}

Outcome table_replication() {
  Outcome o;
  const auto H = Verdict::holds;
  const auto F = Verdict::fails;
  const auto P = Verdict::open;
  struct Row {
    const char* name;
    SequenceFamily a;
    SequenceFamily b;
    // L-infinity column, then L2 column, in table order
    std::vector<Verdict> linf;
    std::vector<Verdict> l2;
  };
  const std::vector<Row> rows{
      {"a=1, b=1", SequenceFamily::constant(1.0), SequenceFamily::constant(1.0),
       {H, F, F, F, F, F, F}, {H, F, H, P, F, F, F}},
      {"a=j, b=1", SequenceFamily::linear(1.0), SequenceFamily::constant(1.0),
       {H, F, H, H, H, F, F}, {H, F, H, P, H, F, F}},
      {"a=e^j, b=j^2", SequenceFamily::exponential(1.0), SequenceFamily::power(2.0),
       {H, H, H, H, H, H, H}, {H, H, H, P, H, H, H}},
      {"a=1, b=j^2", SequenceFamily::constant(1.0), SequenceFamily::power(2.0),
       {H, H, F, F, F, F, F}, {H, H, H, P, F, F, F}},
      {"a=j, b=j^2", SequenceFamily::linear(1.0), SequenceFamily::power(2.0),
       {H, H, H, H, H, F, F}, {H, H, H, P, H, F, F}},
      {"a=e^{j^2}, b=j^2", SequenceFamily::super_exponential(1.0), SequenceFamily::power(2.0),
       {H, H, H, H, H, H, H}, {H, H, H, P, H, H, H}},
  };
  std::size_t cells = 0;
  std::size_t wrong = 0;
  for (const auto& r : rows) {
    const auto table = comparison_table(verdicts(diagnostics(r.a, r.b, 6)));
    if (table.size() != 7) {
      wrong += 14;
      continue;
    }
    for (std::size_t i = 0; i < 7; ++i) {
      cells += 2;
      if (table[i].linf != r.linf[i]) {
        ++wrong;
        o.detail += std::string("[") + r.name + " " + table[i].property + " Linf] ";
      }
      if (table[i].l2 != r.l2[i]) {
        ++wrong;
        o.detail += std::string("[") + r.name + " " + table[i].property + " L2] ";
      }
    }
  }
  o.pass = wrong == 0;
  o.detail += std::to_string(cells) + " cells, " + std::to_string(wrong) + " mismatches";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"spectral oracle equivalence", spectral_oracle},
      {"closed-form initial errors", closed_forms},
      {"error and complexity orderings", orderings},
      {"exponential rate recovery", rate_recovery},
      {"grid bound chain and interpolation", bound_chain},
      {"construction guarantees", construction_guarantees},
      {"normalized complexity lower bound", lower_bound},
      {"weak tractability bound", wt_bound},
      {"tractability table", table_replication},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
