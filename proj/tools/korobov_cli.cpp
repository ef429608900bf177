// korobov-cli: minimal errors, complexities, grid designs and tractability
// reports for Korobov spaces with exponential weights.
//
// Exit status: 0 success, 2 usage or malformed input, 3 certification
// failure, 4 resource cap reached.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "korobov/io.hpp"
#include "korobov/korobov.hpp"
#include "korobov/oracle.hpp"

namespace {

using namespace korobov;
using json = nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitCertification = 3;
constexpr int kExitResource = 4;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw usage_error("not a number: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw usage_error("not a number: '" + s + "'");
  }
}

long long parse_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw usage_error("not an integer: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw usage_error("not an integer: '" + s + "'");
  }
}

// "0.1,0.01" or "hi:lo:count" (log-spaced, inclusive).
std::vector<double> parse_eps(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw usage_error("eps range must be HI:LO:COUNT");
    const double hi = parse_double(parts[0]);
    const double lo = parse_double(parts[1]);
    const long long count = parse_int(parts[2]);
    if (!(hi > 0.0 && lo > 0.0) || count < 1) throw usage_error("eps range needs positive bounds and count");
    for (long long i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(std::pow(10.0, std::log10(hi) + t * (std::log10(lo) - std::log10(hi))));
    }
  } else {
    for (const auto& p : split(text, ',')) out.push_back(parse_double(p));
  }
  if (out.empty()) throw usage_error("empty eps list");
  return out;
}

template <class T>
std::vector<T> parse_int_list(const std::string& text) {
  std::vector<T> out;
  for (const auto& p : split(text, ',')) {
    const long long v = parse_int(p);
    if (v < 0) throw usage_error("negative value in list");
    out.push_back(static_cast<T>(v));
  }
  return out;
}

struct Common {
  std::string space_file;
  std::string s_list;
  std::string eps = "0.1";
  std::string problem = "linf";
  std::string criterion = "abs";
  std::string info_class = "all";
  std::string out;
  std::string format = "csv";
  std::optional<double> beta;
  std::optional<double> omega1;
  std::uint64_t seed = 0;
  bool verify = false;
  std::size_t s_max = 16;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw usage_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Problem parse_problem(const std::string& s) {
  if (s == "l2") return Problem::l2;
  if (s == "linf") return Problem::linf;
  throw usage_error("problem must be l2 or linf");
}

Criterion parse_criterion(const std::string& s) {
  if (s == "abs") return Criterion::abs;
  if (s == "norm") return Criterion::norm;
  throw usage_error("criterion must be abs or norm");
}

InfoClass parse_class(const std::string& s) {
  if (s == "all") return InfoClass::all;
  if (s == "std") return InfoClass::standard;
  throw usage_error("class must be all or std");
}

std::vector<WeightedSpace> load_spaces(const Common& c) {
  if (c.space_file.empty()) throw usage_error("--space is required");
  const auto spec = io::load_space(c.space_file);
  std::vector<WeightedSpace> out;
  if (c.s_list.empty()) {
    out.push_back(spec.build());
  } else {
    for (auto s : parse_int_list<std::size_t>(c.s_list)) {
      if (s < 1 || s > c.s_max) throw usage_error("s values must lie in [1, " + std::to_string(c.s_max) + "]");
      out.push_back(spec.build(s));
    }
  }
  return out;
}

void check_eps(const std::vector<double>& eps, bool allow_one) {
  for (double e : eps)
    if (!(e > 0.0 && (e < 1.0 || (allow_one && e == 1.0))))
      throw usage_error(allow_one ? "eps values must lie in (0, 1]" : "eps values must lie in (0, 1)");
}

json mesh_json(const RegularGrid& g) {
  json m = json::array();
  for (auto v : g.mesh()) m.push_back(v);
  return m;
}

json grid_size_json(const RegularGrid& g) {
  if (g.log_size() < std::log(9.0e15)) return g.size();
  return nullptr;
}

// Smallest greedy grid (n_max grown by factors of 5/4) whose alias bound meets `target`.
RegularGrid grid_meeting(const WeightedSpace& space, double target, std::uint64_t cap = 1u << 22) {
  std::uint64_t n_max = 1;
  for (;;) {
    auto g = greedy_grid(space, n_max);
    if (alias_error_bound(space, g) <= target) return g;
    if (n_max >= cap) throw resource_cap_exceeded("no greedy grid within the size cap meets the target", n_max);
    n_max = std::max<std::uint64_t>(n_max + 1, n_max * 5 / 4);
  }
}

// ---------------------------------------------------------------------------

int run_spectrum(const Common& c, std::size_t k) {
  const auto spaces = load_spaces(c);
  if (spaces.size() != 1) throw usage_error("spectrum takes a single dimension");
  if (k < 1) throw usage_error("--k must be positive");
  Spectrum spec(spaces.front());
  spec.extend_to(k);
  Output out(c.out);
  auto& os = out.stream();
  if (c.format == "json") {
    json rows = json::array();
    for (std::size_t i = 1; i <= k; ++i) {
      const auto& t = spec.term(i);
      rows.push_back({{"k", i},
                      {"freq", t.freq},
                      {"exponent", t.exponent},
                      {"eigenvalue", t.eigenvalue()},
                      {"partial_sum", spec.partial_sum(i)},
                      {"tail_sum", spec.tail_sum(i)}});
    }
    os << rows.dump(2) << "\n";
  } else {
    os << "k,exponent,eigenvalue,partial_sum,tail_sum\n";
    for (std::size_t i = 1; i <= k; ++i) {
      const auto& t = spec.term(i);
      os << i << "," << fmt(t.exponent) << "," << fmt(t.eigenvalue()) << "," << fmt(spec.partial_sum(i)) << ","
         << fmt(spec.tail_sum(i)) << "\n";
    }
  }
  if (c.verify) {
    const double kth = spec.term(k).exponent;
    const auto box = oracle::brute_spectrum(spaces.front(), oracle::certified_half_width(spaces.front(), kth), k);
    std::vector<double> fast;
    for (std::size_t i = 1; i <= k; ++i) fast.push_back(spec.term(i).exponent);
    std::sort(fast.begin(), fast.end());
    for (std::size_t i = 0; i < k; ++i) {
      const double tol = 1e-14 * std::max(1.0, std::abs(fast[i]));
      if (std::abs(fast[i] - box.exponents[i]) > tol) {
        std::cerr << "verify: exponent " << i + 1 << " differs: " << fmt(fast[i]) << " vs "
                  << fmt(box.exponents[i]) << "\n";
        return kExitCertification;
      }
    }
    std::cerr << "verify: " << k << " exponents agree with box enumeration (H = " << box.half_width << ")\n";
  }
  return 0;
}

int run_errors(const Common& c, const std::string& n_list, const std::string& problems) {
  const auto spaces = load_spaces(c);
  const auto ns = parse_int_list<std::size_t>(n_list);
  std::vector<Problem> probs;
  if (problems == "both") probs = {Problem::l2, Problem::linf};
  else probs = {parse_problem(problems)};
  const auto cls = parse_class(c.info_class);
  const auto crit = parse_criterion(c.criterion);
  Output out(c.out);
  auto& os = out.stream();
  json rows = json::array();
  const bool csv = c.format != "json";
  if (csv) os << "s,n,problem,class,criterion,value,certified_tolerance,kind\n";
  for (const auto& space : spaces) {
    Spectrum spec(space);
    for (auto n : ns) {
      for (auto p : probs) {
        double value;
        double tol;
        std::string kind = "exact";
        if (cls == InfoClass::all || n == 0) {
          value = error_all(spec, n, p);
          tol = value * (p == Problem::l2 ? 1e-15 : 0.5 * spec.tail_rel_tolerance());
        } else {
          const auto g = greedy_grid(space, n);
          value = alias_error_bound(space, g);
          if (p == Problem::linf && n >= 1) {
            // the grid bound is also an L2 bound; use it in the comparison bound when it helps
            value = std::min(value, linf_std_error_bound(spec, n, value));
          }
          tol = 1e-12 * value;
          kind = "upper";
        }
        if (crit == Criterion::norm) {
          const double cri = initial_error(spec, p);
          value /= cri;
          tol /= cri;
        }
        if (csv) {
          os << space.dim() << "," << n << "," << to_string(p) << "," << to_string(cls) << "," << to_string(crit)
             << "," << fmt(value) << "," << fmt(tol) << "," << kind << "\n";
        } else {
          rows.push_back({{"s", space.dim()}, {"n", n}, {"problem", to_string(p)}, {"class", to_string(cls)},
                          {"criterion", to_string(crit)}, {"value", value}, {"certified_tolerance", tol},
                          {"kind", kind}});
        }
      }
    }
  }
  if (!csv) os << rows.dump(2) << "\n";
  return 0;
}

int run_complexity(const Common& c) {
  const auto spaces = load_spaces(c);
  const auto eps = parse_eps(c.eps);
  check_eps(eps, true);
  const auto prob = parse_problem(c.problem);
  const auto crit = parse_criterion(c.criterion);
  const auto cls = parse_class(c.info_class);
  Output out(c.out);
  auto& os = out.stream();
  const bool csv = c.format != "json";
  json rows = json::array();
  if (csv) os << "s,eps,problem,class,criterion,value,n_lo,kind\n";
  bool stalled = false;
  for (const auto& space : spaces) {
    Spectrum spec(space);
    for (double e : eps) {
      const auto r = complexity(spec, e, prob, crit);
      std::size_t value = r.n_hi;
      std::size_t lo = r.n_lo;
      std::string kind = r.certified() ? "exact" : "interval";
      stalled = stalled || !r.certified();
      if (cls == InfoClass::standard) {
        // arbitrary information gives the lower end, a grid spline the upper end
        const double target = e * (crit == Criterion::norm ? initial_error(spec, prob) : 1.0);
        value = std::max<std::size_t>(grid_meeting(space, target).size(), r.n_hi);
        kind = "upper";
      }
      if (csv) {
        os << space.dim() << "," << fmt(e) << "," << to_string(prob) << "," << to_string(cls) << ","
           << to_string(crit) << "," << value << "," << lo << "," << kind << "\n";
      } else {
        rows.push_back({{"s", space.dim()}, {"eps", e}, {"problem", to_string(prob)}, {"class", to_string(cls)},
                        {"criterion", to_string(crit)}, {"value", value}, {"n_lo", lo}, {"kind", kind}});
      }
    }
  }
  if (!csv) os << rows.dump(2) << "\n";
  if (stalled) {
    std::cerr << "complexity: certification stalled; the reported value is an interval [n_lo, value]\n";
    return kExitCertification;
  }
  return 0;
}

json design_json(const WeightedSpace& space, double e, const std::string& construction, const Common& c,
                 std::optional<double> b_override, double delta, double eta) {
  json j;
  j["s"] = space.dim();
  j["eps"] = e;
  j["construction"] = construction;
  RegularGrid grid({1});
  if (construction == "uexp") {
    const auto d = mesh_uexp(space, e, c.omega1, b_override);
    grid = d.grid;
    j["omega1"] = d.omega1;
    j["B"] = d.b_used;
    j["m"] = d.m;
    j["R"] = d.r_const;
    j["C"] = d.c_const;
  } else if (construction == "spt") {
    const double beta = c.beta.value_or(0.5);
    const auto d = mesh_spt(space, e, beta);
    grid = d.grid;
    const auto g = spt_guarantee(space, grid, e, beta, delta, eta);
    j["beta"] = beta;
    j["delta"] = delta;
    j["eta"] = eta;
    j["error_exponent"] = g.error_exponent;
    j["size_exponent"] = g.size_exponent ? json(*g.size_exponent) : json(nullptr);
    j["c_beta_delta"] = g.c_beta_delta ? json(*g.c_beta_delta) : json(nullptr);
    j["guaranteed_error_bound"] = g.error_bound ? json(*g.error_bound) : json(nullptr);
  } else {
    throw usage_error("construction must be uexp or spt");
  }
  j["mesh"] = mesh_json(grid);
  j["n"] = grid_size_json(grid);
  j["log_n"] = grid.log_size();
  j["f_n"] = f_n(space, grid);
  j["out_of_vn_mass"] = out_of_vn_mass(space, grid);
  j["bound_fn"] = fn_error_bound(space, grid);
  j["bound_alias"] = alias_error_bound(space, grid);
  return j;
}

int run_grid_design(const Common& c, const std::string& construction, std::optional<double> b_override,
                    double delta, double eta) {
  const auto spaces = load_spaces(c);
  const auto eps = parse_eps(c.eps);
  check_eps(eps, false);
  json rows = json::array();
  for (const auto& space : spaces)
    for (double e : eps) rows.push_back(design_json(space, e, construction, c, b_override, delta, eta));
  Output out(c.out);
  out.stream() << (rows.size() == 1 ? rows[0] : rows).dump(2) << "\n";
  return 0;
}

// Real test functions for spline-demo.
struct TestFunction {
  std::function<double(std::span<const double>)> f;
  double norm;  // norm in the space
  std::string description;
};

TestFunction parse_function(const WeightedSpace& space, const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const std::size_t s = space.dim();
  if (kind == "kernel") {
    std::vector<double> y(s, 0.0);
    if (!args.empty()) {
      const auto parts = split(args, ',');
      if (parts.size() != s) throw usage_error("kernel section needs one coordinate per dimension");
      for (std::size_t j = 0; j < s; ++j) y[j] = parse_double(parts[j]);
    }
    auto kern = std::make_shared<KernelEvaluator>(space);
    return {[kern, y](std::span<const double> x) { return (*kern)(x, y); }, std::sqrt(kern->diagonal()),
            "kernel section K(., y)"};
  }
  if (kind == "trig") {
    // "h1,h2:c;h1,h2:c" means sum c cos(2 pi h.x)
    std::vector<std::pair<std::vector<std::int64_t>, double>> terms;
    std::map<std::vector<std::int64_t>, double> fourier;
    for (const auto& term : split(args, ';')) {
      const auto pos = term.find(':');
      if (pos == std::string::npos) throw usage_error("trig terms look like h1,h2:coefficient");
      std::vector<std::int64_t> h;
      for (const auto& p : split(term.substr(0, pos), ',')) h.push_back(parse_int(p));
      if (h.size() != s) throw usage_error("trig frequency has the wrong dimension");
      const double coef = parse_double(term.substr(pos + 1));
      terms.emplace_back(h, coef);
      auto neg = h;
      for (auto& v : neg) v = -v;
      fourier[h] += 0.5 * coef;
      fourier[neg] += 0.5 * coef;
    }
    if (terms.empty()) throw usage_error("trig function needs at least one term");
    double norm2 = 0.0;
    for (const auto& [h, c] : fourier) norm2 += c * c * std::exp(make_term(space, h).log_inv_eigenvalue);
    return {[terms](std::span<const double> x) {
              double v = 0.0;
              for (const auto& [h, c] : terms) {
                double ph = 0.0;
                for (std::size_t j = 0; j < h.size(); ++j) ph += static_cast<double>(h[j]) * x[j];
                v += c * std::cos(2.0 * kPi * ph);
              }
              return v;
            },
            std::sqrt(norm2), "trigonometric polynomial"};
  }
  throw usage_error("function must be kernel[:y] or trig:terms");
}

int run_spline_demo(const Common& c, const std::string& mesh, const std::string& construction,
                    const std::string& function, std::size_t samples) {
  const auto spaces = load_spaces(c);
  if (spaces.size() != 1) throw usage_error("spline-demo takes a single dimension");
  const auto& space = spaces.front();
  RegularGrid grid({1});
  if (!mesh.empty()) {
    grid = RegularGrid(parse_int_list<std::int64_t>(mesh));
  } else {
    const auto eps = parse_eps(c.eps);
    check_eps(eps, false);
    if (construction == "uexp") grid = mesh_uexp(space, eps.front(), c.omega1).grid;
    else if (construction == "spt") grid = mesh_spt(space, eps.front(), c.beta.value_or(0.5)).grid;
    else throw usage_error("give --mesh or --construction uexp|spt");
  }
  if (grid.dim() != space.dim()) throw usage_error("mesh has the wrong number of coordinates");
  if (grid.log_size() > std::log(4.0e6)) throw resource_cap_exceeded("grid too large for the spline demo");
  if (samples < 1) throw usage_error("--samples must be positive");

  const auto fn = parse_function(space, function);
  const std::uint64_t n = grid.size();
  std::vector<cplx> values(n);
  std::vector<double> real_values(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    real_values[k] = fn.f(grid.point(k));
    values[k] = real_values[k];
  }
  const SplineInterpolant spline(space, grid, values);
  double residual = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) residual = std::max(residual, std::abs(spline(grid.point(k)) - values[k]));

  const HaltonSequence seq(space.dim(), c.seed);
  const PowerFunction pf(space, grid);
  double err = 0.0;
  double wc = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto x = seq.point(i);
    err = std::max(err, std::abs(spline(x).real() - fn.f(x)));
    wc = std::max(wc, pf(x));
  }

  json j;
  j["s"] = space.dim();
  j["mesh"] = mesh_json(grid);
  j["n"] = n;
  j["function"] = fn.description;
  j["function_norm"] = fn.norm;
  j["interpolation_residual"] = residual;
  j["sampled_error"] = err;
  j["samples"] = samples;
  j["seed"] = c.seed;
  j["empirical_worst_case"] = std::sqrt(wc);
  j["bound_alias"] = alias_error_bound(space, grid);
  j["bound_fn"] = fn_error_bound(space, grid);
  if (n <= (1u << 20)) {
    Spectrum spec(space);
    j["error_linf_all"] = error_linf_all(spec, n);
  }
  if (n <= 512) {
    const GramInterpolant gram(space, grid, real_values);
    double gap = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(samples, 200); ++i) {
      const auto x = seq.point(i);
      gap = std::max(gap, std::abs(spline(x).real() - gram(x)));
    }
    j["gram_gap"] = gap;
    j["gram_rcond"] = gram.rcond();
  }
  Output out(c.out);
  out.stream() << j.dump(2) << "\n";
  if (residual > 1e-8) {
    std::cerr << "spline-demo: interpolation residual exceeds 1e-8\n";
    return kExitCertification;
  }
  return 0;
}

json verdict_json(Verdict v) {
  switch (v) {
    case Verdict::holds: return true;
    case Verdict::fails: return false;
    case Verdict::undetermined: return "undetermined";
    case Verdict::open: return "open";
  }
  return "undetermined";
}

json optional_number(const std::optional<double>& x) {
  if (!x) return "unknown";
  if (std::isinf(*x)) return "inf";
  return *x;
}

int run_tractability(const Common& c) {
  const auto spaces = load_spaces(c);
  Output out(c.out);
  auto& os = out.stream();
  json all = json::array();
  const bool csv = c.format == "csv";
  for (const auto& space : spaces) {
    const auto d = diagnostics(space);
    const auto v = verdicts(d);
    if (csv) {
      os << "s,property,linf,l2\n";
      for (const auto& row : comparison_table(v))
        os << d.s << "," << row.property << "," << to_string(row.linf) << "," << to_string(row.l2) << "\n";
      continue;
    }
    json j;
    j["space"] = io::space_to_json(space);
    j["diagnostics"] = {{"s", d.s},
                        {"B_s", d.b_s},
                        {"B", optional_number(d.b_total)},
                        {"alpha_star", optional_number(d.alpha_star)},
                        {"a_unbounded", to_string(d.a_unbounded)},
                        {"p_star_s", optimal_rate(d)}};
    j["verdicts"] = {{"EXP", verdict_json(v.exp)},
                     {"UEXP", verdict_json(v.uexp)},
                     {"EC-WT", verdict_json(v.ec_wt)},
                     {"EC-PT", verdict_json(v.ec_pt)},
                     {"EC-SPT", verdict_json(v.ec_spt)},
                     {"EC-WT+UEXP", verdict_json(v.ec_wt_uexp)},
                     {"EC-SPT+UEXP", verdict_json(v.ec_spt_uexp)}};
    if (v.tau_linf) {
      j["tau_star"] = {{"linf", {v.tau_linf->lo, v.tau_linf->hi}}, {"l2", {v.tau_l2->lo, v.tau_l2->hi}}};
    } else {
      j["tau_star"] = nullptr;
    }
    json table = json::array();
    for (const auto& row : comparison_table(v))
      table.push_back({{"property", row.property}, {"linf", to_string(row.linf)}, {"l2", to_string(row.l2)}});
    j["table"] = table;
    all.push_back(j);
  }
  if (!csv) os << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
  return 0;
}

int run_convergence(const Common& c, std::size_t n_max, std::size_t count) {
  const auto spaces = load_spaces(c);
  if (spaces.size() != 1) throw usage_error("convergence-study takes a single dimension");
  const auto prob = parse_problem(c.problem);
  Spectrum spec(spaces.front());
  const auto sizes = log_spaced_sizes(n_max, count);
  std::vector<RateSample> samples;
  spec.extend_to(n_max + 1);
  for (auto n : sizes) {
    const double le = prob == Problem::linf ? log_error_linf_all(spec, n) : -0.5 * spec.log_inv_eigenvalue(n + 1);
    // plateaus of the L2 error carry no rate information
    if (!samples.empty() && !(le < samples.back().log_error)) continue;
    const double tol = prob == Problem::linf ? 0.5 * spec.tail_rel_tolerance() : 1e-15;
    samples.push_back({static_cast<double>(n), le, tol});
  }
  Output out(c.out);
  auto& os = out.stream();
  os << "n,error,log_error,fitted_p\n";
  std::vector<RateSample> prefix;
  std::optional<RateFit> last;
  for (const auto& smp : samples) {
    prefix.push_back(smp);
    std::string p;
    if (prefix.size() >= 6 && prefix.back().n >= 100.0 * prefix.front().n) {
      last = fit_rate(prefix);
      p = fmt(last->p);
    }
    os << static_cast<std::size_t>(smp.n) << "," << fmt(std::exp(smp.log_error)) << "," << fmt(smp.log_error)
       << "," << p << "\n";
  }
  if (last) {
    std::cerr << "fitted p = " << fmt(last->p) << ", 1/B(s) = " << fmt(1.0 / spaces.front().b_reciprocal_sum())
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal errors, complexities and grid designs for Korobov spaces with exponential weights"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--space", c.space_file, "space definition file (JSON)");
    sub->add_option("--s", c.s_list, "comma-separated dimensions (overrides the file)");
    sub->add_option("--out", c.out, "write output to FILE instead of stdout");
    sub->add_option("--format", c.format, "csv or json");
  };

  std::size_t k = 20;
  auto* spectrum = app.add_subcommand("spectrum", "ordered eigenvalues with partial and tail sums");
  add_common(spectrum);
  spectrum->add_option("--k", k, "number of eigenvalues");
  spectrum->add_flag("--verify", c.verify, "cross-check against brute-force box enumeration");

  std::string n_list = "0,1,2,4,8,16,32,64";
  std::string problems = "both";
  auto* errors = app.add_subcommand("errors", "n-th minimal errors (exact) or upper bounds (std)");
  add_common(errors);
  errors->add_option("--n", n_list, "comma-separated n values");
  errors->add_option("--problem", problems, "l2, linf or both");
  errors->add_option("--class", c.info_class, "all or std");
  errors->add_option("--criterion", c.criterion, "abs or norm");

  auto* cplx_cmd = app.add_subcommand("complexity", "information complexity n(eps)");
  add_common(cplx_cmd);
  cplx_cmd->add_option("--eps", c.eps, "LIST or HI:LO:COUNT");
  cplx_cmd->add_option("--problem", c.problem, "l2 or linf");
  cplx_cmd->add_option("--criterion", c.criterion, "abs or norm");
  cplx_cmd->add_option("--class", c.info_class, "all or std");

  std::string construction = "uexp";
  std::optional<double> b_override;
  double delta = 1.0;
  double eta = 0.1;
  auto* design = app.add_subcommand("grid-design", "mesh sizes from the UEXP or EC-SPT construction");
  add_common(design);
  design->add_option("--eps", c.eps, "LIST or HI:LO:COUNT");
  design->add_option("--construction", construction, "uexp or spt");
  design->add_option("--beta", c.beta, "beta in (0,1) for spt (default 0.5)");
  design->add_option("--omega1", c.omega1, "omega_1 in (sqrt(omega), 1) for uexp");
  design->add_option("--B", b_override, "use this B instead of B(s) for uexp");
  design->add_option("--delta", delta, "delta for the spt guarantee");
  design->add_option("--eta", eta, "eta for the spt guarantee");

  std::string mesh;
  std::string function = "kernel";
  std::size_t samples = 1000;
  auto* demo = app.add_subcommand("spline-demo", "interpolate a test function on a grid");
  add_common(demo);
  demo->add_option("--mesh", mesh, "comma-separated mesh sizes");
  demo->add_option("--construction", construction, "uexp or spt (with --eps)");
  demo->add_option("--eps", c.eps, "target eps for --construction");
  demo->add_option("--beta", c.beta, "beta for spt");
  demo->add_option("--omega1", c.omega1, "omega_1 for uexp");
  demo->add_option("--function", function, "kernel[:y1,...] or trig:h1,...:c;...");
  demo->add_option("--samples", samples, "number of quasi-random evaluation points");
  demo->add_option("--seed", c.seed, "seed of the point shift");

  auto* tract = app.add_subcommand("tractability-report", "diagnostics, verdicts and the L-inf/L2 table");
  add_common(tract);

  std::size_t n_max = 10000;
  std::size_t count = 25;
  auto* conv = app.add_subcommand("convergence-study", "errors along n with a fitted exponential rate");
  add_common(conv);
  conv->add_option("--n-max", n_max, "largest n");
  conv->add_option("--count", count, "number of log-spaced n values");
  conv->add_option("--problem", c.problem, "l2 or linf");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (c.format != "csv" && c.format != "json") throw usage_error("format must be csv or json");
    if (*spectrum) return run_spectrum(c, k);
    if (*errors) return run_errors(c, n_list, problems);
    if (*cplx_cmd) return run_complexity(c);
    if (*design) return run_grid_design(c, construction, b_override, delta, eta);
    if (*demo) return run_spline_demo(c, mesh, construction, function, samples);
    if (*tract) {
      // JSON unless CSV is asked for explicitly
      if (tract->count("--format") == 0) c.format = "json";
      return run_tractability(c);
    }
    if (*conv) return run_convergence(c, n_max, count);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const resource_cap_exceeded& e) {
    std::cerr << "resource cap: " << e.what() << " (reached " << e.reached() << ")\n";
    return kExitResource;
  } catch (const certification_failure& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return kExitCertification;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed space file: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
