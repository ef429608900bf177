#pragma once

// Ordered eigenvalues lambda_{s,1} >= lambda_{s,2} >= ... of W_s = EMB^* EMB,
// i.e. the weights omega_h sorted in decreasing order with multiplicity.
//
// Enumeration walks nonnegative representatives m in Z_{>=0}^s best-first. The
// representatives form a tree (the parent of m decrements its last nonzero
// coordinate), children never precede their parent, so popping a min-heap yields
// exponents in nondecreasing order without duplicate bookkeeping. Each popped
// representative emits its 2^{#nonzero} sign patterns.
//
// The subtree hanging off a frontier node is a product set, so the mass of all
// eigenvalues not yet emitted is a sum of positive closed-form products. Tail
// sums are therefore computed without subtracting from the trace.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "korobov/errors.hpp"
#include "korobov/numeric.hpp"
#include "korobov/space.hpp"

namespace korobov {

struct SpectrumOptions {
  std::size_t max_frontier = std::size_t{1} << 24;
  std::size_t max_terms = std::size_t{1} << 26;
  double rel_tol = 1e-13;
  /// Exponents closer than tie_fuzz * max(1, |E|) are treated as equal.
  double tie_fuzz = 1e-14;
};

class Spectrum {
 public:
  explicit Spectrum(WeightedSpace space, SpectrumOptions options = {})
      : space_(std::move(space)), options_(options) {
    const std::size_t s = space_.dim();
    log_total_.resize(s);
    for (std::size_t j = 0; j < s; ++j) log_total_[j] = coord_log_total(space_, j, options_.rel_tol);
    log_total_suffix_.assign(s + 1, 0.0);
    for (std::size_t j = s; j-- > 0;) log_total_suffix_[j] = log_total_suffix_[j + 1] + log_total_[j];
    log_trace_ = log_total_suffix_[0];
    tail_cache_.resize(s);
    terms_cache_.resize(s);
    heap_.push_back(Node{0.0, std::vector<std::uint32_t>(s, 0), kRoot});
    prefix_.push_back(0.0);
  }

  const WeightedSpace& space() const { return space_; }
  const SpectrumOptions& options() const { return options_; }

  /// Number of eigenvalues materialized so far (may exceed the last request
  /// because sign patterns are emitted together).
  std::size_t size() const { return ordered_.size(); }
  std::span<const FrequencyTerm> terms() const { return ordered_; }

  /// Ensures the k largest eigenvalues (with multiplicity) are materialized.
  void extend_to(std::size_t k) {
    if (k <= ordered_.size()) return;
    if (k > options_.max_terms)
      throw resource_cap_exceeded("spectrum term cap exceeded", ordered_.size());
    while (ordered_.size() < k) {
      if (heap_.size() > options_.max_frontier)
        throw resource_cap_exceeded("spectrum frontier cap exceeded", ordered_.size());
      std::pop_heap(heap_.begin(), heap_.end(), heap_order());
      Node node = std::move(heap_.back());
      heap_.pop_back();
      emit(node);
      push_children(node);
    }
    dirty_ = true;
  }

  /// log(1/lambda_{s,k}) for k >= 1.
  double log_inv_eigenvalue(std::size_t k) {
    detail::require(k >= 1, "eigenvalue index starts at 1");
    extend_to(k);
    return ordered_[k - 1].log_inv_eigenvalue;
  }
  double eigenvalue(std::size_t k) { return std::exp(-log_inv_eigenvalue(k)); }
  const FrequencyTerm& term(std::size_t k) {
    detail::require(k >= 1, "eigenvalue index starts at 1");
    extend_to(k);
    return ordered_[k - 1];
  }

  /// sum_{k <= n} lambda_{s,k}.
  double partial_sum(std::size_t n) {
    extend_to(n);
    return prefix_[n];
  }

  double log_trace() const { return log_trace_; }
  double trace() const { return std::exp(log_trace_); }

  /// log sum_{k > n} lambda_{s,k}.
  double log_tail_sum(std::size_t n) {
    extend_to(n);
    refresh_tails();
    return suffix_log_[n];
  }
  double tail_sum(std::size_t n) { return std::max(0.0, std::exp(log_tail_sum(n))); }

  /// Relative accuracy certified for tail sums (series cut-offs plus rounding
  /// accumulated over the materialized terms).
  double tail_rel_tolerance() const {
    const double ops = static_cast<double>(ordered_.size() + heap_.size() + space_.dim() + 8);
    return 4.0 * options_.rel_tol + 4.0 * ops * std::numeric_limits<double>::epsilon();
  }

  /// Mass of all eigenvalues not yet materialized.
  double log_unemitted_mass() {
    refresh_tails();
    return frontier_log_mass_;
  }

 private:
  static constexpr std::uint32_t kRoot = 0xffffffffu;

  struct Node {
    double exponent;
    std::vector<std::uint32_t> rep;
    std::uint32_t last;  // highest nonzero coordinate, kRoot for the origin
  };

  // Heap comparator: "a comes after b" (std heaps are max-heaps).
  struct HeapOrder {
    double fuzz;
    bool operator()(const Node& a, const Node& b) const {
      const double tol = fuzz * std::max({1.0, std::abs(a.exponent), std::abs(b.exponent)});
      if (a.exponent > b.exponent + tol) return true;
      if (b.exponent > a.exponent + tol) return false;
      return b.rep < a.rep;
    }
  };
  HeapOrder heap_order() const { return HeapOrder{options_.tie_fuzz}; }

  double coord_term(std::size_t j, std::uint32_t h) {
    auto& cache = terms_cache_[j];
    while (cache.size() <= h) {
      const double x = static_cast<double>(cache.size());
      cache.push_back(cache.empty() ? 0.0 : space_.a(j) * std::pow(x, space_.b(j)));
    }
    return cache[h];
  }

  double node_exponent(const std::vector<std::uint32_t>& rep) {
    double e = 0.0;
    for (std::size_t j = 0; j < rep.size(); ++j)
      if (rep[j] != 0) e += coord_term(j, rep[j]);
    return e;
  }

  void emit(const Node& node) {
    const std::size_t s = node.rep.size();
    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j < s; ++j)
      if (node.rep[j] != 0) nonzero.push_back(j);
    const double log_eig = node.exponent * space_.log_inv_omega();
    const double eig = std::exp(-log_eig);
    const std::size_t patterns = std::size_t{1} << nonzero.size();
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      FrequencyTerm t;
      t.freq.resize(s);
      for (std::size_t j = 0; j < s; ++j) t.freq[j] = node.rep[j];
      // First nonzero coordinate is the most significant bit; 0 means '+'.
      for (std::size_t i = 0; i < nonzero.size(); ++i)
        if (mask & (std::size_t{1} << (nonzero.size() - 1 - i))) t.freq[nonzero[i]] = -t.freq[nonzero[i]];
      t.exponent = node.exponent;
      t.log_inv_eigenvalue = log_eig;
      ordered_.push_back(std::move(t));
      running_.add(eig);
      prefix_.push_back(running_.value());
    }
  }

  void push_children(const Node& node) {
    const std::size_t s = node.rep.size();
    const std::size_t first = node.last == kRoot ? 0 : node.last;
    for (std::size_t j = first; j < s; ++j) {
      Node child{0.0, node.rep, static_cast<std::uint32_t>(j)};
      ++child.rep[j];
      child.exponent = node_exponent(child.rep);
      heap_.push_back(std::move(child));
      std::push_heap(heap_.begin(), heap_.end(), heap_order());
    }
  }

  // log sum_{h >= start} omega^{a_j h^{b_j}}, memoized per coordinate.
  double coord_log_tail(std::size_t j, std::uint32_t start) {
    auto& cache = tail_cache_[j];
    if (cache.size() <= start) cache.resize(start + 1, kNan);
    if (std::isnan(cache[start]))
      cache[start] = log_power_series(space_.rate(j), space_.b(j), start, options_.rel_tol).log_value;
    return cache[start];
  }

  double subtree_log_mass(const Node& node) {
    if (node.last == kRoot) return log_trace_;
    const std::size_t last = node.last;
    double lm = 0.0;
    for (std::size_t i = 0; i < last; ++i)
      if (node.rep[i] != 0) lm += kLn2 - coord_term(i, node.rep[i]) * space_.log_inv_omega();
    lm += kLn2 + coord_log_tail(last, node.rep[last]);
    lm += log_total_suffix_[last + 1];
    return lm;
  }

  void refresh_tails() {
    if (!dirty_ && !suffix_log_.empty()) return;
    LogSumAccumulator frontier;
    for (const Node& node : heap_) frontier.add(subtree_log_mass(node));
    frontier_log_mass_ = frontier.value();
    const std::size_t k = ordered_.size();
    suffix_log_.assign(k + 1, -kInf);
    suffix_log_[k] = frontier_log_mass_;
    for (std::size_t i = k; i-- > 0;)
      suffix_log_[i] = log_add_exp(suffix_log_[i + 1], -ordered_[i].log_inv_eigenvalue);
    dirty_ = false;
  }

  static constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

  WeightedSpace space_;
  SpectrumOptions options_;
  std::vector<double> log_total_;
  std::vector<double> log_total_suffix_;
  double log_trace_ = 0.0;

  std::vector<Node> heap_;
  std::vector<FrequencyTerm> ordered_;
  CompensatedSum running_;
  std::vector<double> prefix_;

  std::vector<std::vector<double>> tail_cache_;
  std::vector<std::vector<double>> terms_cache_;
  bool dirty_ = true;
  double frontier_log_mass_ = 0.0;
  std::vector<double> suffix_log_;
};

/// D_eta = sum_{h >= 1} omega^{eta a_* (h^{b_*} - 1)}.
inline double d_eta(const WeightedSpace& space, double eta, double rel_tol = kDefaultTol) {
  detail::require(eta > 0.0, "eta must be positive");
  const double rate = eta * space.a_star() * space.log_inv_omega();
  return std::exp(rate + log_power_series(rate, space.b_star(), 1, rel_tol).log_value);
}

/// log of n^{-1/eta} prod_j (1 + 2 D_eta omega^{eta a_j})^{1/eta}, an upper bound for lambda_{s,n}.
inline double log_eigenvalue_upper_bound(const WeightedSpace& space, std::size_t n, double eta) {
  detail::require(n >= 1, "eigenvalue index starts at 1");
  const double d = d_eta(space, eta);
  CompensatedSum sum;
  for (std::size_t j = 0; j < space.dim(); ++j)
    sum.add(std::log1p(2.0 * d * std::exp(-eta * space.a(j) * space.log_inv_omega())));
  return (sum.value() - std::log(static_cast<double>(n))) / eta;
}

inline double eigenvalue_upper_bound(const WeightedSpace& space, std::size_t n, double eta) {
  return std::exp(log_eigenvalue_upper_bound(space, n, eta));
}

}  // namespace korobov
