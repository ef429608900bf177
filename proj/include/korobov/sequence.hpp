#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "korobov/errors.hpp"
#include "korobov/numeric.hpp"

namespace korobov {

/// Three-valued answer for properties that cannot always be decided.
enum class Tri { no, yes, unknown };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::no: return "false";
    case Tri::yes: return "true";
    case Tri::unknown: return "unknown";
  }
  return "unknown";
}

/// A positive weight sequence v_1, v_2, ... given either as an explicit finite
/// list or as a named family that can be evaluated for any index.
///
/// Named families (j >= 1):
///   constant           v_j = scale
///   linear             v_j = scale * j
///   exponential        v_j = scale * exp(rate * j)
///   power              v_j = scale * j^rate
///   super_exponential  v_j = scale * exp(rate * j^2)
class SequenceFamily {
 public:
  enum class Kind { explicit_list, constant, linear, exponential, power, super_exponential };

  static SequenceFamily explicit_values(std::vector<double> values) {
    detail::require(!values.empty(), "explicit sequence must not be empty");
    for (double v : values) detail::require(v > 0.0 && std::isfinite(v), "sequence values must be positive");
    SequenceFamily f(Kind::explicit_list, 1.0, 0.0);
    f.values_ = std::move(values);
    return f;
  }
  static SequenceFamily constant(double value) { return {Kind::constant, value, 0.0}; }
  static SequenceFamily linear(double slope) { return {Kind::linear, slope, 0.0}; }
  static SequenceFamily exponential(double rate, double scale = 1.0) {
    return {Kind::exponential, scale, rate};
  }
  static SequenceFamily power(double exponent, double scale = 1.0) {
    return {Kind::power, scale, exponent};
  }
  static SequenceFamily super_exponential(double rate, double scale = 1.0) {
    return {Kind::super_exponential, scale, rate};
  }

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  double rate() const { return rate_; }
  const std::vector<double>& explicit_list() const { return values_; }

  /// Number of materializable terms; unbounded for named families.
  std::optional<std::size_t> horizon() const {
    if (kind_ == Kind::explicit_list) return values_.size();
    return std::nullopt;
  }

  /// v_j for j >= 1.
  double operator()(std::size_t j) const {
    detail::require(j >= 1, "sequence index starts at 1");
    const double x = static_cast<double>(j);
    switch (kind_) {
      case Kind::explicit_list:
        if (j > values_.size()) throw precondition_error("index beyond explicit sequence horizon");
        return values_[j - 1];
      case Kind::constant: return scale_;
      case Kind::linear: return scale_ * x;
      case Kind::exponential: return scale_ * std::exp(rate_ * x);
      case Kind::power: return scale_ * std::pow(x, rate_);
      case Kind::super_exponential: return scale_ * std::exp(rate_ * x * x);
    }
    return 0.0;
  }

  std::vector<double> take(std::size_t s) const {
    std::vector<double> out(s);
    for (std::size_t j = 1; j <= s; ++j) out[j - 1] = (*this)(j);
    return out;
  }

  /// sum_j 1/v_j over the infinite sequence: +inf when divergent, nullopt when
  /// the sequence is only known through a finite list.
  std::optional<double> reciprocal_sum() const {
    switch (kind_) {
      case Kind::explicit_list: return std::nullopt;
      case Kind::constant:
      case Kind::linear: return kInf;
      case Kind::power:
        if (rate_ <= 1.0) return kInf;
        return std::riemann_zeta(rate_) / scale_;
      case Kind::exponential:
        if (rate_ <= 0.0) return kInf;
        return 1.0 / (scale_ * std::expm1(rate_));
      case Kind::super_exponential: {
        if (rate_ <= 0.0) return kInf;
        CompensatedSum sum;
        for (std::size_t j = 1; j < 100000; ++j) {
          const double t = std::exp(-rate_ * static_cast<double>(j * j));
          sum.add(t);
          if (t < 1e-18 * sum.value()) break;
        }
        return sum.value() / scale_;
      }
    }
    return std::nullopt;
  }

  /// liminf_j log(v_j) / j, nullopt for explicit lists.
  std::optional<double> log_growth_liminf() const {
    switch (kind_) {
      case Kind::explicit_list: return std::nullopt;
      case Kind::constant:
      case Kind::linear:
      case Kind::power: return 0.0;
      case Kind::exponential: return rate_;
      case Kind::super_exponential: return rate_ > 0.0 ? kInf : 0.0;
    }
    return std::nullopt;
  }

  /// Whether v_j tends to infinity.
  Tri diverges() const {
    switch (kind_) {
      case Kind::explicit_list: return Tri::unknown;
      case Kind::constant: return Tri::no;
      case Kind::linear: return Tri::yes;
      case Kind::power:
      case Kind::exponential:
      case Kind::super_exponential: return rate_ > 0.0 ? Tri::yes : Tri::no;
    }
    return Tri::unknown;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::explicit_list: return "explicit";
      case Kind::constant: return "constant";
      case Kind::linear: return "linear";
      case Kind::exponential: return "exponential";
      case Kind::power: return "power";
      case Kind::super_exponential: return "super_exponential";
    }
    return "unknown";
  }

  friend bool operator==(const SequenceFamily&, const SequenceFamily&) = default;

 private:
  SequenceFamily(Kind kind, double scale, double rate) : kind_(kind), scale_(scale), rate_(rate) {
    detail::require(scale > 0.0 && std::isfinite(scale), "sequence scale must be positive");
    detail::require(rate >= 0.0 && std::isfinite(rate), "sequence rate must be nonnegative");
  }

  Kind kind_;
  double scale_;
  double rate_;
  std::vector<double> values_;
};

}  // namespace korobov
