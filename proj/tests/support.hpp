#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "korobov/space.hpp"

namespace testing_support {

using korobov::SequenceFamily;
using korobov::WeightedSpace;

inline WeightedSpace unit_space(std::size_t s, double omega = 0.5) {
  return {s, omega, SequenceFamily::constant(1.0), SequenceFamily::constant(1.0)};
}

inline WeightedSpace explicit_space(double omega, std::vector<double> a, std::vector<double> b) {
  const auto s = a.size();
  return {s, omega, SequenceFamily::explicit_values(std::move(a)), SequenceFamily::explicit_values(std::move(b))};
}

// Random space with nondecreasing a_j in [0.3, 3] and b_j in [0.5, 3].
inline WeightedSpace random_space(std::mt19937_64& gen, std::size_t s) {
  std::uniform_real_distribution<double> om(0.15, 0.8);
  std::uniform_real_distribution<double> ua(0.3, 3.0);
  std::uniform_real_distribution<double> ub(0.5, 3.0);
  std::vector<double> a(s);
  std::vector<double> b(s);
  for (auto& x : a) x = ua(gen);
  for (auto& x : b) x = ub(gen);
  std::sort(a.begin(), a.end());
  return explicit_space(om(gen), std::move(a), std::move(b));
}

inline std::vector<double> random_point(std::mt19937_64& gen, std::size_t s) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(s);
  for (auto& v : x) v = u(gen);
  return x;
}

}  // namespace testing_support
