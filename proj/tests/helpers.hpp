#pragma once

#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include "maslov/maslov.hpp"

namespace testing_helpers {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::vector<maslov::Weight> weights(std::initializer_list<double> values) {
  std::vector<maslov::Weight> out;
  for (double v : values) out.emplace_back(v);
  return out;
}

inline maslov::IdempotentMeasure measure(const maslov::Space& s, std::initializer_list<double> values) {
  return maslov::IdempotentMeasure(s, weights(values));
}

inline maslov::Space space(const std::string& name, std::vector<std::string> labels) {
  return maslov::FiniteSpace::make(name, std::move(labels));
}

}  // namespace testing_helpers
