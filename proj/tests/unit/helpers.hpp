#pragma once

#include <cmath>
#include <vector>

#include "qit/field.hpp"

namespace qit::testing {

inline double relative_rms(const ScalarField& a, const ScalarField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.samples().size(); ++k) {
    num += std::norm(a.samples()[k] - b.samples()[k]);
    den += std::norm(b.samples()[k]);
  }
  return std::sqrt(num / den);
}

inline std::vector<double> intensity(const ScalarField& f) {
  std::vector<double> out;
  for (const auto& s : f.samples()) out.push_back(std::norm(s));
  return out;
}

// 1/e^2 intensity radius from the second moment: w = 2 sqrt(<x^2>).
inline double second_moment_radius(const ScalarField& f) {
  double sum = 0.0, sx2 = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double w = std::norm(f.at(i, j));
      const double x = f.coordinate(i);
      sum += w;
      sx2 += w * x * x;
    }
  }
  return 2.0 * std::sqrt(sx2 / sum);
}

}  // namespace qit::testing
