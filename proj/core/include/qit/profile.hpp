#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "qit/biphoton.hpp"
#include "qit/counting.hpp"

namespace qit {

struct Feature {
  bool is_dip = false;
  double position = 0.0;  // coordinate of the extreme sample
  double width = 0.0;     // full width at half the feature depth
  double depth = 0.0;
};

// Deepest interior valley if it spans at least half the profile range,
// otherwise the global peak. Crossings are linearly interpolated.
Feature dominant_feature(std::span<const double> x, std::span<const double> y);
Feature dominant_feature(const CoincidenceProfile& profile);

// (max - min) / (max + min)
double contrast(const CoincidenceProfile& profile);
double peak_rate(const CoincidenceProfile& profile);

struct ProfileComparison {
  double ncc = 0.0;
  double width_ratio = 0.0;  // width(a) / width(b)
};

// b is resampled onto a's coordinates inside the common range.
ProfileComparison compare_profiles(const CoincidenceProfile& a, const CoincidenceProfile& b);
double normalized_cross_correlation(std::span<const double> a, std::span<const double> b);
std::vector<double> resample(std::span<const double> x, std::span<const double> y,
                             std::span<const double> at);

void write_profile_csv(std::ostream& out, const CoincidenceProfile& profile);
CoincidenceProfile read_profile_csv(std::istream& in);
void write_counts_csv(std::ostream& out, const CountedProfile& counted);

}  // namespace qit
