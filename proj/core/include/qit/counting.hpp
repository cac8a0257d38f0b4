#pragma once

#include <cstdint>
#include <vector>

#include "qit/biphoton.hpp"

namespace qit {

struct CountingConfig {
  double acquisition_time = 1.0;      // s per scan point
  double singles_signal = 5e4;        // counts/s
  double singles_idler = 5e4;         // counts/s
  double coincidence_window = 5e-9;   // s
  std::uint64_t seed = 1;

  void validate() const;
  double accidental_rate() const { return singles_signal * singles_idler * coincidence_window; }
  bool operator==(const CountingConfig&) const = default;
};

struct CountedProfile {
  std::vector<double> coordinates;
  std::vector<double> expected_rates;
  std::vector<std::int64_t> counts;
  std::vector<double> accidental_rates;
  bool operator==(const CountedProfile&) const = default;
};

// One Poisson draw from a generator seeded by (seed, index) alone, so any
// point can be sampled independently of the others.
std::int64_t poisson_draw(double mean, std::uint64_t seed, std::uint64_t index);

CountedProfile sample_counts(const CoincidenceProfile& profile, const CountingConfig& cfg);

// (peak - background) / sqrt(peak + background) with background = min counts.
double snr(const CountedProfile& counted);

}  // namespace qit
