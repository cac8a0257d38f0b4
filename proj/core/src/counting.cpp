#include "qit/counting.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qit/errors.hpp"

namespace qit {

void CountingConfig::validate() const {
  for (double v : {acquisition_time, singles_signal, singles_idler, coincidence_window}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("counting parameters must be finite and >= 0");
  }
  const double max_singles = std::max(singles_signal, singles_idler);
  if (max_singles > 0.0 && !(coincidence_window < 1.0 / max_singles)) {
    throw ValidationError("coincidence window must be shorter than 1 / max(singles rate)");
  }
}

std::int64_t poisson_draw(double mean, std::uint64_t seed, std::uint64_t index) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw ValidationError("Poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 gen(seq);
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(gen);
}

CountedProfile sample_counts(const CoincidenceProfile& profile, const CountingConfig& cfg) {
  cfg.validate();
  const double accidental = cfg.accidental_rate();
  CountedProfile out;
  out.coordinates = profile.coordinates;
  out.expected_rates = profile.rates;
  out.accidental_rates.assign(profile.rates.size(), accidental);
  out.counts.resize(profile.rates.size());
  for (std::size_t k = 0; k < profile.rates.size(); ++k) {
    out.counts[k] = poisson_draw((profile.rates[k] + accidental) * cfg.acquisition_time, cfg.seed, k);
  }
  return out;
}

double snr(const CountedProfile& counted) {
  if (counted.counts.empty()) throw UndefinedSnrError("profile has no points");
  const auto [lo, hi] = std::minmax_element(counted.counts.begin(), counted.counts.end());
  const double peak = static_cast<double>(*hi);
  const double background = static_cast<double>(*lo);
  if (peak + background <= 0.0) throw UndefinedSnrError("all counts are zero; SNR is undefined");
  return (peak - background) / std::sqrt(peak + background);
}

}  // namespace qit
