#include "qit/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "qit/errors.hpp"

namespace qit {

namespace {

double crossing(double x0, double y0, double x1, double y1, double level) {
  if (y1 == y0) return 0.5 * (x0 + x1);
  return x0 + (level - y0) / (y1 - y0) * (x1 - x0);
}

// Walk outward from k until y passes `level` (above when rising, below when falling).
double edge(std::span<const double> x, std::span<const double> y, std::size_t k, double level,
            bool rising, int dir) {
  std::size_t j = k;
  while (true) {
    if ((dir < 0 && j == 0) || (dir > 0 && j + 1 == y.size()))
      throw ValidationError("feature edge runs off the profile; widen the scan range");
    const std::size_t next = dir < 0 ? j - 1 : j + 1;
    const bool passed = rising ? y[next] >= level : y[next] <= level;
    if (passed) return crossing(x[j], y[j], x[next], y[next], level);
    j = next;
  }
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Feature dominant_feature(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || y.size() < 3) throw ValidationError("profile needs at least 3 points");
  const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  const double range = *hi_it - *lo_it;
  if (!(range > 1e-12 * std::max(std::abs(*hi_it), std::abs(*lo_it)))) {
    throw ValidationError("profile is flat; feature width is undefined");
  }
  const std::size_t n = y.size();
  std::vector<double> left(n), right(n);
  left[0] = y[0];
  for (std::size_t k = 1; k < n; ++k) left[k] = std::max(left[k - 1], y[k]);
  right[n - 1] = y[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) right[k] = std::max(right[k + 1], y[k]);

  std::size_t valley = 0;
  double depth = -1.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double d = std::min(left[k], right[k]) - y[k];
    if (d > depth) {
      depth = d;
      valley = k;
    }
  }
  Feature f;
  if (depth >= 0.5 * range) {
    const double level = y[valley] + 0.5 * depth;
    f.is_dip = true;
    f.position = x[valley];
    f.depth = depth;
    f.width = edge(x, y, valley, level, true, +1) - edge(x, y, valley, level, true, -1);
    return f;
  }
  const auto peak = static_cast<std::size_t>(hi_it - y.begin());
  const double lmin = *std::min_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(peak) + 1);
  const double rmin = *std::min_element(y.begin() + static_cast<std::ptrdiff_t>(peak), y.end());
  const double base = std::max(lmin, rmin);
  const double level = 0.5 * (y[peak] + base);
  f.position = x[peak];
  f.depth = y[peak] - base;
  f.width = edge(x, y, peak, level, false, +1) - edge(x, y, peak, level, false, -1);
  return f;
}

Feature dominant_feature(const CoincidenceProfile& profile) {
  return dominant_feature(profile.coordinates, profile.rates);
}

double contrast(const CoincidenceProfile& profile) {
  if (profile.rates.empty()) throw ValidationError("empty profile");
  const auto [lo, hi] = std::minmax_element(profile.rates.begin(), profile.rates.end());
  if (*hi + *lo <= 0.0) throw ValidationError("contrast undefined for an all-zero profile");
  return (*hi - *lo) / (*hi + *lo);
}

double peak_rate(const CoincidenceProfile& profile) {
  if (profile.rates.empty()) throw ValidationError("empty profile");
  return *std::max_element(profile.rates.begin(), profile.rates.end());
}

std::vector<double> resample(std::span<const double> x, std::span<const double> y, std::span<const double> at) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("resampling needs at least 2 points");
  std::vector<double> out;
  out.reserve(at.size());
  for (double t : at) {
    if (t < x.front() || t > x.back()) throw ValidationError("resampling point outside the profile");
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t k = it == x.end() ? x.size() - 1 : static_cast<std::size_t>(it - x.begin());
    if (k == 0) k = 1;
    const double u = (t - x[k - 1]) / (x[k] - x[k - 1]);
    out.push_back(y[k - 1] + u * (y[k] - y[k - 1]));
  }
  return out;
}

double normalized_cross_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw ValidationError("ncc needs equal-length, non-empty inputs");
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size());
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double da = a[k] - ma;
    const double db = b[k] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw ValidationError("ncc undefined for a flat profile");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

ProfileComparison compare_profiles(const CoincidenceProfile& a, const CoincidenceProfile& b) {
  if (a.coordinates.empty() || b.coordinates.empty()) throw ValidationError("empty profile");
  const double lo = std::max(a.coordinates.front(), b.coordinates.front());
  const double hi = std::min(a.coordinates.back(), b.coordinates.back());
  std::vector<double> grid, ya;
  for (std::size_t k = 0; k < a.coordinates.size(); ++k) {
    if (a.coordinates[k] >= lo && a.coordinates[k] <= hi) {
      grid.push_back(a.coordinates[k]);
      ya.push_back(a.rates[k]);
    }
  }
  if (!(hi > lo) || grid.size() < 3) throw ValidationError("profiles do not overlap");
  const auto yb = resample(b.coordinates, b.rates, grid);
  ProfileComparison out;
  out.ncc = normalized_cross_correlation(ya, yb);
  out.width_ratio = dominant_feature(a).width / dominant_feature(b).width;
  return out;
}

void write_profile_csv(std::ostream& out, const CoincidenceProfile& profile) {
  out << "scan_coordinate_m,rate_pairs_per_s\n";
  for (std::size_t k = 0; k < profile.coordinates.size(); ++k)
    out << number(profile.coordinates[k]) << ',' << number(profile.rates[k]) << '\n';
}

CoincidenceProfile read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("scan_coordinate_m,", 0) != 0)
    throw ValidationError("profile CSV must start with scan_coordinate_m,...");
  CoincidenceProfile p;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    std::istringstream cells(line);
    std::string c0, c1;
    if (!std::getline(cells, c0, ',') || !std::getline(cells, c1, ','))
      throw ValidationError("profile CSV row " + std::to_string(row) + " needs two columns");
    try {
      p.coordinates.push_back(std::stod(c0));
      p.rates.push_back(std::stod(c1));
    } catch (const std::exception&) {
      throw ValidationError("profile CSV row " + std::to_string(row) + " has a bad number");
    }
    if (p.coordinates.size() > 1 && !(p.coordinates.back() > p.coordinates[p.coordinates.size() - 2]))
      throw ValidationError("profile CSV coordinates must increase strictly");
  }
  return p;
}

void write_counts_csv(std::ostream& out, const CountedProfile& counted) {
  out << "scan_coordinate_m,expected_rate_pairs_per_s,counts,accidental_rate_pairs_per_s\n";
  for (std::size_t k = 0; k < counted.coordinates.size(); ++k) {
    out << number(counted.coordinates[k]) << ',' << number(counted.expected_rates[k]) << ','
        << counted.counts[k] << ',' << number(counted.accidental_rates[k]) << '\n';
  }
}

}  // namespace qit
