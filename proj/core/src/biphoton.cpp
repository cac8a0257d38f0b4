#include "qit/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <tuple>

#include "qit/errors.hpp"
#include "qit/parallel.hpp"
#include "qit/propagation.hpp"

namespace qit {

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t end = std::min(count, (t + 1) * chunk);
        for (std::size_t k = t * chunk; k < end; ++k) body(k);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

RateLaw::RateLaw(ScalarField field, double scale, double prefactor, double kappa)
    : field_(std::move(field)), scale_(scale), prefactor_(prefactor), kappa_(kappa) {
  if (!(std::abs(scale) > 0.0) || !std::isfinite(scale)) throw ValidationError("rate-law scale must be non-zero");
  if (!(prefactor >= 0.0) || !std::isfinite(prefactor)) throw ValidationError("rate-law prefactor must be >= 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ValidationError("calibration constant must be >= 0");
}

double RateLaw::at_sum(Vec2 sum) const {
  return kappa_ * prefactor_ * std::norm(field_.interpolate(scale_ * sum));
}

RateLaw RateLaw::with_kappa(double kappa) const { return {field_, scale_, prefactor_, kappa}; }

double RateLaw::detector_pitch() const { return field_.pitch() / std::abs(scale_); }

double divergence_prefactor(double k_p, double length) {
  if (!(length > 0.0)) throw PhysicsError("divergence length must be positive");
  const double r = k_p / length;
  return r * r;
}

RateLaw free_rate_law(const ScalarField& w_at_detector, double k_p, double z_ad,
                      bool include_divergence_prefactor, double kappa) {
  if (!(z_ad > 0.0)) throw ValidationError("Z_AD must be positive");
  const double p = include_divergence_prefactor ? divergence_prefactor(k_p, z_ad) : 1.0;
  return {w_at_detector, 1.0, p, kappa};
}

RateLaw free_rate_law(const BiphotonSetup& setup, bool include_divergence_prefactor) {
  if (!(setup.z_ad > 0.0)) throw ValidationError("Z_AD must be positive");
  const auto ctx = WaveContext::from_wavenumber(setup.k_p);
  return free_rate_law(propagate(setup.pump_at_crystal, ctx, setup.z_ad), setup.k_p, setup.z_ad,
                       include_divergence_prefactor, setup.kappa);
}

double coincidence_free(const BiphotonSetup& setup, Vec2 rho_s, Vec2 rho_i,
                        bool include_divergence_prefactor) {
  return free_rate_law(setup, include_divergence_prefactor)(rho_s, rho_i);
}

RateLaw imaged_rate_law(const ScalarField& w_at_mask, double o, double i, double kappa,
                        ImageOrientation orientation) {
  if (!(o > 0.0) || !(i > 0.0)) throw ValidationError("O and I must be positive");
  const double s = orientation == ImageOrientation::Upright ? o / i : -o / i;
  return {w_at_mask, s, 1.0, kappa};
}

double coincidence_imaged(const BiphotonSetup& setup, const ScalarField& w_at_mask, double o,
                          double i, Vec2 rho_s, Vec2 rho_i, ImageOrientation orientation) {
  return imaged_rate_law(w_at_mask, o, i, setup.kappa, orientation)(rho_s, rho_i);
}

std::vector<double> scan_coordinates(const ScanSpec& spec) {
  if (!(spec.step > 0.0) || !std::isfinite(spec.step)) throw ValidationError("scan step must be positive");
  if (!(spec.stop >= spec.start)) throw ValidationError("scan stop must not precede start");
  const auto count = static_cast<std::size_t>(std::floor((spec.stop - spec.start) / spec.step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = spec.start + static_cast<double>(k) * spec.step;
  return out;
}

namespace {

struct SumKernel {
  std::vector<Vec2> offsets;  // in lattice units
  std::vector<double> weights;
};

std::vector<std::pair<int, int>> disk_points(double radius, double h) {
  if (radius == 0.0) return {{0, 0}};
  if (!(radius > 0.0)) throw ValidationError("aperture radius must be >= 0");
  if (2.0 * radius / h < 5.0 - 1e-9) {
    throw ResolutionError("aperture radius " + std::to_string(radius) +
                          " m is resolved by fewer than 5 samples across");
  }
  const double r = radius / h;
  const int rr = static_cast<int>(std::floor(r + 1e-9));
  std::vector<std::pair<int, int>> pts;
  for (int n = -rr; n <= rr; ++n) {
    for (int m = -rr; m <= rr; ++m) {
      if (static_cast<double>(m * m + n * n) <= r * r * (1.0 + 1e-12)) pts.emplace_back(m, n);
    }
  }
  return pts;
}

// Distribution of rho_s + rho_i offsets when both detectors sample their disks.
std::shared_ptr<const SumKernel> sum_kernel(double ra, double rb, double h) {
  static std::mutex mutex;
  static std::map<std::tuple<double, double, double>, std::shared_ptr<const SumKernel>> cache;
  const auto key = std::make_tuple(ra, rb, h);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const auto a = disk_points(ra, h);
  const auto b = disk_points(rb, h);
  int reach = 0;
  for (auto [m, n] : a) reach = std::max({reach, std::abs(m), std::abs(n)});
  int reach_b = 0;
  for (auto [m, n] : b) reach_b = std::max({reach_b, std::abs(m), std::abs(n)});
  reach += reach_b;
  const int side = 2 * reach + 1;
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(side) * side, 0);
  for (auto [ma, na] : a) {
    for (auto [mb, nb] : b) {
      ++counts[static_cast<std::size_t>(na + nb + reach) * side + (ma + mb + reach)];
    }
  }
  const double wa = ra > 0.0 ? h * h : 1.0;
  const double wb = rb > 0.0 ? h * h : 1.0;
  auto kernel = std::make_shared<SumKernel>();
  for (int n = 0; n < side; ++n) {
    for (int m = 0; m < side; ++m) {
      const auto c = counts[static_cast<std::size_t>(n) * side + m];
      if (c == 0) continue;
      kernel->offsets.push_back({static_cast<double>(m - reach), static_cast<double>(n - reach)});
      kernel->weights.push_back(static_cast<double>(c) * wa * wb);
    }
  }
  std::lock_guard lock(mutex);
  if (cache.size() > 16) cache.clear();
  cache.emplace(key, kernel);
  return kernel;
}

double integrate(const RateLaw& law, const SumKernel& kernel, Vec2 centre_sum, double h) {
  double total = 0.0;
  for (std::size_t k = 0; k < kernel.offsets.size(); ++k) {
    total += kernel.weights[k] * law.at_sum(centre_sum + h * kernel.offsets[k]);
  }
  return total;
}

void check_roles(const DetectorSpec& moving, const DetectorSpec& fixed_other) {
  if (moving.role == fixed_other.role)
    throw ValidationError("a scan needs one signal and one idler detector");
}

}  // namespace

double aperture_rate(const RateLaw& law, const DetectorSpec& a, const DetectorSpec& b) {
  const double h = law.detector_pitch();
  const auto kernel = sum_kernel(a.aperture_radius, b.aperture_radius, h);
  return integrate(law, *kernel, a.position + b.position, h);
}

CoincidenceProfile scan_detector(const RateLaw& law, const ScanSpec& spec,
                                 const DetectorSpec& moving, const DetectorSpec& fixed_other,
                                 unsigned threads) {
  check_roles(moving, fixed_other);
  const auto coords = scan_coordinates(spec);
  const double h = law.detector_pitch();
  const auto kernel = sum_kernel(moving.aperture_radius, fixed_other.aperture_radius, h);
  CoincidenceProfile profile;
  profile.coordinates = coords;
  profile.rates.assign(coords.size(), 0.0);
  profile.fixed_position = fixed_other.position;
  parallel_for(coords.size(), threads, [&](std::size_t k) {
    Vec2 pos = moving.position;
    (spec.axis == Axis::X ? pos.x : pos.y) = coords[k];
    profile.rates[k] = integrate(law, *kernel, pos + fixed_other.position, h);
  });
  return profile;
}

std::vector<double> coincidence_map(const RateLaw& law, std::span<const double> xs,
                                    std::span<const double> ys, const DetectorSpec& moving,
                                    const DetectorSpec& fixed_other, unsigned threads) {
  check_roles(moving, fixed_other);
  const double h = law.detector_pitch();
  const auto kernel = sum_kernel(moving.aperture_radius, fixed_other.aperture_radius, h);
  std::vector<double> out(xs.size() * ys.size());
  parallel_for(ys.size(), threads, [&](std::size_t j) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out[j * xs.size() + i] = integrate(law, *kernel, Vec2{xs[i], ys[j]} + fixed_other.position, h);
    }
  });
  return out;
}

}  // namespace qit
