#include "qit/paraxial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "qit/errors.hpp"

namespace qit {

namespace {

constexpr double kLegStep = 1e-3;
constexpr double kImageTol = 1e-9;
constexpr double kCollimationTol = 1e-9;
constexpr double kPlanImageTol = 1e-6;
constexpr double kMagnificationTol = 0.02;

std::string describe_candidate(double fa, double fb, double d1, double d2, double d3,
                               const RayMatrix& m) {
  std::ostringstream out;
  out << "f_a=" << fa << " m, f_b=" << fb << " m, legs " << d1 << "/" << d2 << "/" << d3
      << " m, A=" << m.a << ", B=" << m.b << " m";
  return out.str();
}

}  // namespace

RayMatrix RayMatrix::free_space(double distance) { return {1.0, distance, 0.0, 1.0}; }

RayMatrix RayMatrix::thin_lens(double focal) {
  if (focal == 0.0 || std::isnan(focal)) throw ValidationError("lens focal length must be non-zero");
  if (std::isinf(focal)) return identity();
  return {1.0, 0.0, -1.0 / focal, 1.0};
}

RayMatrix operator*(const RayMatrix& l, const RayMatrix& r) {
  return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
          l.c * r.b + l.d * r.d};
}

RayMatrix compose(std::span<const RayMatrix> ms) {
  if (ms.empty()) throw ValidationError("compose needs at least one matrix");
  RayMatrix out = ms.front();
  for (std::size_t k = 1; k < ms.size(); ++k) out = ms[k] * out;
  return out;
}

RayMatrix ray_matrix(const OpticalElement& element) {
  if (const auto* f = std::get_if<FreeSpace>(&element)) return RayMatrix::free_space(f->distance);
  if (const auto* l = std::get_if<ThinLens>(&element)) return RayMatrix::thin_lens(l->focal);
  return RayMatrix::identity();
}

RayMatrix ray_matrix(const OpticalTrain& train) {
  RayMatrix m;
  for (const auto& e : train.elements) m = ray_matrix(e) * m;
  return m;
}

ImagingCheck check_imaging(const RayMatrix& m) {
  const bool image = std::abs(m.b) < kImageTol;
  return {image, image ? m.a : 0.0};
}

bool check_collimation(const RayMatrix& m) { return std::abs(m.d) < kCollimationTol; }

OpticalTrain TelescopePlan::twin_train() const {
  OpticalTrain t;
  t.free(stations[0]).lens(focal[0]).free(stations[1] - stations[0]).lens(focal[2]);
  t.free(stations[2] - stations[1]);
  return t;
}

RayMatrix TelescopePlan::matrix() const { return ray_matrix(twin_train()); }

RayMatrix TelescopePlan::collimated_leg() const {
  OpticalTrain t;
  t.free(stations[0]).lens(focal[0]).free(stations[1] - stations[0]);
  return ray_matrix(t);
}

TelescopePlan design_telescope(double total_distance, double target, std::span<const double> catalog) {
  if (!(total_distance > 0.0) || !std::isfinite(total_distance))
    throw ValidationError("telescope total distance must be positive");
  if (catalog.empty()) throw ValidationError("focal-length catalog is empty");
  for (double f : catalog) {
    if (!(f > 0.0) || !std::isfinite(f))
      throw ValidationError("catalog focal lengths must be positive");
  }
  if (!(std::abs(target) >= 0.1 && std::abs(target) <= 10.0))
    throw ValidationError("|magnification target| must lie in [0.1, 10]");

  const auto steps = static_cast<long>(std::floor(total_distance / kLegStep + 1e-9));
  bool found = false;
  TelescopePlan best;
  // (lens count, intermediate footprint, magnification error); lens count is fixed at 2.
  std::tuple<int, double, double> best_key{};

  double closest_score = std::numeric_limits<double>::infinity();
  std::string closest = "none (no leg split fits the distance)";

  for (double fa : catalog) {
    for (double fb : catalog) {
      // Closest-candidate bookkeeping: legs snapped to the grid nearest the focal lengths.
      if (steps >= 3) {
        long k1 = std::clamp(std::lround(fa / kLegStep), 1L, steps - 2);
        long k3 = std::clamp(std::lround(fb / kLegStep), 1L, steps - k1 - 1);
        const double d1 = static_cast<double>(k1) * kLegStep;
        const double d3 = static_cast<double>(k3) * kLegStep;
        const double d2 = total_distance - d1 - d3;
        const RayMatrix leg = RayMatrix::thin_lens(fa) * RayMatrix::free_space(d1);
        const RayMatrix m = RayMatrix::free_space(d3) * RayMatrix::thin_lens(fb) *
                            RayMatrix::free_space(d2) * leg;
        const double score =
            std::abs(m.a - target) / std::abs(target) + std::abs(m.b) / total_distance + std::abs(leg.d);
        if (score < closest_score) {
          closest_score = score;
          closest = describe_candidate(fa, fb, d1, d2, d3, m);
        }
      }

      for (long k1 = 1; k1 < steps; ++k1) {
        const double d1 = static_cast<double>(k1) * kLegStep;
        const RayMatrix leg = RayMatrix::thin_lens(fa) * RayMatrix::free_space(d1);
        if (!check_collimation(leg)) continue;
        for (long k3 = 1; k1 + k3 < steps; ++k3) {
          const double d3 = static_cast<double>(k3) * kLegStep;
          const double d2 = total_distance - d1 - d3;
          if (!(d2 > 0.0)) continue;
          const RayMatrix to_relay = RayMatrix::free_space(d2) * leg;
          const RayMatrix m = RayMatrix::free_space(d3) * RayMatrix::thin_lens(fb) * to_relay;
          if (std::abs(m.b) >= kPlanImageTol) continue;
          const double mag_err = std::abs(m.a - target) / std::abs(target);
          if (mag_err >= kMagnificationTol) continue;
          std::tuple<int, double, double> key{2, std::abs(to_relay.a), mag_err};
          if (!found || key < best_key) {
            found = true;
            best_key = key;
            best.focal = {fa, fa, fb, fb};
            best.stations = {d1, d1 + d2, total_distance};
            best.magnification = m.a;
          }
        }
      }
    }
  }

  if (!found) {
    std::ostringstream msg;
    msg << "no catalog relay images the crystal at " << total_distance << " m with magnification "
        << target;
    throw InfeasibleError(msg.str(), closest);
  }
  // Re-verify independently of the search bookkeeping.
  if (std::abs(best.matrix().b) >= kPlanImageTol ||
      !check_collimation(RayMatrix::thin_lens(best.focal[0]) *
                         RayMatrix::free_space(best.stations[0]))) {
    throw PhysicsError("telescope plan failed re-verification");
  }
  return best;
}

}  // namespace qit
