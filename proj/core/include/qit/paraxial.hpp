#pragma once

#include <array>
#include <span>
#include <vector>

#include "qit/propagation.hpp"

namespace qit {

// Paraxial ray transfer [[A, B], [C, D]] acting on (height, angle).
struct RayMatrix {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;

  static RayMatrix identity() { return {}; }
  static RayMatrix free_space(double distance);
  static RayMatrix thin_lens(double focal);

  double det() const { return a * d - b * c; }
  bool operator==(const RayMatrix&) const = default;
};

// Matrix product this * rhs (rhs acts first).
RayMatrix operator*(const RayMatrix& lhs, const RayMatrix& rhs);

// ms is in propagation order; the result is ms.back() * ... * ms.front().
RayMatrix compose(std::span<const RayMatrix> ms);
// Masks are transparent to ray optics.
RayMatrix ray_matrix(const OpticalElement& element);
RayMatrix ray_matrix(const OpticalTrain& train);

struct ImagingCheck {
  bool is_image = false;
  double magnification = 0.0;
};

ImagingCheck check_imaging(const RayMatrix& m);
bool check_collimation(const RayMatrix& m);

// Two lenses per beam: collimators (f1 signal, f2 idler) at stations[0] and
// relay lenses (f3, f4) at stations[1]; stations[2] is the detector plane.
struct TelescopePlan {
  std::array<double, 4> focal{};
  std::array<double, 3> stations{};
  double magnification = 0.0;

  double total_distance() const { return stations[2]; }
  // Twin-side train from the crystal to the detector (one beam).
  OpticalTrain twin_train() const;
  RayMatrix matrix() const;
  // Crystal to the relay lens: the collimated leg ends here.
  RayMatrix collimated_leg() const;
};

// Exhaustive search over ordered catalog pairs and 1 mm leg lengths for a
// crystal-imaging relay with magnification A = target.
TelescopePlan design_telescope(double total_distance, double target_magnification,
                               std::span<const double> catalog);

}  // namespace qit
