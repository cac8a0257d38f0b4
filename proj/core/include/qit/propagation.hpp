#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qit/field.hpp"

namespace qit {

struct FreeSpace {
  double distance = 0.0;
  bool operator==(const FreeSpace&) const = default;
};

struct ThinLens {
  // Positive converges. Infinity is a plane window (identity).
  double focal = std::numeric_limits<double>::infinity();
  std::optional<double> aperture_radius;
  bool operator==(const ThinLens&) const = default;
};

struct Mask {
  TransmissionMask mask;
  bool operator==(const Mask&) const = default;
};

using OpticalElement = std::variant<FreeSpace, ThinLens, Mask>;

struct OpticalTrain {
  std::vector<OpticalElement> elements;

  OpticalTrain& free(double distance);
  OpticalTrain& lens(double focal);
  OpticalTrain& mask(TransmissionMask m);
  // Sum of free-space distances.
  double length() const;
};

std::string describe(const OpticalElement& element);

// Band limit 1 / (lambda * sqrt((2z/L)^2 + 1)) for window L.
double band_limit_frequency(double distance, double window, double wavelength);
// Largest distance for which the band limit still passes 1/8 of Nyquist.
double max_safe_distance(std::size_t n, double pitch, double wavelength);

// Angular-spectrum propagation with band limiting and evanescent cut-off.
// The constant carrier exp(ikz) is factored out.
ScalarField propagate(const ScalarField& field, const WaveContext& ctx, double distance);

ScalarField apply_thin_lens(const ScalarField& field, const WaveContext& ctx, double focal);

ScalarField propagate_train(const ScalarField& field, const WaveContext& ctx,
                            const OpticalTrain& train);

// Fresnel integral by direct summation over all source samples. Slow on purpose.
ScalarField oracle_fresnel_direct(const ScalarField& field, const WaveContext& ctx, double distance);

}  // namespace qit
