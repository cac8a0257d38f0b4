#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qit/biphoton.hpp"
#include "qit/counting.hpp"
#include "qit/paraxial.hpp"
#include "qit/scenario.hpp"

namespace qit {

// The two-photon system unfolded into a single pump-like path: pump-side
// elements, then the twin-side elements, all propagated at the pump wavenumber.
struct UnfoldedPath {
  OpticalTrain train;
  std::size_t pump_elements = 0;
  // Twin-side distances/focal lengths are multiplied by this (1 when degenerate).
  double twin_scale = 1.0;
  RayMatrix twin_matrix;
  RayMatrix full_matrix;
  // B of the twin path up to its first collimated station (or the whole path).
  double divergence_length = 0.0;
};

UnfoldedPath unfolded_pump_train(const Scenario& scenario);

ScalarField pump_at_mask(const Scenario& scenario);
BiphotonSetup biphoton_setup(const Scenario& scenario, double kappa = 1.0);

// Point-rate law for the scenario's full geometry.
RateLaw scenario_rate_law(const Scenario& scenario, double kappa = 1.0);

// Gaussian pump at the mask plane, before the mask.
ScalarField pump_source(const Scenario& scenario);

// kappa from the scenario's calibration block. Otherwise the reference preset
// (optionally on another grid) is simulated once per process and kappa is set
// so its scan peak equals the configured rate.
double calibrate_kappa(const Scenario& scenario, std::optional<GridConfig> reference_grid = {});

CoincidenceProfile scan_detector(const Scenario& scenario, DetectorRole moving, Axis axis,
                                 double start, double stop, double step,
                                 const DetectorSpec& fixed_other, double kappa = 1.0);
// Scan exactly as the scenario's scan block describes.
CoincidenceProfile scan_scenario(const Scenario& scenario, double kappa = 1.0);

struct SweepRow {
  double distance = 0.0;
  double peak_rate = 0.0;
  double snr = 0.0;
  bool collimated = false;
  bool feasible = true;
  std::string note;
};

struct SweepOptions {
  double aperture_radius = 0.5e-3;
  std::optional<double> kappa;  // defaults to calibrate_kappa(scenario)
};

// Replaces the twin side by free space (collimated = false) or by a designed
// telescope of magnification -1 (collimated = true) for each distance.
std::vector<SweepRow> sweep_distance(const Scenario& scenario, std::span<const double> distances,
                                     bool collimated, const SweepOptions& options = {});

}  // namespace qit
