#include "qit/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "qit/errors.hpp"

namespace qit {

namespace {

double wavenumber(double wavelength) { return 2.0 * std::numbers::pi / wavelength; }

ElementSpec scale_element(const ElementSpec& e, double s) {
  if (const auto* f = std::get_if<FreeSpace>(&e)) return FreeSpace{f->distance * s};
  if (const auto* l = std::get_if<ThinLens>(&e)) return ThinLens{l->focal * s, l->aperture_radius};
  return e;
}

}  // namespace

ScalarField pump_source(const Scenario& scenario) {
  return gaussian_beam(scenario.pump.waist, scenario.grid.n, scenario.grid.pitch);
}

ScalarField pump_at_mask(const Scenario& scenario) {
  auto field = pump_source(scenario);
  if (scenario.mask.type == MaskType::Wire)
    field = apply_mask(field, wire_mask(scenario.mask.width, scenario.grid.n, scenario.grid.pitch));
  return field;
}

UnfoldedPath unfolded_pump_train(const Scenario& scenario) {
  if (scenario.twin_signal != scenario.twin_idler)
    throw AsymmetryError("signal and idler twin-side trains differ; the unfolded picture needs identical arms");
  UnfoldedPath path;
  if (scenario.twins.mode == WavenumberMode::Exact) {
    const double k_p = wavenumber(scenario.pump.wavelength);
    const double k_pair = wavenumber(scenario.twins.signal_wavelength) + wavenumber(scenario.twins.idler_wavelength);
    path.twin_scale = k_p / k_pair;
  }
  if (scenario.mask.type == MaskType::Wire)
    path.train.mask(wire_mask(scenario.mask.width, scenario.grid.n, scenario.grid.pitch));
  for (const auto& e : scenario.pump_side) path.train.elements.push_back(to_element(e, scenario.grid));
  path.pump_elements = path.train.elements.size();

  RayMatrix twin;
  bool collimated = false;
  for (const auto& spec : scenario.twin_signal) {
    const auto e = to_element(scale_element(spec, path.twin_scale), scenario.grid);
    twin = ray_matrix(e) * twin;
    if (!collimated && std::holds_alternative<ThinLens>(e) && check_collimation(twin)) {
      collimated = true;
      path.divergence_length = twin.b;
    }
    path.train.elements.push_back(e);
  }
  if (!collimated) path.divergence_length = twin.b;
  path.divergence_length = std::abs(path.divergence_length);
  path.twin_matrix = twin;
  path.full_matrix = ray_matrix(path.train);
  return path;
}

BiphotonSetup biphoton_setup(const Scenario& scenario, double kappa) {
  OpticalTrain pump = to_train(scenario.pump_side, scenario.grid);
  const auto ctx = WaveContext::from_wavelength(scenario.pump.wavelength);
  BiphotonSetup setup{propagate_train(pump_at_mask(scenario), ctx, pump),
                      ctx.k(),
                      wavenumber(scenario.twins.signal_wavelength),
                      wavenumber(scenario.twins.idler_wavelength),
                      0.0,
                      scenario.mask.position,
                      0.0,
                      0.0,
                      kappa};
  bool lens_seen = false;
  for (const auto& e : scenario.twin_signal) {
    if (std::holds_alternative<ThinLens>(e)) lens_seen = true;
    if (const auto* f = std::get_if<FreeSpace>(&e)) (lens_seen ? setup.z_d : setup.z_l) += f->distance;
  }
  setup.z_ad = setup.z_l + setup.z_d;
  return setup;
}

RateLaw scenario_rate_law(const Scenario& scenario, double kappa) {
  const auto path = unfolded_pump_train(scenario);
  if (!(path.divergence_length > 1e-12)) {
    throw PhysicsError("twin-side optics image the crystal without a collimated stage; the divergence "
                       "prefactor is singular");
  }
  const auto ctx = WaveContext::from_wavelength(scenario.pump.wavelength);
  auto field = propagate_train(pump_source(scenario), ctx, path.train);
  return {std::move(field), 1.0, divergence_prefactor(ctx.k(), path.divergence_length), kappa};
}

CoincidenceProfile scan_detector(const Scenario& scenario, DetectorRole moving, Axis axis, double start,
                                 double stop, double step, const DetectorSpec& fixed_other, double kappa) {
  const auto law = scenario_rate_law(scenario, kappa);
  auto profile = scan_detector(law, ScanSpec{axis, start, stop, step}, scenario.detector(moving), fixed_other);
  profile.scenario_id = scenario.id;
  return profile;
}

CoincidenceProfile scan_scenario(const Scenario& scenario, double kappa) {
  const auto moving = scenario.scan.moving;
  const auto other = moving == DetectorRole::Signal ? DetectorRole::Idler : DetectorRole::Signal;
  return scan_detector(scenario, moving, scenario.scan.axis, scenario.scan.start, scenario.scan.stop,
                       scenario.scan.step, scenario.detector(other), kappa);
}

double calibrate_kappa(const Scenario& scenario, std::optional<GridConfig> reference_grid) {
  if (scenario.calibration.kappa) return *scenario.calibration.kappa;
  auto reference = preset(scenario.calibration.reference_preset);
  if (reference_grid) reference.grid = *reference_grid;
  static std::mutex mutex;
  static std::map<std::string, double> peaks;
  const auto key = scenario_digest(reference);
  double peak = 0.0;
  {
    std::lock_guard lock(mutex);
    if (auto it = peaks.find(key); it != peaks.end()) peak = it->second;
  }
  if (peak == 0.0) {
    try {
      const auto profile = scan_scenario(reference, 1.0);
      peak = *std::max_element(profile.rates.begin(), profile.rates.end());
    } catch (Error& e) {
      e.prepend("calibrating against preset " + reference.id);
      throw;
    }
    if (!(peak > 0.0)) throw PhysicsError("reference preset " + reference.id + " has zero peak rate");
    std::lock_guard lock(mutex);
    peaks[key] = peak;
  }
  return scenario.calibration.reference_peak / peak;
}

std::vector<SweepRow> sweep_distance(const Scenario& scenario, std::span<const double> distances, bool collimated,
                                     const SweepOptions& options) {
  for (std::size_t k = 0; k < distances.size(); ++k) {
    if (!(distances[k] > 0.0)) throw ValidationError("sweep distances must be positive");
    if (k > 0 && !(distances[k] > distances[k - 1])) throw ValidationError("sweep distances must be ascending");
  }
  const double kappa = options.kappa ? *options.kappa : calibrate_kappa(scenario);
  std::vector<SweepRow> rows;
  for (double z : distances) {
    SweepRow row;
    row.distance = z;
    row.collimated = collimated;
    Scenario s = scenario;
    for (auto& d : s.detectors) d.aperture_radius = options.aperture_radius;
    if (collimated) {
      try {
        const auto plan = design_telescope(z, -1.0, s.telescope_catalog);
        s.twin_signal = telescope_elements(plan);
      } catch (const InfeasibleError& e) {
        row.feasible = false;
        row.note = e.what();
        rows.push_back(row);
        continue;
      }
    } else {
      s.twin_signal = {FreeSpace{z}};
    }
    s.twin_idler = s.twin_signal;
    try {
      const auto profile = scan_scenario(s, kappa);
      row.peak_rate = *std::max_element(profile.rates.begin(), profile.rates.end());
      row.snr = snr(sample_counts(profile, s.counting));
    } catch (Error& e) {
      e.prepend("sweep at Z = " + std::to_string(z) + " m");
      throw;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qit
