#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qit/biphoton.hpp"
#include "qit/counting.hpp"
#include "qit/paraxial.hpp"
#include "qit/propagation.hpp"

namespace qit {

inline constexpr int kScenarioSchemaVersion = 1;

enum class WavenumberMode { Degenerate, Exact };
enum class MaskType { None, Wire };

// Grid-independent descriptions of mask elements inside a train.
struct ApertureStop {
  double radius = 0.0;
  bool operator==(const ApertureStop&) const = default;
};
struct WireStop {
  double width = 0.0;
  bool operator==(const WireStop&) const = default;
};

using ElementSpec = std::variant<FreeSpace, ThinLens, ApertureStop, WireStop>;

struct GridConfig {
  std::size_t n = 512;
  double pitch = 20e-6;
  bool operator==(const GridConfig&) const = default;
};

struct PumpConfig {
  double wavelength = 425e-9;
  double waist = 1e-3;  // at the mask plane
  bool operator==(const PumpConfig&) const = default;
};

struct TwinConfig {
  double signal_wavelength = 890e-9;
  double idler_wavelength = 800e-9;
  WavenumberMode mode = WavenumberMode::Degenerate;
  bool operator==(const TwinConfig&) const = default;
};

struct MaskConfig {
  MaskType type = MaskType::Wire;
  double width = 0.2e-3;
  double position = 0.0;  // Z_M1, mask to crystal along the pump
  bool operator==(const MaskConfig&) const = default;
};

struct ScanConfig {
  DetectorRole moving = DetectorRole::Signal;
  Axis axis = Axis::X;
  double start = -1e-3;
  double stop = 1e-3;
  double step = 10e-6;
  bool operator==(const ScanConfig&) const = default;
};

struct CalibrationConfig {
  std::optional<double> kappa;
  std::string reference_preset = "fig4b";
  double reference_peak = 1000.0;  // pairs/s at the reference peak
  bool operator==(const CalibrationConfig&) const = default;
};

struct Scenario {
  std::string id;
  std::string description;
  std::vector<std::string> assumed;
  GridConfig grid;
  PumpConfig pump;
  TwinConfig twins;
  MaskConfig mask;
  std::vector<ElementSpec> pump_side;    // mask plane to crystal
  std::vector<ElementSpec> twin_signal;  // crystal to signal detector
  std::vector<ElementSpec> twin_idler;   // crystal to idler detector
  std::array<DetectorSpec, 2> detectors{
      DetectorSpec{DetectorRole::Signal, {}, 0.0}, DetectorSpec{DetectorRole::Idler, {}, 0.0}};
  ScanConfig scan;
  CountingConfig counting;
  CalibrationConfig calibration;
  std::vector<double> telescope_catalog{0.1, 0.15, 0.25, 0.5};

  const DetectorSpec& detector(DetectorRole role) const;
  DetectorSpec& detector(DetectorRole role);
  // Checks cross-field invariants; throws ScenarioError naming the key.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario(const std::string& text);
std::string emit_scenario(const Scenario& scenario);
// FNV-1a 64-bit of the canonical emitted document, as 16 hex digits.
std::string scenario_digest(const Scenario& scenario);

std::vector<std::string> preset_names();
Scenario preset(const std::string& name);
// Preset name or path to a scenario file.
Scenario load_scenario(const std::string& name_or_path);

OpticalElement to_element(const ElementSpec& spec, const GridConfig& grid);
OpticalTrain to_train(const std::vector<ElementSpec>& specs, const GridConfig& grid);
std::vector<ElementSpec> telescope_elements(const TelescopePlan& plan);
// A twin_side block ready to paste into a scenario document.
std::string emit_twin_side(const TelescopePlan& plan);

std::string to_string(DetectorRole role);
std::string to_string(Axis axis);

}  // namespace qit
