#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qit/biphoton.hpp"
#include "qit/counting.hpp"
#include "qit/scenario.hpp"

namespace qit {

struct RunOptions {
  // Empty: compute only, write nothing.
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> kappa;
  // Grid used when simulating the calibration reference.
  std::optional<GridConfig> reference_grid;
  // Upper bound on points per axis of the 2D coincidence map (0 disables the map).
  std::size_t map_points = 129;
};

struct RunMetrics {
  std::optional<double> dip_width;  // m, when the dominant feature is a dip
  double contrast = 0.0;
  double peak_rate = 0.0;  // pairs/s
  double snr = 0.0;
  double kappa = 0.0;
  double divergence_length = 0.0;  // m
};

struct RunReport {
  std::string scenario_id;
  std::string digest;
  CoincidenceProfile profile;
  CountedProfile counted;
  RunMetrics metrics;
  std::vector<std::string> files;  // relative to out_dir
  std::vector<std::string> assumed;
};

RunReport run(const Scenario& scenario, const RunOptions& options = {});

// report.json contents (also written by run when out_dir is set).
std::string report_json(const RunReport& report);

}  // namespace qit
