#include "qit/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "qit/errors.hpp"
#include "qit/field_io.hpp"
#include "qit/profile.hpp"
#include "qit/simulation.hpp"

namespace qit {

namespace {

void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content,
                std::vector<std::string>& manifest) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + (dir / name).string());
  out << content;
  manifest.push_back(name);
}

std::vector<double> axis_points(double start, double stop, double step, std::size_t limit) {
  const double span = stop - start;
  if (limit >= 2 && span / step + 1.0 > static_cast<double>(limit)) step = span / static_cast<double>(limit - 1);
  return scan_coordinates(ScanSpec{Axis::X, start, stop, step});
}

}  // namespace

RunReport run(const Scenario& input, const RunOptions& options) {
  Scenario scenario = input;
  if (options.seed) scenario.counting.seed = *options.seed;
  scenario.validate();

  RunReport report;
  report.scenario_id = scenario.id;
  report.digest = scenario_digest(scenario);
  report.assumed = scenario.assumed;
  try {
    const double kappa = options.kappa ? *options.kappa : calibrate_kappa(scenario, options.reference_grid);
    const auto path = unfolded_pump_train(scenario);
    const auto law = scenario_rate_law(scenario, kappa);
    const auto moving_role = scenario.scan.moving;
    const auto& moving = scenario.detector(moving_role);
    const auto& fixed = scenario.detector(moving_role == DetectorRole::Signal ? DetectorRole::Idler
                                                                              : DetectorRole::Signal);
    report.profile = scan_detector(law, ScanSpec{scenario.scan.axis, scenario.scan.start, scenario.scan.stop,
                                                 scenario.scan.step},
                                   moving, fixed);
    report.profile.scenario_id = scenario.id;
    report.counted = sample_counts(report.profile, scenario.counting);

    report.metrics.kappa = kappa;
    report.metrics.divergence_length = path.divergence_length;
    report.metrics.peak_rate = peak_rate(report.profile);
    report.metrics.contrast = contrast(report.profile);
    report.metrics.snr = snr(report.counted);
    try {
      const auto feature = dominant_feature(report.profile);
      if (feature.is_dip) report.metrics.dip_width = feature.width;
    } catch (const ValidationError&) {
      // flat or truncated profile: no dip to report
    }

    if (!options.out_dir.empty()) {
      std::filesystem::create_directories(options.out_dir);
      const std::string stem = scenario.id;
      std::ostringstream profile_csv, counts_csv;
      write_profile_csv(profile_csv, report.profile);
      write_counts_csv(counts_csv, report.counted);
      write_file(options.out_dir, stem + "_profile.csv", profile_csv.str(), report.files);
      write_file(options.out_dir, stem + "_counts.csv", counts_csv.str(), report.files);
      if (options.map_points > 0) {
        const auto pts = axis_points(scenario.scan.start, scenario.scan.stop, scenario.scan.step, options.map_points);
        const auto map = coincidence_map(law, pts, pts, moving, fixed);
        std::ostringstream pgm, csv;
        write_pgm(pgm, map, pts.size(), pts.size());
        csv << "x_m,y_m,rate_pairs_per_s\n";
        char line[96];
        for (std::size_t j = 0; j < pts.size(); ++j) {
          for (std::size_t i = 0; i < pts.size(); ++i) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", pts[i], pts[j], map[j * pts.size() + i]);
            csv << line;
          }
        }
        write_file(options.out_dir, stem + "_map.pgm", pgm.str(), report.files);
        write_file(options.out_dir, stem + "_map.csv", csv.str(), report.files);
      }
      report.files.push_back(stem + "_report.json");
      std::ofstream out(options.out_dir / (stem + "_report.json"), std::ios::binary);
      if (!out) throw ValidationError("cannot write report to " + options.out_dir.string());
      out << report_json(report);
    }
  } catch (Error& e) {
    e.prepend("scenario " + scenario.id);
    throw;
  }
  return report;
}

std::string report_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["scenario_id"] = report.scenario_id;
  j["scenario_digest_fnv1a64"] = report.digest;
  nlohmann::ordered_json m;
  if (report.metrics.dip_width) {
    m["dip_width_m"] = *report.metrics.dip_width;
  } else {
    m["dip_width_m"] = nullptr;
  }
  m["dip_contrast"] = report.metrics.contrast;
  m["peak_rate_pairs_per_s"] = report.metrics.peak_rate;
  m["snr"] = report.metrics.snr;
  m["kappa"] = report.metrics.kappa;
  m["divergence_length_m"] = report.metrics.divergence_length;
  j["metrics"] = m;
  j["assumed"] = report.assumed;
  j["files"] = report.files;
  return j.dump(2) + "\n";
}

}  // namespace qit
