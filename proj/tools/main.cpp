// qit: run coincidence-imaging scenarios from the command line.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qit/errors.hpp"
#include "qit/paraxial.hpp"
#include "qit/profile.hpp"
#include "qit/run.hpp"
#include "qit/scenario.hpp"
#include "qit/simulation.hpp"

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<std::size_t> grid_n;
  std::optional<double> pitch_um;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "RNG seed for count sampling");
  cmd->add_option("--out-dir", c.out_dir, "Output directory (default $QIT_OUT_DIR or ./qit_out)");
  cmd->add_option("--grid-n", c.grid_n, "Override grid size N")->check(CLI::Range(16, 16384));
  cmd->add_option("--pitch-um", c.pitch_um, "Override grid pitch in micrometres")->check(CLI::PositiveNumber);
}

std::filesystem::path out_dir(const Common& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv("QIT_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "qit_out";
}

std::optional<qit::GridConfig> grid_override(const Common& c, const qit::GridConfig& base) {
  if (!c.grid_n && !c.pitch_um) return std::nullopt;
  qit::GridConfig g = base;
  if (c.grid_n) g.n = *c.grid_n;
  if (c.pitch_um) g.pitch = *c.pitch_um * 1e-6;
  return g;
}

qit::Scenario load(const std::string& name, const Common& c) {
  auto s = qit::load_scenario(name);
  if (auto g = grid_override(c, s.grid)) s.grid = *g;
  if (c.seed) s.counting.seed = *c.seed;
  s.validate();
  return s;
}

qit::CoincidenceProfile read_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qit::ValidationError("cannot read " + path);
  return qit::read_profile_csv(in);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coincidence-imaging simulator: propagation, two-photon rates, telescope design"};
  app.require_subcommand(1);

  Common common;
  std::string scenario_name;

  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario or preset and write CSV/PGM/JSON outputs");
  run_cmd->add_option("scenario", scenario_name, "Preset name (fig4a, fig4b, fig5) or scenario file")->required();
  add_common(run_cmd, common);

  auto* scan_cmd = app.add_subcommand("scan", "Scan one detector and write the deterministic profile CSV");
  std::string moving = "signal", axis = "x";
  std::optional<double> start, stop, step, fixed_x, fixed_y;
  scan_cmd->add_option("scenario", scenario_name, "Preset name or scenario file")->required();
  scan_cmd->add_option("--moving", moving, "signal or idler")->check(CLI::IsMember({"signal", "idler"}));
  scan_cmd->add_option("--axis", axis, "x or y")->check(CLI::IsMember({"x", "y"}));
  scan_cmd->add_option("--start-m", start, "Scan start (m)");
  scan_cmd->add_option("--stop-m", stop, "Scan stop (m)");
  scan_cmd->add_option("--step-m", step, "Scan step (m)");
  scan_cmd->add_option("--fixed-x-m", fixed_x, "Fixed detector x (m)");
  scan_cmd->add_option("--fixed-y-m", fixed_y, "Fixed detector y (m)");
  add_common(scan_cmd, common);

  auto* sweep_cmd = app.add_subcommand("sweep", "Peak rate and SNR versus crystal-detector distance");
  bool collimated = false, free_space = false;
  std::vector<double> distances;
  std::string sweep_base = "fig4b";
  sweep_cmd->add_option("--scenario", sweep_base, "Base preset or scenario file (default fig4b)");
  auto* c_flag = sweep_cmd->add_flag("--collimated", collimated, "Insert a designed telescope per distance");
  auto* f_flag = sweep_cmd->add_flag("--free", free_space, "Free propagation to the detectors");
  c_flag->excludes(f_flag);
  sweep_cmd->add_option("--distances", distances, "Distances in m, ascending")->required()->delimiter(',');
  add_common(sweep_cmd, common);

  auto* design_cmd = app.add_subcommand("design-telescope", "Synthesise the two-lens-per-beam relay");
  double total = 0.0, magnification = -1.0;
  std::vector<double> catalog{0.1, 0.15, 0.25, 0.5};
  design_cmd->add_option("--total-m", total, "Crystal to detector distance (m)")->required();
  design_cmd->add_option("--magnification", magnification, "Target net magnification (default -1)");
  design_cmd->add_option("--catalog-m", catalog, "Available focal lengths (m)")->delimiter(',');

  auto* compare_cmd = app.add_subcommand("compare", "Shape comparison of two profile CSVs");
  std::string csv_a, csv_b;
  compare_cmd->add_option("a", csv_a, "First profile CSV")->required();
  compare_cmd->add_option("b", csv_b, "Second profile CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      const auto s = load(scenario_name, common);
      qit::RunOptions opts;
      opts.out_dir = out_dir(common);
      if (common.grid_n || common.pitch_um) {
        opts.reference_grid = qit::preset(s.calibration.reference_preset).grid;
        if (common.grid_n) opts.reference_grid->n = *common.grid_n;
        if (common.pitch_um) opts.reference_grid->pitch = *common.pitch_um * 1e-6;
      }
      const auto report = qit::run(s, opts);
      std::cout << qit::report_json(report);
      std::cerr << "wrote " << report.files.size() << " files to " << opts.out_dir.string() << "\n";
    } else if (scan_cmd->parsed()) {
      const auto s = load(scenario_name, common);
      const auto role = moving == "signal" ? qit::DetectorRole::Signal : qit::DetectorRole::Idler;
      auto fixed = s.detector(role == qit::DetectorRole::Signal ? qit::DetectorRole::Idler : qit::DetectorRole::Signal);
      if (fixed_x) fixed.position.x = *fixed_x;
      if (fixed_y) fixed.position.y = *fixed_y;
      const double kappa = qit::calibrate_kappa(s);
      const auto profile = qit::scan_detector(s, role, axis == "x" ? qit::Axis::X : qit::Axis::Y,
                                              start.value_or(s.scan.start), stop.value_or(s.scan.stop),
                                              step.value_or(s.scan.step), fixed, kappa);
      const auto dir = out_dir(common);
      std::filesystem::create_directories(dir);
      const auto file = dir / (s.id + "_scan_" + moving + "_" + axis + ".csv");
      std::ofstream out(file);
      qit::write_profile_csv(out, profile);
      std::cout << file.string() << "\n";
    } else if (sweep_cmd->parsed()) {
      if (!collimated && !free_space) throw qit::ValidationError("sweep needs --collimated or --free");
      const auto s = load(sweep_base, common);
      const auto rows = qit::sweep_distance(s, distances, collimated);
      const auto dir = out_dir(common);
      std::filesystem::create_directories(dir);
      const auto file = dir / (s.id + (collimated ? "_sweep_collimated.csv" : "_sweep_free.csv"));
      std::ofstream out(file);
      out << "Z_m,peak_rate,snr,collimated_flag\n";
      for (const auto& r : rows) {
        out << fmt(r.distance) << ',';
        if (r.feasible) {
          out << fmt(r.peak_rate) << ',' << fmt(r.snr);
        } else {
          out << "infeasible,infeasible";
        }
        out << ',' << (r.collimated ? 1 : 0) << '\n';
        if (!r.feasible) std::cerr << "Z=" << r.distance << " m: " << r.note << "\n";
      }
      std::cout << file.string() << "\n";
    } else if (design_cmd->parsed()) {
      const auto plan = qit::design_telescope(total, magnification, catalog);
      std::cout << "# f1=f2=" << plan.focal[0] << " m at " << plan.stations[0] << " m; f3=f4=" << plan.focal[2]
                << " m at " << plan.stations[1] << " m; detectors at " << plan.stations[2]
                << " m; magnification " << plan.magnification << "\n";
      std::cout << qit::emit_twin_side(plan);
    } else if (compare_cmd->parsed()) {
      const auto c = qit::compare_profiles(read_profile(csv_a), read_profile(csv_b));
      std::cout << "ncc," << fmt(c.ncc) << "\nwidth_ratio," << fmt(c.width_ratio) << "\n";
    }
  } catch (const qit::PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return 3;
  } catch (const qit::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
