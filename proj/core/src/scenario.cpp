#include "qit/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "qit/errors.hpp"

namespace qit {

namespace detail {
const std::map<std::string, std::string>& preset_texts();
}

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kUnitSuffixes[] = {"_m", "_s", "_per_s", "_pairs_per_s"};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// Walks one JSON object, remembering which keys were read so leftovers can be
// reported as unknown (or as a missing unit suffix).
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path, std::vector<std::string> allowed)
      : j_(j), path_(std::move(path)), allowed_(std::move(allowed)) {
    if (!j_.is_object()) throw ScenarioError(path_, "expected an object");
    std::vector<std::string> unit_errors;
    std::vector<std::string> unknown;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      const std::string& key = it.key();
      if (std::find(allowed_.begin(), allowed_.end(), key) != allowed_.end()) continue;
      for (const char* suffix : kUnitSuffixes) {
        if (std::find(allowed_.begin(), allowed_.end(), key + suffix) != allowed_.end()) {
          throw ScenarioError(path_ + "/" + key, "missing SI unit suffix; write '" + key + suffix + "'");
        }
      }
      unknown.push_back(key);
    }
    if (!unknown.empty()) {
      throw ScenarioError(path_ + "/" + unknown.front(),
                          "unknown key (allowed: " + join(allowed_) + ")");
    }
  }

  void require(const std::vector<std::string>& keys) const {
    std::vector<std::string> missing;
    for (const auto& k : keys) {
      if (!j_.contains(k)) missing.push_back(k);
    }
    if (!missing.empty()) throw ScenarioError(path_, "missing required keys: " + join(missing));
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& at(const std::string& key) const { return j_.at(key); }
  std::string path(const std::string& key) const { return path_ + "/" + key; }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_number()) throw ScenarioError(path(key), "expected a number");
    return v.get<double>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_string()) throw ScenarioError(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_number_unsigned()) throw ScenarioError(path(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string> allowed_;
};

template <class Enum>
Enum parse_enum(const std::string& value, const std::string& path,
                const std::vector<std::pair<std::string, Enum>>& options) {
  std::vector<std::string> names;
  for (const auto& [name, e] : options) {
    if (name == value) return e;
    names.push_back(name);
  }
  throw ScenarioError(path, "'" + value + "' is not one of: " + join(names));
}

const std::vector<std::pair<std::string, DetectorRole>> kRoles = {{"signal", DetectorRole::Signal},
                                                                  {"idler", DetectorRole::Idler}};
const std::vector<std::pair<std::string, Axis>> kAxes = {{"x", Axis::X}, {"y", Axis::Y}};
const std::vector<std::pair<std::string, WavenumberMode>> kModes = {
    {"degenerate", WavenumberMode::Degenerate}, {"exact", WavenumberMode::Exact}};
const std::vector<std::pair<std::string, MaskType>> kMaskTypes = {{"wire", MaskType::Wire},
                                                                  {"none", MaskType::None}};

template <class Enum>
std::string enum_name(Enum e, const std::vector<std::pair<std::string, Enum>>& options) {
  for (const auto& [name, v] : options) {
    if (v == e) return name;
  }
  return "?";
}

ElementSpec parse_element(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ScenarioError(path, "element needs a string 'type' (free_space, thin_lens, aperture, wire)");
  const auto type = j.at("type").get<std::string>();
  if (type == "free_space") {
    ObjectReader r(j, path, {"type", "distance_m"});
    r.require({"distance_m"});
    return FreeSpace{r.number("distance_m", 0.0)};
  }
  if (type == "thin_lens") {
    ObjectReader r(j, path, {"type", "focal_m", "aperture_radius_m"});
    r.require({"focal_m"});
    ThinLens lens{r.number("focal_m", 0.0), std::nullopt};
    if (r.has("aperture_radius_m")) lens.aperture_radius = r.number("aperture_radius_m", 0.0);
    return lens;
  }
  if (type == "aperture") {
    ObjectReader r(j, path, {"type", "radius_m"});
    r.require({"radius_m"});
    return ApertureStop{r.number("radius_m", 0.0)};
  }
  if (type == "wire") {
    ObjectReader r(j, path, {"type", "width_m"});
    r.require({"width_m"});
    return WireStop{r.number("width_m", 0.0)};
  }
  throw ScenarioError(path + "/type", "unknown element type '" + type + "'");
}

std::vector<ElementSpec> parse_elements(const json& j, const std::string& path) {
  if (!j.is_array()) throw ScenarioError(path, "expected an array of elements");
  std::vector<ElementSpec> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_element(j[k], path + "/" + std::to_string(k)));
  return out;
}

json emit_element(const ElementSpec& e) {
  json j;
  if (const auto* f = std::get_if<FreeSpace>(&e)) {
    j["type"] = "free_space";
    j["distance_m"] = f->distance;
  } else if (const auto* l = std::get_if<ThinLens>(&e)) {
    j["type"] = "thin_lens";
    j["focal_m"] = l->focal;
    if (l->aperture_radius) j["aperture_radius_m"] = *l->aperture_radius;
  } else if (const auto* a = std::get_if<ApertureStop>(&e)) {
    j["type"] = "aperture";
    j["radius_m"] = a->radius;
  } else {
    j["type"] = "wire";
    j["width_m"] = std::get<WireStop>(e).width;
  }
  return j;
}

json emit_elements(const std::vector<ElementSpec>& elements) {
  json j = json::array();
  for (const auto& e : elements) j.push_back(emit_element(e));
  return j;
}

void check_positive(double v, const std::string& path) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ScenarioError(path, "must be positive");
}

void check_non_negative(double v, const std::string& path) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ScenarioError(path, "must be >= 0 (got " + std::to_string(v) + ")");
}

void validate_elements(const std::vector<ElementSpec>& elements, const std::string& path) {
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const std::string p = path + "/" + std::to_string(k);
    const auto& e = elements[k];
    if (const auto* f = std::get_if<FreeSpace>(&e)) {
      check_non_negative(f->distance, p + "/distance_m");
    } else if (const auto* l = std::get_if<ThinLens>(&e)) {
      if (l->focal == 0.0 || !std::isfinite(l->focal)) throw ScenarioError(p + "/focal_m", "must be finite and non-zero");
      if (l->aperture_radius) check_positive(*l->aperture_radius, p + "/aperture_radius_m");
    } else if (const auto* a = std::get_if<ApertureStop>(&e)) {
      check_positive(a->radius, p + "/radius_m");
    } else {
      check_positive(std::get<WireStop>(e).width, p + "/width_m");
    }
  }
}

double free_length(const std::vector<ElementSpec>& elements) {
  double total = 0.0;
  for (const auto& e : elements) {
    if (const auto* f = std::get_if<FreeSpace>(&e)) total += f->distance;
  }
  return total;
}

}  // namespace

std::string to_string(DetectorRole role) { return enum_name(role, kRoles); }
std::string to_string(Axis axis) { return enum_name(axis, kAxes); }

const DetectorSpec& Scenario::detector(DetectorRole role) const {
  return detectors[0].role == role ? detectors[0] : detectors[1];
}

DetectorSpec& Scenario::detector(DetectorRole role) {
  return detectors[0].role == role ? detectors[0] : detectors[1];
}

void Scenario::validate() const {
  if (id.empty()) throw ScenarioError("/id", "must be a non-empty string");
  if (grid.n < 16) throw ScenarioError("/grid/n", "must be >= 16");
  check_positive(grid.pitch, "/grid/pitch_m");
  check_positive(pump.wavelength, "/pump/wavelength_m");
  check_positive(pump.waist, "/pump/waist_m");
  check_positive(twins.signal_wavelength, "/twins/signal_wavelength_m");
  check_positive(twins.idler_wavelength, "/twins/idler_wavelength_m");
  if (mask.type == MaskType::Wire) check_positive(mask.width, "/mask/width_m");
  check_non_negative(mask.position, "/mask/position_m");
  validate_elements(pump_side, "/pump_side");
  validate_elements(twin_signal, "/twin_side/signal");
  validate_elements(twin_idler, "/twin_side/idler");
  const double pump_len = free_length(pump_side);
  if (std::abs(pump_len - mask.position) > 1e-9) {
    throw ScenarioError("/pump_side", "free-space distances sum to " + std::to_string(pump_len) +
                                          " m but /mask/position_m is " + std::to_string(mask.position) + " m");
  }
  if (detectors[0].role == detectors[1].role)
    throw ScenarioError("/detectors", "need exactly one signal and one idler detector");
  for (std::size_t k = 0; k < 2; ++k) {
    const std::string p = "/detectors/" + std::to_string(k);
    if (!std::isfinite(detectors[k].position.x)) throw ScenarioError(p + "/x_m", "must be finite");
    if (!std::isfinite(detectors[k].position.y)) throw ScenarioError(p + "/y_m", "must be finite");
    check_non_negative(detectors[k].aperture_radius, p + "/aperture_radius_m");
  }
  check_positive(scan.step, "/scan/step_m");
  if (!std::isfinite(scan.start)) throw ScenarioError("/scan/start_m", "must be finite");
  if (!(scan.stop >= scan.start) || !std::isfinite(scan.stop))
    throw ScenarioError("/scan/stop_m", "must be finite and >= start_m");
  try {
    counting.validate();
  } catch (const ValidationError& e) {
    throw ScenarioError("/counting", e.what());
  }
  if (calibration.kappa) check_positive(*calibration.kappa, "/calibration/kappa");
  check_positive(calibration.reference_peak, "/calibration/reference_peak_pairs_per_s");
  for (std::size_t k = 0; k < telescope_catalog.size(); ++k)
    check_positive(telescope_catalog[k], "/telescope_catalog_m/" + std::to_string(k));
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  const bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) {
    doc = json::object();
  } else {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ScenarioError("", std::string("not valid JSON: ") + e.what());
    }
  }
  ObjectReader top(doc, "",
                   {"schema_version", "id", "description", "assumed", "grid", "pump", "twins", "mask",
                    "pump_side", "twin_side", "detectors", "scan", "counting", "calibration",
                    "telescope_catalog_m"});
  top.require({"id", "pump", "mask", "twin_side", "detectors", "scan"});

  Scenario s;
  if (top.has("schema_version") && top.unsigned_integer("schema_version", 0) != kScenarioSchemaVersion)
    throw ScenarioError("/schema_version", "unsupported schema version");
  s.id = top.string("id", "");
  s.description = top.string("description", "");
  if (top.has("assumed")) {
    const auto& a = top.at("assumed");
    if (!a.is_array()) throw ScenarioError("/assumed", "expected an array of strings");
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!a[k].is_string()) throw ScenarioError("/assumed/" + std::to_string(k), "expected a string");
      s.assumed.push_back(a[k].get<std::string>());
    }
  }
  if (top.has("grid")) {
    ObjectReader g(top.at("grid"), "/grid", {"n", "pitch_m"});
    s.grid.n = static_cast<std::size_t>(g.unsigned_integer("n", s.grid.n));
    s.grid.pitch = g.number("pitch_m", s.grid.pitch);
  }
  {
    ObjectReader p(top.at("pump"), "/pump", {"wavelength_m", "waist_m"});
    p.require({"wavelength_m", "waist_m"});
    s.pump.wavelength = p.number("wavelength_m", 0.0);
    s.pump.waist = p.number("waist_m", 0.0);
  }
  if (top.has("twins")) {
    ObjectReader t(top.at("twins"), "/twins", {"signal_wavelength_m", "idler_wavelength_m", "wavenumber_mode"});
    s.twins.signal_wavelength = t.number("signal_wavelength_m", s.twins.signal_wavelength);
    s.twins.idler_wavelength = t.number("idler_wavelength_m", s.twins.idler_wavelength);
    if (t.has("wavenumber_mode"))
      s.twins.mode = parse_enum(t.string("wavenumber_mode", ""), "/twins/wavenumber_mode", kModes);
  }
  {
    ObjectReader m(top.at("mask"), "/mask", {"type", "width_m", "position_m"});
    m.require({"type", "position_m"});
    s.mask.type = parse_enum(m.string("type", ""), "/mask/type", kMaskTypes);
    if (s.mask.type == MaskType::Wire) m.require({"width_m"});
    s.mask.width = m.number("width_m", s.mask.type == MaskType::Wire ? 0.0 : s.mask.width);
    s.mask.position = m.number("position_m", 0.0);
  }
  if (top.has("pump_side")) {
    s.pump_side = parse_elements(top.at("pump_side"), "/pump_side");
  } else if (s.mask.position > 0.0) {
    s.pump_side = {FreeSpace{s.mask.position}};
  }
  {
    ObjectReader t(top.at("twin_side"), "/twin_side", {"signal", "idler"});
    t.require({"signal", "idler"});
    s.twin_signal = parse_elements(t.at("signal"), "/twin_side/signal");
    s.twin_idler = parse_elements(t.at("idler"), "/twin_side/idler");
  }
  {
    const auto& d = top.at("detectors");
    if (!d.is_array() || d.size() != 2) throw ScenarioError("/detectors", "expected exactly two detectors");
    for (std::size_t k = 0; k < 2; ++k) {
      const std::string p = "/detectors/" + std::to_string(k);
      ObjectReader r(d[k], p, {"role", "x_m", "y_m", "aperture_radius_m"});
      r.require({"role"});
      s.detectors[k].role = parse_enum(r.string("role", ""), p + "/role", kRoles);
      s.detectors[k].position = {r.number("x_m", 0.0), r.number("y_m", 0.0)};
      s.detectors[k].aperture_radius = r.number("aperture_radius_m", 0.0);
    }
  }
  {
    ObjectReader r(top.at("scan"), "/scan", {"moving", "axis", "start_m", "stop_m", "step_m"});
    r.require({"moving", "start_m", "stop_m", "step_m"});
    s.scan.moving = parse_enum(r.string("moving", ""), "/scan/moving", kRoles);
    s.scan.axis = parse_enum(r.string("axis", "x"), "/scan/axis", kAxes);
    s.scan.start = r.number("start_m", 0.0);
    s.scan.stop = r.number("stop_m", 0.0);
    s.scan.step = r.number("step_m", 0.0);
  }
  if (top.has("counting")) {
    ObjectReader r(top.at("counting"), "/counting",
                   {"acquisition_time_s", "singles_signal_per_s", "singles_idler_per_s",
                    "coincidence_window_s", "seed"});
    s.counting.acquisition_time = r.number("acquisition_time_s", s.counting.acquisition_time);
    s.counting.singles_signal = r.number("singles_signal_per_s", s.counting.singles_signal);
    s.counting.singles_idler = r.number("singles_idler_per_s", s.counting.singles_idler);
    s.counting.coincidence_window = r.number("coincidence_window_s", s.counting.coincidence_window);
    s.counting.seed = r.unsigned_integer("seed", s.counting.seed);
  }
  if (top.has("calibration")) {
    ObjectReader r(top.at("calibration"), "/calibration",
                   {"kappa", "reference_preset", "reference_peak_pairs_per_s"});
    if (r.has("kappa")) s.calibration.kappa = r.number("kappa", 0.0);
    s.calibration.reference_preset = r.string("reference_preset", s.calibration.reference_preset);
    s.calibration.reference_peak = r.number("reference_peak_pairs_per_s", s.calibration.reference_peak);
  }
  if (top.has("telescope_catalog_m")) {
    const auto& c = top.at("telescope_catalog_m");
    if (!c.is_array()) throw ScenarioError("/telescope_catalog_m", "expected an array of focal lengths");
    s.telescope_catalog.clear();
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!c[k].is_number()) throw ScenarioError("/telescope_catalog_m/" + std::to_string(k), "expected a number");
      s.telescope_catalog.push_back(c[k].get<double>());
    }
  }
  s.validate();
  return s;
}

std::string emit_scenario(const Scenario& s) {
  json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["id"] = s.id;
  j["description"] = s.description;
  j["assumed"] = s.assumed;
  j["grid"] = {{"n", s.grid.n}, {"pitch_m", s.grid.pitch}};
  j["pump"] = {{"wavelength_m", s.pump.wavelength}, {"waist_m", s.pump.waist}};
  j["twins"] = {{"signal_wavelength_m", s.twins.signal_wavelength},
                {"idler_wavelength_m", s.twins.idler_wavelength},
                {"wavenumber_mode", enum_name(s.twins.mode, kModes)}};
  j["mask"] = {{"type", enum_name(s.mask.type, kMaskTypes)}, {"width_m", s.mask.width},
               {"position_m", s.mask.position}};
  j["pump_side"] = emit_elements(s.pump_side);
  j["twin_side"] = {{"signal", emit_elements(s.twin_signal)}, {"idler", emit_elements(s.twin_idler)}};
  j["detectors"] = json::array();
  for (const auto& d : s.detectors) {
    j["detectors"].push_back({{"role", to_string(d.role)},
                              {"x_m", d.position.x},
                              {"y_m", d.position.y},
                              {"aperture_radius_m", d.aperture_radius}});
  }
  j["scan"] = {{"moving", to_string(s.scan.moving)}, {"axis", to_string(s.scan.axis)},
               {"start_m", s.scan.start}, {"stop_m", s.scan.stop}, {"step_m", s.scan.step}};
  j["counting"] = {{"acquisition_time_s", s.counting.acquisition_time},
                   {"singles_signal_per_s", s.counting.singles_signal},
                   {"singles_idler_per_s", s.counting.singles_idler},
                   {"coincidence_window_s", s.counting.coincidence_window},
                   {"seed", s.counting.seed}};
  json cal;
  if (s.calibration.kappa) cal["kappa"] = *s.calibration.kappa;
  cal["reference_preset"] = s.calibration.reference_preset;
  cal["reference_peak_pairs_per_s"] = s.calibration.reference_peak;
  j["calibration"] = cal;
  j["telescope_catalog_m"] = s.telescope_catalog;
  return j.dump(2) + "\n";
}

std::string scenario_digest(const Scenario& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : emit_scenario(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::preset_texts()) names.push_back(name);
  return names;
}

Scenario preset(const std::string& name) {
  const auto& texts = detail::preset_texts();
  auto it = texts.find(name);
  if (it == texts.end()) throw ValidationError("unknown preset '" + name + "' (have: " + join(preset_names()) + ")");
  try {
    return parse_scenario(it->second);
  } catch (Error& e) {
    e.prepend("preset " + name);
    throw;
  }
}

Scenario load_scenario(const std::string& name_or_path) {
  if (detail::preset_texts().count(name_or_path) != 0) return preset(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw ValidationError("'" + name_or_path + "' is neither a preset nor a readable file");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scenario(text.str());
  } catch (Error& e) {
    e.prepend(name_or_path);
    throw;
  }
}

OpticalElement to_element(const ElementSpec& spec, const GridConfig& grid) {
  if (const auto* f = std::get_if<FreeSpace>(&spec)) return *f;
  if (const auto* l = std::get_if<ThinLens>(&spec)) return *l;
  if (const auto* a = std::get_if<ApertureStop>(&spec))
    return Mask{circular_aperture(a->radius, grid.n, grid.pitch)};
  return Mask{wire_mask(std::get<WireStop>(spec).width, grid.n, grid.pitch)};
}

OpticalTrain to_train(const std::vector<ElementSpec>& specs, const GridConfig& grid) {
  OpticalTrain t;
  for (const auto& s : specs) t.elements.push_back(to_element(s, grid));
  return t;
}

std::vector<ElementSpec> telescope_elements(const TelescopePlan& plan) {
  return {FreeSpace{plan.stations[0]}, ThinLens{plan.focal[0], std::nullopt},
          FreeSpace{plan.stations[1] - plan.stations[0]}, ThinLens{plan.focal[2], std::nullopt},
          FreeSpace{plan.stations[2] - plan.stations[1]}};
}

std::string emit_twin_side(const TelescopePlan& plan) {
  const auto elements = telescope_elements(plan);
  json j;
  j["twin_side"] = {{"signal", emit_elements(elements)}, {"idler", emit_elements(elements)}};
  return j.dump(2) + "\n";
}

}  // namespace qit
