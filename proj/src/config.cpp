#include "sas/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>

#include "sas/csv.hpp"
#include "sas/errors.hpp"

namespace sas {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool used = false;
};

struct RawConfig {
  std::string source;
  std::map<std::string, std::size_t> section_lines;
  std::map<std::string, std::map<std::string, Entry>> sections;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Comments run from a '#' or ';' that starts the line or follows whitespace.
std::string strip_comment(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((s[i] == '#' || s[i] == ';') && (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t'))
      return s.substr(0, i);
  }
  return s;
}

RawConfig parse_raw(std::istream& in, const std::string& source) {
  RawConfig raw;
  raw.source = source;
  std::string line;
  std::size_t line_no = 0;
  std::string section;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw data_error(source + ":" + std::to_string(line_no) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw data_error(source + ":" + std::to_string(line_no) + ": empty section name");
      raw.section_lines.emplace(section, line_no);
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw data_error(source + ":" + std::to_string(line_no) +
                       ": expected 'key = value' or '[section]'");
    if (section.empty())
      throw data_error(source + ":" + std::to_string(line_no) + ": key outside any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw data_error(source + ":" + std::to_string(line_no) + ": empty key");
    auto [it, inserted] = raw.sections[section].emplace(key, Entry{value, line_no});
    if (!inserted)
      throw data_error(source + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                       "' (first at line " + std::to_string(it->second.line) + ")");
  }
  return raw;
}

class Section {
 public:
  Section(RawConfig& raw, std::string name) : raw_(raw), name_(std::move(name)) {}

  std::optional<std::string> text(const std::string& key) {
    auto sec = raw_.sections.find(name_);
    if (sec == raw_.sections.end()) return std::nullopt;
    auto it = sec->second.find(key);
    if (it == sec->second.end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  }

  std::string require_text(const std::string& key) {
    auto v = text(key);
    if (!v)
      throw data_error(raw_.source + ": [" + name_ + "] is missing key '" + key + "'");
    return *v;
  }

  double require_number(const std::string& key) { return to_double(key, require_text(key)); }

  double number_or(const std::string& key, double fallback) {
    auto v = text(key);
    return v ? to_double(key, *v) : fallback;
  }

  std::uint64_t integer_or(const std::string& key, std::uint64_t fallback) {
    auto v = text(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    const char* b = v->data();
    const char* e = b + v->size();
    const auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e)
      throw data_error(raw_.source + ": [" + name_ + "] key '" + key +
                       "' has bad integer value '" + *v + "'");
    return out;
  }

 private:
  double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* b = v.data();
    const char* e = b + v.size();
    const auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e)
      throw data_error(raw_.source + ": [" + name_ + "] key '" + key +
                       "' has bad numeric value '" + v + "'");
    return out;
  }

  RawConfig& raw_;
  std::string name_;
};

std::vector<SpectrumPoint> load_spectrum(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  const std::size_t shift_col = table.column("shift_cm1");
  const std::size_t int_col = table.column("intensity_cps");
  std::vector<SpectrumPoint> points;
  points.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    points.push_back({parse_double(row.fields[shift_col], table.source, row.line, "shift_cm1"),
                      parse_double(row.fields[int_col], table.source, row.line, "intensity_cps")});
  }
  return points;
}

}  // namespace

void ExperimentConfig::validate() const {
  laser.validate();
  material.validate();
  collection.validate();
  if (simulation.n_pulses < 1) throw data_error("n_pulses must be >= 1");
  if (simulation.max_delay < 1) throw data_error("max_delay must be >= 1");
  if (!(simulation.window_lo_cm1 < simulation.window_hi_cm1))
    throw data_error("stokes window is empty");
}

ChannelProbabilities ExperimentConfig::probabilities() const {
  return derive_probabilities(laser, material, collection, simulation.window_lo_cm1,
                              simulation.window_hi_cm1);
}

ExperimentConfig parse_config(std::istream& in, const std::string& source_name,
                              const std::filesystem::path& base_dir) {
  RawConfig raw = parse_raw(in, source_name);

  static const char* kKnownSections[] = {"laser", "material", "collection", "simulation",
                                         "outputs"};
  for (const auto& [name, line] : raw.section_lines) {
    bool known = false;
    for (const char* k : kKnownSections) known |= name == k;
    if (!known)
      throw data_error(source_name + ":" + std::to_string(line) + ": unknown section [" + name +
                       "]");
  }

  ExperimentConfig cfg;

  Section laser(raw, "laser");
  cfg.laser.wavelength_nm = laser.require_number("wavelength_nm");
  cfg.laser.pulse_width_s = laser.require_number("pulse_width_fs") * 1e-15;
  cfg.laser.rep_rate_hz = laser.require_number("rep_rate_mhz") * 1e6;
  cfg.laser.power_w = laser.require_number("power_mw") * 1e-3;

  Section material(raw, "material");
  const std::string name = material.require_text("name");
  const std::string spectrum_rel = material.require_text("spectrum_csv");
  const double temperature = material.number_or("temperature_k", 295.0);
  const double band1_hi = material.require_number("band_1st_hi_cm1");
  const double band2_hi = material.number_or("band_2nd_hi_cm1", 0.0);
  const double area1 = material.require_number("stokes_area_1st_cps_cm1");
  const double area2 = material.number_or("stokes_area_2nd_cps_cm1", 0.0);
  const double c1 = material.require_number("coupling_c1_ev_cm_s");
  const double c2 = material.number_or("coupling_c2_ev_cm_s", 0.0);
  cfg.material = make_two_band_material(name, load_spectrum(base_dir / spectrum_rel),
                                        temperature, band1_hi, band2_hi, area1, area2, c1, c2);

  Section collection(raw, "collection");
  cfg.collection.mono_resolution_cm1 = collection.number_or("mono_resolution_cm1", 26.0);
  cfg.collection.stokes_center_cm1 = collection.number_or("stokes_center_cm1", band1_hi);
  cfg.collection.detection_efficiency_s = collection.number_or("detection_efficiency_s", 1.0);
  cfg.collection.detection_efficiency_as = collection.number_or("detection_efficiency_as", 1.0);
  cfg.collection.accumulation_time_s = collection.number_or("accumulation_time_s", 600.0);

  Section simulation(raw, "simulation");
  cfg.simulation.n_pulses = simulation.integer_or("n_pulses", 1000000);
  cfg.simulation.seed = simulation.integer_or("seed", 0);
  cfg.simulation.max_delay = static_cast<int>(simulation.integer_or("max_delay", 50));
  const double half = 0.5 * cfg.collection.mono_resolution_cm1;
  cfg.simulation.window_lo_cm1 = simulation.number_or(
      "stokes_window_lo_cm1", cfg.collection.stokes_center_cm1 - half);
  cfg.simulation.window_hi_cm1 = simulation.number_or(
      "stokes_window_hi_cm1", cfg.collection.stokes_center_cm1 + half);

  Section outputs(raw, "outputs");
  if (auto dir = outputs.text("directory")) cfg.output_dir = *dir;

  for (const auto& [sec_name, entries] : raw.sections) {
    for (const auto& [key, entry] : entries) {
      if (!entry.used)
        throw data_error(source_name + ":" + std::to_string(entry.line) + ": unknown key '" +
                         key + "' in [" + sec_name + "]");
    }
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  return parse_config(in, path.filename().string(), path.parent_path());
}

}  // namespace sas
