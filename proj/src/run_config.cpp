#include "nmosc/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "nmosc/errors.hpp"
#include "nmosc/text_io.hpp"

namespace nmosc {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

struct RawConfig {
  std::map<std::string, std::pair<std::string, std::size_t>> values;  // key -> (value, line)
  std::string source;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    auto it = values.find(key);
    if (it != values.end())
      throw ConfigError(source + ":" + std::to_string(it->second.second) + ": " + key + ": " +
                        message);
    throw ConfigError(source + ": " + key + ": " + message);
  }

  bool has(const std::string& key) const { return values.count(key) > 0; }

  std::string get_string(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) fail(key, "missing required field");
    return it->second.first;
  }

  double get_double(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(raw, &pos);
      if (pos != raw.size()) fail(key, "trailing characters after number '" + raw + "'");
      return v;
    } catch (const std::logic_error&) {
      fail(key, "expected a number, got '" + raw + "'");
    }
  }

  double get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string raw = get_string(key);
    if (raw == "true" || raw == "1" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "no") return false;
    fail(key, "expected true/false");
  }
};

RawConfig tokenize(const std::string& text, const std::string& source) {
  static const char* known_keys[] = {
      "system.Omega",     "system.n0",       "bath.variant",   "bath.alpha",
      "bath.s",           "bath.omega_c",    "bath.gap_lo",    "bath.gap_hi",
      "bath.csv",         "bath.modes",      "temperature.T",  "grid.horizon",
      "grid.step",        "discretization.K", "discretization.omega_max",
      "outputs.directory", "outputs.emit_plots", "qbm.kappa",  "qbm.modes"};

  RawConfig raw;
  raw.source = source;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'section.key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    bool known = false;
    for (const char* k : known_keys) known = known || key == k;
    if (!known) throw ConfigError(source + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (raw.values.count(key))
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    raw.values[key] = {value, line_no};
  }
  return raw;
}

// "(a,b) (a,b) ..." with `arity` numbers per tuple
std::vector<std::vector<double>> parse_tuples(const RawConfig& raw, const std::string& key,
                                              std::size_t arity) {
  const std::string text = raw.get_string(key);
  std::vector<std::vector<double>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    if (text[pos] != '(') raw.fail(key, "expected '(' in tuple list");
    const auto close = text.find(')', pos);
    if (close == std::string::npos) raw.fail(key, "unterminated tuple");
    std::string body = text.substr(pos + 1, close - pos - 1);
    for (auto& ch : body)
      if (ch == ',') ch = ' ';
    std::istringstream fields(body);
    std::vector<double> tuple;
    double v = 0.0;
    while (fields >> v) tuple.push_back(v);
    if (tuple.size() != arity)
      raw.fail(key, "each tuple needs exactly " + std::to_string(arity) + " numbers");
    out.push_back(std::move(tuple));
    pos = close + 1;
  }
  if (out.empty()) raw.fail(key, "empty tuple list");
  return out;
}

SpectralDensity build_bath(const RawConfig& raw, BathSpec& spec, const fs::path& base_dir) {
  spec.variant = raw.get_string("bath.variant");
  try {
    if (spec.variant == "power_law") {
      spec.alpha = raw.get_double("bath.alpha");
      spec.s = raw.get_double("bath.s", 1.0);
      spec.omega_c = raw.get_double("bath.omega_c", 1.0);
      return SpectralDensity::power_law(spec.alpha, spec.s, spec.omega_c);
    }
    if (spec.variant == "band_gap") {
      spec.gap_lo = raw.get_double("bath.gap_lo");
      spec.gap_hi = raw.get_double("bath.gap_hi");
      SpectralDensity base = SpectralDensity::power_law(0.0, 1.0, 1.0);
      if (raw.has("bath.csv")) {
        spec.csv = raw.get_string("bath.csv");
        auto table = read_two_column_csv(base_dir / spec.csv);
        base = SpectralDensity::tabulated(std::move(table.omega), std::move(table.j));
      } else {
        spec.alpha = raw.get_double("bath.alpha");
        spec.s = raw.get_double("bath.s", 1.0);
        spec.omega_c = raw.get_double("bath.omega_c", 1.0);
        base = SpectralDensity::power_law(spec.alpha, spec.s, spec.omega_c);
      }
      return SpectralDensity::band_gap(std::move(base), spec.gap_lo, spec.gap_hi);
    }
    if (spec.variant == "tabulated") {
      spec.csv = raw.get_string("bath.csv");
      auto table = read_two_column_csv(base_dir / spec.csv);
      return SpectralDensity::tabulated(std::move(table.omega), std::move(table.j));
    }
    if (spec.variant == "discrete") {
      auto tuples = parse_tuples(raw, "bath.modes", 2);
      std::vector<BathMode> modes;
      for (const auto& t : tuples) modes.push_back(BathMode{t[0], t[1]});
      spec.modes = modes;
      return SpectralDensity::discrete(DiscreteBath(std::move(modes)));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    raw.fail("bath.variant", e.what());
  }
  raw.fail("bath.variant", "unknown variant '" + spec.variant +
                               "' (power_law, band_gap, tabulated, discrete)");
}

}  // namespace

RunConfig parse_config(const std::string& text, const fs::path& base_dir,
                       const std::string& source_name) {
  RawConfig raw = tokenize(text, source_name);
  RunConfig config;

  config.omega_sys = raw.get_double("system.Omega");
  config.n0 = raw.get_double("system.n0", 0.0);
  if (config.n0 < 0.0) raw.fail("system.n0", "initial occupation must be >= 0");

  config.bath = build_bath(raw, config.bath_spec, base_dir);

  config.temperature = raw.get_double("temperature.T", 0.0);
  if (config.temperature < 0.0) raw.fail("temperature.T", "temperature must be >= 0");

  config.horizon = raw.get_double("grid.horizon");
  config.step = raw.get_double("grid.step");
  if (!(config.step > 0.0)) raw.fail("grid.step", "step must be > 0");
  if (!(config.horizon > 0.0)) raw.fail("grid.horizon", "horizon must be > 0");
  const double ratio = config.horizon / config.step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    raw.fail("grid.horizon", "horizon must be an integral number of steps");

  if (raw.has("discretization.K") != raw.has("discretization.omega_max"))
    raw.fail("discretization.K", "discretization needs both K and omega_max");
  if (raw.has("discretization.K")) {
    const double k = raw.get_double("discretization.K");
    if (!(k >= 1.0) || k != std::round(k)) raw.fail("discretization.K", "K must be a positive integer");
    config.discretization_modes = static_cast<std::size_t>(k);
    config.discretization_omega_max = raw.get_double("discretization.omega_max");
    if (!(config.discretization_omega_max > 0.0))
      raw.fail("discretization.omega_max", "omega_max must be > 0");
    if (config.bath.is_discrete())
      raw.fail("discretization.K", "bath is already discrete");
  }

  if (raw.has("outputs.directory")) config.output_directory = raw.get_string("outputs.directory");
  config.emit_plots = raw.get_bool("outputs.emit_plots", false);

  if (raw.has("qbm.kappa") || raw.has("qbm.modes")) {
    QbmSpec qbm;
    qbm.kappa = raw.get_double("qbm.kappa");
    for (const auto& t : parse_tuples(raw, "qbm.modes", 3)) {
      qbm.masses.push_back(t[0]);
      qbm.omegas.push_back(t[1]);
      qbm.couplings.push_back(t[2]);
      if (!(t[0] > 0.0) || !(t[1] > 0.0)) raw.fail("qbm.modes", "masses and frequencies must be > 0");
    }
    config.qbm = std::move(qbm);
  }

  return config;
}

RunConfig parse_config_file(const fs::path& path) {
  const std::string text = read_text_file(path);  // IoError when missing
  return parse_config(text, path.has_parent_path() ? path.parent_path() : fs::path("."),
                      path.string());
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream out;
  out << "system.Omega = " << format_g17(config.omega_sys) << "\n";
  out << "system.n0 = " << format_g17(config.n0) << "\n";
  const auto& b = config.bath_spec;
  out << "bath.variant = " << b.variant << "\n";
  if (b.variant == "power_law" || (b.variant == "band_gap" && b.csv.empty())) {
    out << "bath.alpha = " << format_g17(b.alpha) << "\n";
    out << "bath.s = " << format_g17(b.s) << "\n";
    out << "bath.omega_c = " << format_g17(b.omega_c) << "\n";
  }
  if (b.variant == "band_gap") {
    out << "bath.gap_lo = " << format_g17(b.gap_lo) << "\n";
    out << "bath.gap_hi = " << format_g17(b.gap_hi) << "\n";
  }
  if (!b.csv.empty()) out << "bath.csv = " << b.csv << "\n";
  if (b.variant == "discrete") {
    out << "bath.modes =";
    for (const auto& m : b.modes)
      out << " (" << format_g17(m.omega) << "," << format_g17(m.lambda) << ")";
    out << "\n";
  }
  out << "temperature.T = " << format_g17(config.temperature) << "\n";
  out << "grid.horizon = " << format_g17(config.horizon) << "\n";
  out << "grid.step = " << format_g17(config.step) << "\n";
  if (config.discretization_modes) {
    out << "discretization.K = " << *config.discretization_modes << "\n";
    out << "discretization.omega_max = " << format_g17(config.discretization_omega_max) << "\n";
  }
  out << "outputs.directory = " << config.output_directory << "\n";
  out << "outputs.emit_plots = " << (config.emit_plots ? "true" : "false") << "\n";
  if (config.qbm) {
    out << "qbm.kappa = " << format_g17(config.qbm->kappa) << "\n";
    out << "qbm.modes =";
    for (std::size_t i = 0; i < config.qbm->masses.size(); ++i)
      out << " (" << format_g17(config.qbm->masses[i]) << "," << format_g17(config.qbm->omegas[i])
          << "," << format_g17(config.qbm->couplings[i]) << ")";
    out << "\n";
  }
  return out.str();
}

}  // namespace nmosc
