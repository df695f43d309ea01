#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nhssh/csv.hpp"
#include "nhssh/entanglement.hpp"

namespace nhssh {

enum class Command { Spectrum, Ratio, PtDiagram, Evolve, EeScaling, EeProfile, EeDiagram };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::Ratio: return "ratio";
    case Command::PtDiagram: return "pt-diagram";
    case Command::Evolve: return "evolve";
    case Command::EeScaling: return "ee-scaling";
    case Command::EeProfile: return "ee-profile";
    default: return "ee-diagram";
  }
}

inline Command command_from_name(const std::string& name) {
  for (Command c : {Command::Spectrum, Command::Ratio, Command::PtDiagram, Command::Evolve,
                    Command::EeScaling, Command::EeProfile, Command::EeDiagram})
    if (name == command_name(c)) return c;
  throw ConfigError("unknown command '" + name +
                    "' (expected spectrum, ratio, pt-diagram, evolve, ee-scaling, ee-profile or "
                    "ee-diagram)");
}

/// Thrown when --help is requested; carries the help text.
struct HelpRequested {
  std::string text;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double parse_plain_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + s + "' as a number");
  }
}

inline long parse_integer(const std::string& s, const std::string& key, long min_value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    if (v < min_value)
      throw ConfigError(key + ": value " + s + " must be >= " + std::to_string(min_value));
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + s + "' as an integer");
  }
}

}  // namespace detail

/// Parses an angle given either in raw radians ("1.5708") or in units of pi
/// ("0.5pi", "pi", "-pi", "2pi/3").
inline double parse_angle(const std::string& text, const std::string& key) {
  const std::string s = detail::trim(text);
  if (s.empty()) throw ConfigError(key + ": empty value");
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return detail::parse_plain_double(s, key);

  const std::string prefix = s.substr(0, pos);
  const std::string suffix = s.substr(pos + 2);
  double coefficient = 1.0;
  if (prefix == "-")
    coefficient = -1.0;
  else if (!prefix.empty() && prefix != "+")
    coefficient = detail::parse_plain_double(prefix, key);
  double divisor = 1.0;
  if (!suffix.empty()) {
    if (suffix[0] != '/')
      throw ConfigError(key + ": cannot parse '" + s +
                        "' (expected radians, '<x>pi' or '<x>pi/<y>')");
    divisor = detail::parse_plain_double(suffix.substr(1), key);
    if (divisor == 0.0) throw ConfigError(key + ": division by zero in '" + s + "'");
  }
  return coefficient * kPi / divisor;
}

/// Parses a sweep axis of the form name:min:max:steps, e.g. "j1:-3pi:3pi:61".
inline AxisSpec parse_axis(const std::string& text, const std::string& key) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(detail::trim(text));
  while (std::getline(in, token, ':')) parts.push_back(token);
  if (parts.size() != 4)
    throw ConfigError(key + ": cannot parse '" + text + "' (expected name:min:max:steps)");
  AxisSpec axis;
  axis.name = detail::trim(parts[0]);
  axis.min = parse_angle(parts[1], key);
  axis.max = parse_angle(parts[2], key);
  axis.steps = int(detail::parse_integer(parts[3], key, 2));
  if (!is_axis_name(axis.name))
    throw ConfigError(key + ": unknown parameter '" + axis.name + "' (expected j1, j2 or gamma)");
  return axis;
}

inline std::vector<int> parse_sizes(const std::string& text, const std::string& key) {
  std::vector<int> sizes;
  std::string token;
  std::istringstream in(detail::trim(text));
  while (std::getline(in, token, ','))
    sizes.push_back(int(detail::parse_integer(detail::trim(token), key, 2)));
  if (sizes.empty()) throw ConfigError(key + ": empty size list");
  return sizes;
}

inline bool operator==(const AxisSpec& a, const AxisSpec& b) {
  return a.name == b.name && a.min == b.min && a.max == b.max && a.steps == b.steps;
}

/// Fully resolved run configuration. Defaults: 4096 quasimomentum nodes,
/// 1000 driving periods, steady-state window [800, 1000], sizes
/// {40, 80, 120, 160}.
struct RunConfig {
  Command command = Command::Spectrum;
  double j1 = 0.0;
  double j2 = 0.0;
  double gamma = 0.0;
  int k_points = 4096;
  int cells = 40;
  std::vector<int> sizes = {40, 80, 120, 160};
  long periods = 1000;
  long window_start = 800;
  long window_end = 1000;
  int subsystem = 0;  // 0 selects the equal bipartition L/2
  std::optional<AxisSpec> axis1;
  std::optional<AxisSpec> axis2;
  std::string output;  // empty writes to stdout
  unsigned workers = default_workers();

  bool operator==(const RunConfig&) const = default;

  std::string axis_string(const AxisSpec& a) const {
    return a.name + ":" + format_double(a.min) + ":" + format_double(a.max) + ":" +
           std::to_string(a.steps);
  }

  std::string sizes_string() const {
    std::string s;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(sizes[i]);
    }
    return s;
  }

  /// Canonical key-value form; feeding these lines back through a config file
  /// reproduces the configuration exactly.
  std::vector<std::pair<std::string, std::string>> to_key_values() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("command", command_name(command));
    kv.emplace_back("j1", format_double(j1));
    kv.emplace_back("j2", format_double(j2));
    kv.emplace_back("gamma", format_double(gamma));
    kv.emplace_back("k-points", std::to_string(k_points));
    kv.emplace_back("cells", std::to_string(cells));
    kv.emplace_back("sizes", sizes_string());
    kv.emplace_back("periods", std::to_string(periods));
    kv.emplace_back("window-start", std::to_string(window_start));
    kv.emplace_back("window-end", std::to_string(window_end));
    kv.emplace_back("subsystem", std::to_string(subsystem));
    if (axis1) kv.emplace_back("axis1", axis_string(*axis1));
    if (axis2) kv.emplace_back("axis2", axis_string(*axis2));
    if (!output.empty()) kv.emplace_back("output", output);
    kv.emplace_back("workers", std::to_string(workers));
    return kv;
  }
};

namespace detail {

/// Applies one key = value setting; shared by the config-file loader and the
/// command-line layer so both parse identically.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "command")
    cfg.command = command_from_name(trim(value));
  else if (key == "j1")
    cfg.j1 = parse_angle(value, key);
  else if (key == "j2")
    cfg.j2 = parse_angle(value, key);
  else if (key == "gamma")
    cfg.gamma = parse_angle(value, key);
  else if (key == "k-points")
    cfg.k_points = int(parse_integer(trim(value), key, 2));
  else if (key == "cells")
    cfg.cells = int(parse_integer(trim(value), key, 2));
  else if (key == "sizes")
    cfg.sizes = parse_sizes(value, key);
  else if (key == "periods")
    cfg.periods = parse_integer(trim(value), key, 1);
  else if (key == "window-start")
    cfg.window_start = parse_integer(trim(value), key, 0);
  else if (key == "window-end")
    cfg.window_end = parse_integer(trim(value), key, 1);
  else if (key == "subsystem")
    cfg.subsystem = int(parse_integer(trim(value), key, 0));
  else if (key == "axis1")
    cfg.axis1 = parse_axis(value, key);
  else if (key == "axis2")
    cfg.axis2 = parse_axis(value, key);
  else if (key == "output")
    cfg.output = trim(value);
  else if (key == "workers")
    cfg.workers = unsigned(parse_integer(trim(value), key, 1));
  else
    throw ConfigError("unknown key '" + key + "'");
}

/// Returns true when the file named a command.
inline bool load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file '" + path + "' cannot be opened");
  std::string line;
  long line_no = 0;
  bool command_given = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    apply_setting(cfg, key, value);
    if (key == "command") command_given = true;
  }
  return command_given;
}

inline void validate(RunConfig& cfg, bool command_given) {
  if (!command_given) throw ConfigError("missing command (see --help)");
  try {
    ModelParams probe(cfg.j1, cfg.j2, cfg.gamma);
    (void)probe;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model parameters: ") + e.what());
  }
  if (cfg.workers < 1) throw ConfigError("workers: must be >= 1");
  if (cfg.periods < 1) throw ConfigError("periods: must be >= 1");

  const bool needs_window = cfg.command == Command::EeScaling ||
                            cfg.command == Command::EeProfile ||
                            cfg.command == Command::EeDiagram;
  if (needs_window &&
      (cfg.window_start < 0 || cfg.window_start >= cfg.window_end || cfg.window_end > cfg.periods))
    throw ConfigError("window: need 0 <= window-start < window-end <= periods");

  switch (cfg.command) {
    case Command::Spectrum:
      if (cfg.k_points < 2) throw ConfigError("k-points: spectrum needs >= 2 nodes");
      break;
    case Command::Ratio:
      if (cfg.k_points < 64) throw ConfigError("k-points: ratio needs >= 64 nodes");
      break;
    case Command::PtDiagram:
      if (cfg.k_points < 64) throw ConfigError("k-points: pt-diagram needs >= 64 nodes");
      if (!cfg.axis1) throw ConfigError("pt-diagram: missing required axis1");
      if (!cfg.axis2) throw ConfigError("pt-diagram: missing required axis2");
      validate_axes(*cfg.axis1, *cfg.axis2);
      break;
    case Command::Evolve:
      if (cfg.cells < 2) throw ConfigError("cells: need >= 2 unit cells");
      if (cfg.subsystem == 0 && cfg.cells % 2 != 0)
        throw ConfigError("cells: equal bipartition needs an even cell count "
                          "(or pass an explicit subsystem)");
      if (cfg.subsystem < 0 || cfg.subsystem > cfg.cells - 1)
        throw ConfigError("subsystem: need 1 <= subsystem <= cells - 1");
      break;
    case Command::EeScaling:
    case Command::EeDiagram:
      if (cfg.sizes.size() < 3)
        throw ConfigError("sizes: scaling fits need at least 3 system sizes");
      for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
        if (cfg.sizes[i] < 2 || cfg.sizes[i] % 2 != 0)
          throw ConfigError("sizes: all sizes must be even and >= 2");
        if (i > 0 && cfg.sizes[i] <= cfg.sizes[i - 1])
          throw ConfigError("sizes: must be strictly ascending");
      }
      if (cfg.command == Command::EeDiagram) {
        if (!cfg.axis1) throw ConfigError("ee-diagram: missing required axis1");
        if (!cfg.axis2) throw ConfigError("ee-diagram: missing required axis2");
        validate_axes(*cfg.axis1, *cfg.axis2);
      }
      break;
    case Command::EeProfile:
      if (cfg.cells < 8 || cfg.cells % 2 != 0)
        throw ConfigError("cells: ee-profile needs an even cell count >= 8");
      break;
  }
}

}  // namespace detail

/// Parses command line arguments (excluding the program name), merging an
/// optional --config file; explicit flags override config-file keys.
inline RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Floquet dynamics of a periodically quenched SSH chain with balanced gain/loss:\n"
               "quasienergy spectra, PT phase diagrams and steady-state entanglement scaling."};
  app.get_formatter()->column_width(28);

  std::string command_arg;
  app.add_option("command", command_arg,
                 "spectrum | ratio | pt-diagram | evolve | ee-scaling | ee-profile | ee-diagram");

  std::string config_path;
  app.add_option("--config", config_path, "key = value config file; flags override its entries");

  // All values arrive as strings and go through the same parser as config
  // file entries, so `0.85pi` works in both places.
  const std::vector<std::pair<std::string, std::string>> option_help = {
      {"j1", "intracell hopping (radians or '<x>pi')"},
      {"j2", "intercell hopping (radians or '<x>pi')"},
      {"gamma", "gain/loss strength, >= 0 (radians or '<x>pi')"},
      {"k-points", "quasimomentum grid nodes (default 4096)"},
      {"cells", "unit cells L for evolve / ee-profile"},
      {"sizes", "comma list of system sizes for ee-scaling / ee-diagram"},
      {"periods", "driving periods (default 1000)"},
      {"window-start", "first period of the steady-state window (default 800)"},
      {"window-end", "last period of the steady-state window (default 1000)"},
      {"subsystem", "subsystem cells for evolve (default: L/2)"},
      {"axis1", "first sweep axis, name:min:max:steps"},
      {"axis2", "second sweep axis, name:min:max:steps"},
      {"workers", "worker threads (default: NHSSH_WORKERS or hardware)"},
  };
  std::map<std::string, std::string> raw;
  for (const auto& [key, help] : option_help) app.add_option("--" + key, raw[key], help);
  app.add_option("-o,--output", raw["output"], "output CSV path (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg;
  bool command_given = false;
  if (!config_path.empty()) command_given = detail::load_config_file(cfg, config_path);
  for (const auto& [key, help] : option_help) {
    (void)help;
    if (app.count("--" + key) > 0) detail::apply_setting(cfg, key, raw[key]);
  }
  if (app.count("--output") > 0) detail::apply_setting(cfg, "output", raw["output"]);
  if (!command_arg.empty()) {
    cfg.command = command_from_name(command_arg);
    command_given = true;
  }

  detail::validate(cfg, command_given);
  return cfg;
}

inline RunConfig parse_config(int argc, const char* const* argv) {
  return parse_config(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace nhssh
