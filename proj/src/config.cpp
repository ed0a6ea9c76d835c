#include "benthos/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace benthos {

namespace {

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_line(int line_no, const std::string& why) {
  throw std::invalid_argument("config line " + std::to_string(line_no) + ": " +
                              why);
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty() || errno == ERANGE) {
    throw std::invalid_argument("config key " + key + ": not a number: '" +
                                value + "'");
  }
  return x;
}

long long parse_integer(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size() || value.empty() || errno == ERANGE) {
    throw std::invalid_argument("config key " + key + ": not an integer: '" +
                                value + "'");
  }
  return x;
}

}  // namespace

ConfigValues parse_config_text(std::string_view text) {
  ConfigValues values;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad_line(line_no, "unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) bad_line(line_no, "empty section name");
      section = std::string(name);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      bad_line(line_no, "expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) bad_line(line_no, "empty key");
    if (section.empty()) bad_line(line_no, "key before any [section]");
    const std::string full = section + "." + std::string(key);
    if (!values.emplace(full, std::string(value)).second) {
      bad_line(line_no, "duplicate key " + full);
    }
  }
  return values;
}

ConfigValues load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

LevyModel build_model(const ModelSpec& spec) {
  if (spec.family == "brownian") return LevyModel::brownian(spec.v, spec.D);
  if (spec.family == "deterministic") return LevyModel::deterministic(spec.v);
  if (spec.family == "exponential-jumps") {
    return LevyModel::with_exponential_jumps(spec.v, spec.D, spec.jump_rate,
                                             spec.jump_mean);
  }
  if (spec.family == "fixed-jumps") {
    return LevyModel::with_fixed_jumps(spec.v, spec.D, spec.jump_rate,
                                       spec.jump_size);
  }
  throw std::invalid_argument(
      "unknown model family '" + spec.family +
      "' (expected brownian | deterministic | exponential-jumps | "
      "fixed-jumps)");
}

void apply_config(const ConfigValues& values, ModelSpec& model,
                  RegimeParams& regime, SimConfig& sim) {
  for (const auto& [key, value] : values) {
    if (key == "model.family") {
      model.family = value;
    } else if (key == "model.v") {
      model.v = parse_double(key, value);
    } else if (key == "model.D") {
      model.D = parse_double(key, value);
    } else if (key == "model.jumpRate") {
      model.jump_rate = parse_double(key, value);
    } else if (key == "model.jumpMean") {
      model.jump_mean = parse_double(key, value);
    } else if (key == "model.jumpSize") {
      model.jump_size = parse_double(key, value);
    } else if (key == "regime.r") {
      regime.growth_rate = parse_double(key, value);
    } else if (key == "regime.lambda0") {
      regime.departure_rate = parse_double(key, value);
    } else if (key == "regime.lambda1") {
      regime.settling_rate = parse_double(key, value);
    } else if (key == "sim.seed") {
      sim.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    } else if (key == "sim.paths") {
      sim.n_paths = parse_integer(key, value);
    } else if (key == "sim.dt") {
      sim.dt = parse_double(key, value);
    } else if (key == "sim.horizon") {
      sim.horizon = parse_double(key, value);
    } else if (key == "sim.cap") {
      sim.population_cap = parse_integer(key, value);
    } else if (key == "sim.threads") {
      sim.threads = static_cast<int>(parse_integer(key, value));
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
}

}  // namespace benthos
