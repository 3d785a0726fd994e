#include "mbqec/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

namespace mbqec::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

double parse_number(const std::string& text, int line,
                    const std::string& field) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(value)) {
      throw std::invalid_argument("trailing characters");
    }
    return value;
  } catch (const std::exception&) {
    throw ConfigError(line, field, "'" + text + "' is not a number");
  }
}

std::uint64_t parse_unsigned(const std::string& text, int line,
                             const std::string& field) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(line, field,
                      "'" + text + "' is not a nonnegative integer");
  }
  return value;
}

// "name(arg)" -> {name, arg}; plain names come back with an empty arg.
std::pair<std::string, std::string> split_call(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos) return {text, ""};
  if (text.back() != ')') return {text, ""};
  return {trim(text.substr(0, open)),
          trim(text.substr(open + 1, text.size() - open - 2))};
}

// "(re,im)" -> complex
Complex parse_complex_pair(const std::string& text, int line,
                           const std::string& field) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
    throw ConfigError(line, field,
                      "expected a '(re,im)' pair, got '" + text + "'");
  }
  const std::string inner = text.substr(1, text.size() - 2);
  const auto comma = inner.find(',');
  if (comma == std::string::npos) {
    throw ConfigError(line, field,
                      "expected a '(re,im)' pair, got '" + text + "'");
  }
  return Complex(parse_number(trim(inner.substr(0, comma)), line, field),
                 parse_number(trim(inner.substr(comma + 1)), line, field));
}

// "(1,2),(3,4)" -> edge pairs; the protocol needs a 4-qubit resource
std::vector<std::pair<int, int>> parse_edge_list(const std::string& text,
                                                 int line,
                                                 const std::string& field) {
  std::vector<std::pair<int, int>> edges;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find('(', pos);
    if (open == std::string::npos) break;
    const auto close = text.find(')', open);
    if (close == std::string::npos) {
      throw ConfigError(line, field, "unbalanced parenthesis in edge list");
    }
    const std::string inner = text.substr(open + 1, close - open - 1);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) {
      throw ConfigError(line, field, "edge '" + inner + "' needs two qubits");
    }
    const int a = static_cast<int>(
        parse_unsigned(trim(inner.substr(0, comma)), line, field));
    const int b = static_cast<int>(
        parse_unsigned(trim(inner.substr(comma + 1)), line, field));
    if (a < 1 || a > 4 || b < 1 || b > 4 || a == b) {
      throw ConfigError(line, field,
                        "edges must join two distinct qubits from 1..4");
    }
    edges.emplace_back(a, b);
    pos = close + 1;
  }
  if (edges.empty()) {
    throw ConfigError(line, field, "graph resource needs at least one edge");
  }
  return edges;
}

LogicalInput parse_input_state(const std::string& value, int line) {
  const std::string field = "input_state";
  if (auto entry = find_catalog_state(value)) return *entry;

  std::istringstream stream(value);
  std::vector<std::pair<std::string, std::string>> parts;
  std::string token;
  while (stream >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, field,
                        "'" + value + "' is neither a catalog name (" +
                            [] {
                              std::string names;
                              for (const auto& s : catalog_states()) {
                                if (!names.empty()) names += ", ";
                                names += s.name();
                              }
                              return names;
                            }() +
                            ") nor an angle/amplitude form");
    }
    parts.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  if (parts.size() == 2 && parts[0].first == "theta" &&
      parts[1].first == "phi") {
    const double theta = parse_angle(parts[0].second);
    const double phi = parse_angle(parts[1].second);
    return LogicalInput::from_angles(theta * 180.0 / kPi, phi * 180.0 / kPi);
  }
  if (parts.size() == 2 && parts[0].first == "alpha" &&
      parts[1].first == "beta") {
    const Complex a = parse_complex_pair(parts[0].second, line, field);
    const Complex b = parse_complex_pair(parts[1].second, line, field);
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-6) {
      throw ConfigError(line, field, "amplitudes are not normalized");
    }
    return LogicalInput(a, b);
  }
  throw ConfigError(line, field,
                    "expected 'theta=<angle> phi=<angle>' or "
                    "'alpha=(re,im) beta=(re,im)', got '" +
                        value + "'");
}

}  // namespace

ConfigError::ConfigError(int line, std::string field,
                         const std::string& message)
    : std::runtime_error("config line " + std::to_string(line) + " (" +
                         field + "): " + message),
      line_(line),
      field_(std::move(field)) {}

double parse_angle(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty angle");
  if (t == "0") return 0.0;

  auto ends_with = [&t](std::string_view suffix) {
    return t.size() > suffix.size() &&
           t.compare(t.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  auto to_number = [](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) {
      throw std::invalid_argument("bad number in angle");
    }
    return v;
  };

  if (ends_with("deg")) {
    return to_number(t.substr(0, t.size() - 3)) * kPi / 180.0;
  }
  if (ends_with("rad")) {
    return to_number(t.substr(0, t.size() - 3));
  }
  // pi fractions are radians with the unit spelled out: "pi", "-pi/2", "3pi/8"
  const auto pi_pos = t.find("pi");
  if (pi_pos != std::string::npos) {
    std::string prefix = t.substr(0, pi_pos);
    std::string suffix = t.substr(pi_pos + 2);
    double numerator = 1.0;
    if (prefix == "-") {
      numerator = -1.0;
    } else if (!prefix.empty()) {
      numerator = to_number(prefix);
    }
    double denominator = 1.0;
    if (!suffix.empty()) {
      if (suffix[0] != '/' || suffix.size() < 2) {
        throw std::invalid_argument("bad pi fraction '" + t + "'");
      }
      denominator = to_number(suffix.substr(1));
      if (denominator == 0.0) throw std::invalid_argument("division by zero");
    }
    return numerator * kPi / denominator;
  }
  throw std::invalid_argument("angle '" + t +
                              "' needs an explicit unit (deg, rad, or a pi "
                              "fraction such as pi/2)");
}

double ScenarioConfig::resolved_noise_weight() const {
  switch (resource_kind) {
    case ResourceKind::ideal:
    case ResourceKind::lab:
    case ResourceKind::graph:
      return 1.0;
    case ResourceKind::white_noise:
      return resource_param;
    case ResourceKind::white_noise_fidelity:
      return white_noise_weight_for_fidelity(resource_param, 4);
  }
  throw std::logic_error("bad resource kind");
}

std::string ScenarioConfig::resource_label() const {
  std::ostringstream out;
  switch (resource_kind) {
    case ResourceKind::ideal:
      return "ideal";
    case ResourceKind::lab:
      return "lab";
    case ResourceKind::graph: {
      out << "graph(";
      for (std::size_t i = 0; i < graph_edges.size(); ++i) {
        if (i) out << ",";
        out << "(" << graph_edges[i].first << "," << graph_edges[i].second
            << ")";
      }
      out << ")";
      return out.str();
    }
    case ResourceKind::white_noise:
      out << "white_noise(" << resource_param << ")";
      return out.str();
    case ResourceKind::white_noise_fidelity:
      out << "white_noise_fidelity(" << resource_param << ")";
      return out.str();
  }
  return "?";
}

std::string ScenarioConfig::error_label() const {
  switch (error.target) {
    case ErrorTarget::none: return "none";
    case ErrorTarget::qubit2: return "Z2";
    case ErrorTarget::qubit3: return "Z3";
    case ErrorTarget::both: return "Z2Z3";
  }
  return "?";
}

ScenarioConfig parse_config(std::string_view text) {
  std::optional<LogicalInput> input;
  std::string input_spec;
  ErrorSpec error{};
  std::optional<double> angle;
  bool location_known = true;
  ResourceKind resource_kind = ResourceKind::ideal;
  double resource_param = 1.0;
  std::vector<std::pair<int, int>> graph_edges;
  std::uint64_t shots = 10000;
  bool tomography = false;
  std::uint64_t tomography_shots = 10000;
  int monte_carlo_cycles = 100;
  std::optional<std::uint64_t> seed;
  std::string output_path;
  OutputFormat format = OutputFormat::json;

  std::set<std::string> seen;
  std::istringstream stream{std::string(text)};
  std::string raw_line;
  int line = 0;
  while (std::getline(stream, raw_line)) {
    ++line;
    std::string content = raw_line;
    const auto hash = content.find('#');
    if (hash != std::string::npos) content = content.substr(0, hash);
    content = trim(content);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "", "expected 'key = value', got '" + content + "'");
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "", "missing key");
    if (value.empty()) throw ConfigError(line, key, "missing value");
    if (!seen.insert(key).second) {
      throw ConfigError(line, key, "duplicate key");
    }

    if (key == "input_state") {
      input = parse_input_state(value, line);
      input_spec = value;
    } else if (key == "error") {
      if (value == "none") error.target = ErrorTarget::none;
      else if (value == "Z2") error.target = ErrorTarget::qubit2;
      else if (value == "Z3") error.target = ErrorTarget::qubit3;
      else if (value == "Z2Z3") error.target = ErrorTarget::both;
      else throw ConfigError(line, key, "expected none, Z2, Z3 or Z2Z3");
    } else if (key == "error_angle") {
      try {
        angle = parse_angle(value);
      } catch (const std::exception& e) {
        throw ConfigError(line, key, e.what());
      }
    } else if (key == "hypothesis") {
      if (value == "known_location") location_known = true;
      else if (value == "unknown_location") location_known = false;
      else throw ConfigError(line, key, "expected known_location or unknown_location");
    } else if (key == "resource") {
      const auto [name, arg] = split_call(value);
      if ((name == "ideal" || name == "box") && arg.empty()) {
        resource_kind = ResourceKind::ideal;
      } else if (name == "lab" && arg.empty()) {
        resource_kind = ResourceKind::lab;
      } else if (name == "graph") {
        resource_kind = ResourceKind::graph;
        graph_edges = parse_edge_list(arg, line, key);
      } else if (name == "white_noise") {
        resource_kind = ResourceKind::white_noise;
        resource_param = parse_number(arg, line, key);
        if (resource_param < 0.0 || resource_param > 1.0) {
          throw ConfigError(line, key, "mixing weight must lie in [0, 1]");
        }
      } else if (name == "white_noise_fidelity") {
        resource_kind = ResourceKind::white_noise_fidelity;
        resource_param = parse_number(arg, line, key);
        if (resource_param < 1.0 / 16.0 || resource_param > 1.0) {
          throw ConfigError(line, key, "target fidelity must lie in [1/16, 1]");
        }
      } else {
        throw ConfigError(line, key,
                          "expected ideal, box, lab, graph((i,j),...), "
                          "white_noise(p) or white_noise_fidelity(F)");
      }
    } else if (key == "shots") {
      shots = parse_unsigned(value, line, key);
      if (shots < 1) throw ConfigError(line, key, "shots must be >= 1");
    } else if (key == "tomography") {
      if (value == "on") tomography = true;
      else if (value == "off") tomography = false;
      else throw ConfigError(line, key, "expected on or off");
    } else if (key == "tomography_shots_per_setting") {
      tomography_shots = parse_unsigned(value, line, key);
      if (tomography_shots < 1) {
        throw ConfigError(line, key, "shots per setting must be >= 1");
      }
    } else if (key == "monte_carlo_cycles") {
      monte_carlo_cycles = static_cast<int>(parse_unsigned(value, line, key));
      if (monte_carlo_cycles < 2) {
        throw ConfigError(line, key, "Monte Carlo needs at least 2 cycles");
      }
    } else if (key == "seed") {
      seed = parse_unsigned(value, line, key);
    } else if (key == "output") {
      output_path = value;
    } else if (key == "format") {
      if (value == "json") format = OutputFormat::json;
      else if (value == "csv") format = OutputFormat::csv;
      else throw ConfigError(line, key, "expected json or csv");
    } else {
      throw ConfigError(line, key, "unknown key");
    }
  }

  if (!input) {
    throw ConfigError(line, "input_state", "missing input state");
  }
  error.angle = angle.value_or(error.target == ErrorTarget::none ? 0.0
                                                                 : kPi / 2.0);

  ScenarioConfig config{*input};
  config.input_spec = input_spec;
  config.error = error;
  config.location_known = location_known;
  config.resource_kind = resource_kind;
  config.resource_param = resource_param;
  config.graph_edges = std::move(graph_edges);
  config.shots = shots;
  config.tomography = tomography;
  config.tomography_shots_per_setting = tomography_shots;
  config.monte_carlo_cycles = monte_carlo_cycles;
  config.seed = seed;
  config.output_path = output_path;
  config.format = format;
  return config;
}

}  // namespace mbqec::cli
