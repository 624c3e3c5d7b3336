#include "mvset/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mvset {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Located {
  std::string value;
  std::size_t line = 0;
};

class ValueError : public Error {
 public:
  using Error::Error;
};

double to_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValueError("expected a number, got '" + s + "'");
  return v;
}

long long to_integer(const std::string& s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ValueError("expected an integer, got '" + s + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (item.empty()) throw ValueError("empty list element in '" + s + "'");
    out.push_back(item);
  }
  if (out.empty()) throw ValueError("empty list");
  return out;
}

std::vector<double> to_doubles(const std::string& s) {
  std::vector<double> v;
  for (const auto& item : split_list(s)) v.push_back(to_double(item));
  return v;
}

double positive(double v, const char* what) {
  if (!(v > 0.0)) throw ValueError(std::string(what) + " must be positive");
  return v;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) out += format_double(v[i]);
    else out += std::to_string(v[i]);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Setter>>>>& schema() {
  static const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Setter>>>> s = {
      {"grid",
       {{"dim",
         [](RunConfig& c, const std::string& v) {
           const auto d = to_integer(v);
           if (d < 1 || d > 3) throw ValueError("dim must be 1, 2 or 3");
           c.dim = static_cast<int>(d);
         }},
        {"nodes",
         [](RunConfig& c, const std::string& v) {
           c.nodes.clear();
           for (const auto& item : split_list(v)) {
             const auto n = to_integer(item);
             if (n < 2) throw ValueError("node counts must be at least 2");
             c.nodes.push_back(n);
           }
         }},
        {"origin", [](RunConfig& c, const std::string& v) { c.origin = to_doubles(v); }},
        {"extent", [](RunConfig& c, const std::string& v) {
           c.extent = to_doubles(v);
           for (double e : c.extent) positive(e, "extent");
         }}}},
      {"operator",
       {{"coefficients",
         [](RunConfig& c, const std::string& v) {
           c.coefficients = CoefficientFamily::parse(v).to_string();
         }},
        {"face_average", [](RunConfig& c, const std::string& v) {
           if (v == "arithmetic") c.face_average = FaceAverage::arithmetic;
           else if (v == "harmonic") c.face_average = FaceAverage::harmonic;
           else throw ValueError("face_average must be arithmetic or harmonic");
         }}}},
      {"problem",
       {{"x0", [](RunConfig& c, const std::string& v) { c.x0 = to_doubles(v); }},
        {"radii", [](RunConfig& c, const std::string& v) {
           c.radii = to_doubles(v);
           for (std::size_t i = 0; i < c.radii.size(); ++i) {
             positive(c.radii[i], "radii");
             if (i > 0 && !(c.radii[i] > c.radii[i - 1])) throw ValueError("radii must be strictly increasing");
           }
         }}}},
      {"solver",
       {{"linear_tol", [](RunConfig& c, const std::string& v) { c.linear_tol = positive(to_double(v), "linear_tol"); }},
        {"lcp_tol", [](RunConfig& c, const std::string& v) { c.lcp_tol = positive(to_double(v), "lcp_tol"); }},
        {"omega",
         [](RunConfig& c, const std::string& v) {
           c.omega = to_double(v);
           if (!(c.omega > 0.0 && c.omega < 2.0)) throw ValueError("omega must lie in (0, 2)");
         }},
        {"max_iter", [](RunConfig& c, const std::string& v) {
           const auto n = to_integer(v);
           if (n < 1 || n > 100000000) throw ValueError("max_iter out of range");
           c.max_iter = static_cast<int>(n);
         }}}},
      {"verify",
       {{"samples",
         [](RunConfig& c, const std::string& v) {
           const auto n = to_integer(v);
           if (n < 1 || n > 1000) throw ValueError("samples must be in [1, 1000]");
           c.samples = static_cast<int>(n);
         }},
        {"seed",
         [](RunConfig& c, const std::string& v) {
           const auto n = to_integer(v);
           if (n < 0) throw ValueError("seed must be nonnegative");
           c.seed = static_cast<std::uint64_t>(n);
         }},
        {"mean_value_tol",
         [](RunConfig& c, const std::string& v) {
           c.mean_value_tol = v == "auto" ? -1.0 : positive(to_double(v), "mean_value_tol");
         }},
        {"dual_tol", [](RunConfig& c, const std::string& v) { c.dual_tol = positive(to_double(v), "dual_tol"); }}}},
      {"schwarz",
       {{"agreement_tol",
         [](RunConfig& c, const std::string& v) { c.agreement_tol = positive(to_double(v), "agreement_tol"); }},
        {"vanishing_c",
         [](RunConfig& c, const std::string& v) { c.vanishing_c = positive(to_double(v), "vanishing_c"); }}}},
      {"uniqueness",
       {{"candidate", [](RunConfig& c, const std::string& v) { c.candidate = v; }},
        {"verdict_tol", [](RunConfig& c, const std::string& v) { c.verdict_tol = positive(to_double(v), "verdict_tol"); }},
        {"discrimination",
         [](RunConfig& c, const std::string& v) { c.discrimination = positive(to_double(v), "discrimination"); }}}},
      {"checks",
       {{"volume_tol", [](RunConfig& c, const std::string& v) { c.volume_tol = positive(to_double(v), "volume_tol"); }}}},
      {"output",
       {{"directory",
         [](RunConfig& c, const std::string& v) {
           if (v.empty()) throw ValueError("directory must not be empty");
           c.directory = v;
         }},
        {"field_format", [](RunConfig& c, const std::string& v) {
           if (v != "raw" && v != "csv" && v != "both") throw ValueError("field_format must be raw, csv or both");
           c.field_format = v;
         }}}},
  };
  return s;
}

const Setter* find_setter(const std::string& section, const std::string& key) {
  for (const auto& [name, keys] : schema()) {
    if (name != section) continue;
    for (const auto& [k, setter] : keys)
      if (k == key) return &setter;
  }
  return nullptr;
}

bool known_section(const std::string& section) {
  for (const auto& entry : schema())
    if (entry.first == section) return true;
  return false;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  auto fail = [&](std::size_t line, const std::string& msg) -> Error {
    return Error(source + ":" + std::to_string(line) + ": " + msg);
  };

  std::map<std::string, Located> entries;
  std::vector<std::string> order;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail(lineno, "malformed section header '" + line + "'");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_section(section)) throw fail(lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail(lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw fail(lineno, "missing key before '='");
    if (section.empty()) throw fail(lineno, "key '" + key + "' appears before any [section]");
    if (!find_setter(section, key)) throw fail(lineno, "unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (auto it = entries.find(full); it != entries.end()) {
      throw Error(source + ": duplicate key '" + full + "' at lines " + std::to_string(it->second.line) + " and " +
                  std::to_string(lineno));
    }
    entries[full] = {value, lineno};
    order.push_back(full);
  }

  RunConfig c;
  // dim first: other keys are validated against it.
  std::stable_partition(order.begin(), order.end(), [](const std::string& k) { return k == "grid.dim"; });
  for (const auto& full : order) {
    const Located& e = entries.at(full);
    const auto dot = full.find('.');
    try {
      (*find_setter(full.substr(0, dot), full.substr(dot + 1)))(c, e.value);
    } catch (const Error& err) {
      throw fail(e.line, full + ": " + err.what());
    }
  }

  auto require = [&](const char* key) {
    if (!entries.count(key)) throw Error(source + ": missing required key '" + std::string(key) + "'");
  };
  require("grid.nodes");
  require("problem.x0");
  require("problem.radii");

  const auto d = static_cast<std::size_t>(c.dim);
  auto expand = [&](auto& v, const char* key, auto fill) {
    using T = typename std::decay_t<decltype(v)>::value_type;
    if (v.empty()) v.assign(d, static_cast<T>(fill));
    else if (v.size() == 1) v.assign(d, v[0]);
    else if (v.size() != d) {
      const auto it = entries.find(key);
      throw fail(it == entries.end() ? 0 : it->second.line,
                 std::string(key) + " needs 1 or " + std::to_string(d) + " values");
    }
  };
  expand(c.nodes, "grid.nodes", 2);
  expand(c.origin, "grid.origin", 0.0);
  expand(c.extent, "grid.extent", 1.0);
  if (c.x0.size() != d)
    throw fail(entries.at("problem.x0").line, "x0 needs " + std::to_string(d) + " coordinates");
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::string canonical_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[grid]\n"
    << "dim = " << c.dim << "\n"
    << "nodes = " << join(c.nodes) << "\n"
    << "origin = " << join(c.origin) << "\n"
    << "extent = " << join(c.extent) << "\n\n"
    << "[operator]\n"
    << "coefficients = " << c.coefficients << "\n"
    << "face_average = " << (c.face_average == FaceAverage::arithmetic ? "arithmetic" : "harmonic") << "\n\n"
    << "[problem]\n"
    << "x0 = " << join(c.x0) << "\n"
    << "radii = " << join(c.radii) << "\n\n"
    << "[solver]\n"
    << "linear_tol = " << format_double(c.linear_tol) << "\n"
    << "lcp_tol = " << format_double(c.lcp_tol) << "\n"
    << "omega = " << format_double(c.omega) << "\n"
    << "max_iter = " << c.max_iter << "\n\n"
    << "[verify]\n"
    << "samples = " << c.samples << "\n"
    << "seed = " << c.seed << "\n"
    << "mean_value_tol = " << (c.mean_value_tol < 0.0 ? std::string("auto") : format_double(c.mean_value_tol))
    << "\n"
    << "dual_tol = " << format_double(c.dual_tol) << "\n\n"
    << "[schwarz]\n"
    << "agreement_tol = " << format_double(c.agreement_tol) << "\n"
    << "vanishing_c = " << format_double(c.vanishing_c) << "\n\n"
    << "[uniqueness]\n"
    << "candidate = " << c.candidate << "\n"
    << "verdict_tol = " << format_double(c.verdict_tol) << "\n"
    << "discrimination = " << format_double(c.discrimination) << "\n\n"
    << "[checks]\n"
    << "volume_tol = " << format_double(c.volume_tol) << "\n\n"
    << "[output]\n"
    << "directory = " << c.directory << "\n"
    << "field_format = " << c.field_format << "\n";
  return o.str();
}

GridSpec config_grid(const RunConfig& c) {
  return build_grid(c.dim, c.origin, c.extent, c.nodes);
}

std::vector<FieldFormat> config_field_formats(const RunConfig& c) {
  if (c.field_format == "both") return {FieldFormat::raw, FieldFormat::csv};
  return {parse_field_format(c.field_format)};
}

}  // namespace mvset
