#include "mvset/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mvset {

namespace {

constexpr char kMagic[] = "MVSETFLD0001____";
constexpr std::size_t kMagicSize = 16;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put_le(std::string& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(const std::string& in, std::size_t& pos, const std::filesystem::path& path) {
  if (pos + sizeof(T) > in.size()) throw Error("truncated raw field file: " + path.string());
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::filesystem::path& path, const std::string& data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("write failed for " + path.string());
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& token, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw Error(path.string() + ":" + std::to_string(line) + ": not a number: '" + token + "'");
  return v;
}

std::string csv_header(const GridSpec& g) {
  std::string h = "# " + std::to_string(g.dim());
  for (int a = 0; a < g.dim(); ++a) h += " " + std::to_string(g.count(a));
  for (int a = 0; a < g.dim(); ++a) h += " " + g17(g.origin()[a]);
  h += " " + g17(g.h()) + "\n";
  return h;
}

struct CsvField {
  GridSpec grid;
  std::vector<double> values;
};

CsvField parse_csv_field(const std::string& text, const std::filesystem::path& path) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind('#', 0) != 0) throw Error(path.string() + ": missing csv header");
  std::istringstream hs(line.substr(1));
  std::vector<std::string> tok;
  for (std::string t; hs >> t;) tok.push_back(t);
  if (tok.empty()) throw Error(path.string() + ":1: empty csv header");
  const int dim = static_cast<int>(parse_number(tok[0], path, 1));
  if (dim < 1 || dim > 3 || tok.size() != static_cast<std::size_t>(2 * dim + 2))
    throw Error(path.string() + ":1: malformed csv header");
  std::vector<Index> counts(static_cast<std::size_t>(dim));
  std::vector<double> origin(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    counts[static_cast<std::size_t>(a)] = static_cast<Index>(parse_number(tok[static_cast<std::size_t>(1 + a)], path, 1));
    origin[static_cast<std::size_t>(a)] = parse_number(tok[static_cast<std::size_t>(1 + dim + a)], path, 1);
  }
  const double h = parse_number(tok.back(), path, 1);
  CsvField f{GridSpec::from_spacing(dim, origin, h, counts), {}};
  f.values.reserve(static_cast<std::size_t>(f.grid.node_count()));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    f.values.push_back(parse_number(line, path, lineno));
  }
  if (static_cast<Index>(f.values.size()) != f.grid.node_count())
    throw Error(path.string() + ": expected " + std::to_string(f.grid.node_count()) + " values, found " +
                std::to_string(f.values.size()));
  return f;
}

}  // namespace

FieldFormat parse_field_format(const std::string& text) {
  if (text == "csv") return FieldFormat::csv;
  if (text == "raw") return FieldFormat::raw;
  throw Error("unknown field format '" + text + "' (expected csv or raw)");
}

std::string to_string(FieldFormat format) { return format == FieldFormat::csv ? "csv" : "raw"; }

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

void write_field(const ScalarField& field, const std::filesystem::path& path, FieldFormat format) {
  const GridSpec& g = field.grid();
  std::string out;
  if (format == FieldFormat::csv) {
    out = csv_header(g);
    for (double v : field.values()) out += g17(v) + "\n";
  } else {
    out.append(kMagic, kMagicSize);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    for (int a = 0; a < g.dim(); ++a) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.count(a)));
    for (int a = 0; a < g.dim(); ++a) put_le<double>(out, g.origin()[a]);
    put_le<double>(out, g.h());
    for (double v : field.values()) put_le<double>(out, v);
  }
  spill(path, out);
}

ScalarField read_field(const std::filesystem::path& path) {
  const std::string data = slurp(path);
  if (!data.empty() && data[0] == '#') {
    CsvField f = parse_csv_field(data, path);
    return ScalarField(f.grid, std::move(f.values));
  }
  if (data.size() < kMagicSize || std::memcmp(data.data(), kMagic, kMagicSize) != 0)
    throw Error("not an mvset field file (magic mismatch): " + path.string());
  std::size_t pos = kMagicSize;
  const auto dim = get_le<std::uint32_t>(data, pos, path);
  if (dim < 1 || dim > 3) throw Error("raw field has invalid dimension: " + path.string());
  std::vector<Index> counts(dim);
  std::vector<double> origin(dim);
  for (auto& c : counts) c = get_le<std::uint32_t>(data, pos, path);
  for (auto& o : origin) o = get_le<double>(data, pos, path);
  const double h = get_le<double>(data, pos, path);
  const GridSpec grid = GridSpec::from_spacing(static_cast<int>(dim), origin, h, counts);
  const auto n = static_cast<std::size_t>(grid.node_count());
  if (data.size() - pos != n * sizeof(double))
    throw Error((data.size() - pos < n * sizeof(double) ? "truncated raw field file: " : "trailing bytes in raw field file: ") +
                path.string());
  std::vector<double> values(n);
  for (auto& v : values) v = get_le<double>(data, pos, path);
  return ScalarField(grid, std::move(values));
}

void write_mask(const GridSpec& grid, const Mask& mask, const std::filesystem::path& path) {
  if (static_cast<Index>(mask.size()) != grid.node_count()) throw Error("mask size does not match grid");
  std::string out = csv_header(grid);
  out.reserve(out.size() + 2 * mask.size());
  for (auto b : mask) out += b ? "1\n" : "0\n";
  spill(path, out);
}

Mask read_mask(const std::filesystem::path& path, GridSpec* grid) {
  CsvField f = parse_csv_field(slurp(path), path);
  Mask m(f.values.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = f.values[k] != 0.0;
  if (grid) *grid = f.grid;
  return m;
}

void write_contour(const std::vector<Polyline>& contour, const std::filesystem::path& path) {
  std::string out = "# x y\n";
  for (std::size_t c = 0; c < contour.size(); ++c) {
    if (c > 0) out += "\n";
    for (const auto& p : contour[c].points) out += g17(p[0]) + " " + g17(p[1]) + "\n";
  }
  spill(path, out);
}

std::vector<Polyline> read_contour(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("# x y", 0) != 0) throw Error(path.string() + ": missing contour header");
  std::vector<Polyline> out;
  Polyline cur;
  std::size_t lineno = 1;
  auto flush = [&] {
    if (cur.points.empty()) return;
    cur.closed = cur.points.size() > 2 && cur.points.front() == cur.points.back();
    out.push_back(std::move(cur));
    cur = Polyline{};
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      flush();
      continue;
    }
    std::istringstream ls(line);
    std::string xs, ys, extra;
    if (!(ls >> xs >> ys) || (ls >> extra))
      throw Error(path.string() + ":" + std::to_string(lineno) + ": expected two coordinates");
    cur.points.push_back({parse_number(xs, path, lineno), parse_number(ys, path, lineno)});
  }
  flush();
  return out;
}

}  // namespace mvset
