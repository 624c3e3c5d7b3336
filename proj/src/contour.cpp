#include "mvset/contour.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace mvset {

namespace {

using P2 = std::array<double, 2>;

double segment_distance(const P2& p, const P2& a, const P2& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy);
}

}  // namespace

std::vector<Polyline> marching_squares(const ScalarField& field, double level) {
  const GridSpec& g = field.grid();
  if (g.dim() != 2) return {};
  const Index n0 = g.count(0), n1 = g.count(1);
  // Padded index space: i in [-1, n0], j in [-1, n1].
  const Index m1 = n1 + 2;
  double vmax = level;
  for (double v : field.values()) vmax = std::max(vmax, v);
  const double pad = level - std::max(1.0, vmax - level);
  auto value = [&](Index i, Index j) {
    if (i < 0 || j < 0 || i >= n0 || j >= n1) return pad;
    return field[i * n1 + j];
  };
  auto position = [&](Index i, Index j) {
    return P2{g.origin()[0] + g.h() * static_cast<double>(i), g.origin()[1] + g.h() * static_cast<double>(j)};
  };
  // Edge key: padded node id * 2 + direction (0: +i, 1: +j).
  auto node_id = [&](Index i, Index j) { return (i + 1) * m1 + (j + 1); };

  std::map<Index, P2> points;
  std::vector<std::array<Index, 2>> segments;

  auto crossing = [&](Index i0, Index j0, Index i1, Index j1, int dir) {
    const Index key = node_id(i0, j0) * 2 + dir;
    if (!points.count(key)) {
      const double a = value(i0, j0), b = value(i1, j1);
      const double t = (level - a) / (b - a);
      const P2 pa = position(i0, j0), pb = position(i1, j1);
      points[key] = {pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])};
    }
    return key;
  };

  for (Index i = -1; i < n0; ++i) {
    for (Index j = -1; j < n1; ++j) {
      // Corners a(i,j) b(i+1,j) c(i+1,j+1) d(i,j+1); edges e0=ab e1=bc e2=cd e3=da.
      const double va = value(i, j), vb = value(i + 1, j), vc = value(i + 1, j + 1), vd = value(i, j + 1);
      const bool a = va > level, b = vb > level, c = vc > level, d = vd > level;
      const int code = a | (b << 1) | (c << 2) | (d << 3);
      if (code == 0 || code == 15) continue;
      std::array<Index, 4> e{-1, -1, -1, -1};
      if (a != b) e[0] = crossing(i, j, i + 1, j, 0);
      if (b != c) e[1] = crossing(i + 1, j, i + 1, j + 1, 1);
      if (d != c) e[2] = crossing(i, j + 1, i + 1, j + 1, 0);
      if (a != d) e[3] = crossing(i, j, i, j + 1, 1);
      if (code == 5 || code == 10) {
        const bool centre = 0.25 * (va + vb + vc + vd) > level;
        if (centre == a) {
          segments.push_back({e[0], e[1]});
          segments.push_back({e[2], e[3]});
        } else {
          segments.push_back({e[3], e[0]});
          segments.push_back({e[1], e[2]});
        }
      } else {
        std::array<Index, 2> s{};
        int k = 0;
        for (Index key : e)
          if (key >= 0) s[static_cast<std::size_t>(k++)] = key;
        segments.push_back(s);
      }
    }
  }

  std::map<Index, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s][0]].push_back(s);
    incident[segments[s][1]].push_back(s);
  }
  std::vector<char> used(segments.size(), 0);
  std::vector<Polyline> out;
  for (std::size_t start = 0; start < segments.size(); ++start) {
    if (used[start]) continue;
    Polyline line;
    used[start] = 1;
    const Index first = segments[start][0];
    Index cur = segments[start][1];
    line.points.push_back(points[first]);
    line.points.push_back(points[cur]);
    while (cur != first) {
      std::size_t next = segments.size();
      for (std::size_t s : incident[cur])
        if (!used[s]) next = s;
      if (next == segments.size()) break;
      used[next] = 1;
      cur = segments[next][0] == cur ? segments[next][1] : segments[next][0];
      line.points.push_back(points[cur]);
    }
    line.closed = cur == first;
    out.push_back(std::move(line));
  }
  return out;
}

std::vector<Polyline> mask_contour(const GridSpec& grid, const Mask& mask) {
  ScalarField f(grid, 0.0);
  for (Index k = 0; k < grid.node_count(); ++k) f[k] = mask[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
  return marching_squares(f, 0.5);
}

double hausdorff_to_circle(const std::vector<Polyline>& contour, const std::array<double, 2>& centre,
                           double radius, int samples) {
  if (contour.empty()) throw Error("empty contour");
  double d = 0.0;
  for (const Polyline& line : contour)
    for (const P2& p : line.points) d = std::max(d, std::abs(std::hypot(p[0] - centre[0], p[1] - centre[1]) - radius));
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / samples;
    const P2 c{centre[0] + radius * std::cos(t), centre[1] + radius * std::sin(t)};
    double best = INFINITY;
    for (const Polyline& line : contour)
      for (std::size_t s = 0; s + 1 < line.points.size(); ++s)
        best = std::min(best, segment_distance(c, line.points[s], line.points[s + 1]));
    d = std::max(d, best);
  }
  return d;
}

}  // namespace mvset
