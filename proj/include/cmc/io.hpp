#pragma once

// CSV and OBJ import/export.

#include <array>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/curve.hpp"
#include "cmc/errors.hpp"
#include "cmc/geometry.hpp"
#include "cmc/parallel.hpp"
#include "cmc/surface.hpp"
#include "cmc/validation.hpp"

namespace cmc {

namespace detail {

inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    std::string field(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(std::move(field));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Io, "line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

}  // namespace detail

/// Header: u, then per component c the columns c, c_d1, c_d2.
inline std::string curve_csv_header(RotationType type) {
  std::string h = "u";
  for (auto name : component_names(type)) {
    const std::string n(name);
    h += "," + n + "," + n + "_d1," + n + "_d2";
  }
  return h;
}

inline void write_curve_csv(std::ostream& os, const GeneratingCurve& curve, std::size_t n) {
  os << curve_csv_header(curve.type()) << '\n';
  for (const CurveSample& s : sample_curve(curve, n)) {
    os << detail::fmt17(s.u);
    for (const Jet2& j : s.jets)
      os << ',' << detail::fmt17(j.val) << ',' << detail::fmt17(j.d1) << ',' << detail::fmt17(j.d2);
    os << '\n';
  }
}

/// Reads a curve CSV. The family follows from the header; hyperbolic curves
/// are assigned case A or B from the sampled slope unless `type` is given.
inline GeneratingCurve read_curve_csv(std::istream& is, std::optional<RotationType> type = {}) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::Io, "empty curve CSV");
  const auto header = detail::split(line, ',');
  std::optional<RotationType> family;
  for (auto t : {RotationType::Elliptic, RotationType::HyperbolicA, RotationType::Parabolic})
    if (line.rfind(curve_csv_header(t), 0) == 0 && header.size() == 10) family = t;
  if (!family) throw Error(ErrorCode::Io, "unrecognised curve CSV header: " + line);

  std::vector<CurveSample> samples;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 10)
      throw Error(ErrorCode::Io, "line " + std::to_string(lineno) + ": expected 10 fields");
    CurveSample s;
    s.u = detail::parse_double(f[0], lineno);
    for (std::size_t c = 0; c < 3; ++c)
      s.jets[c] = {detail::parse_double(f[1 + 3 * c], lineno),
                   detail::parse_double(f[2 + 3 * c], lineno),
                   detail::parse_double(f[3 + 3 * c], lineno)};
    samples.push_back(s);
  }

  RotationType resolved = *family;
  if (type) {
    if (is_hyperbolic(*type) != is_hyperbolic(*family) ||
        (!is_hyperbolic(*type) && *type != *family))
      throw Error(ErrorCode::Io, "curve CSV does not hold a " + std::string(to_string(*type)) + " curve");
    resolved = *type;
  } else if (is_hyperbolic(*family)) {
    bool above = false, below = false;
    for (const auto& s : samples) (s.jets[0].d1 * s.jets[0].d1 > 1.0 ? above : below) = true;
    if (above && below)
      throw Error(ErrorCode::CaseMismatch, "(r')^2 - 1 changes sign along the sampled curve");
    resolved = above ? RotationType::HyperbolicA : RotationType::HyperbolicB;
  }
  return sampled_curve(resolved, std::move(samples));
}

/// Positions on a grid, row-major in u.
inline std::vector<Vec4> sample_surface(const SurfacePatch& patch, const GridSpec& grid) {
  std::vector<Vec4> pts(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    pts[k] = patch.position(grid.u_at(k / grid.nv), grid.v_at(k % grid.nv));
  });
  return pts;
}

inline void write_surface_csv(std::ostream& os, const SurfacePatch& patch, const GridSpec& grid) {
  const std::vector<Vec4> pts = sample_surface(patch, grid);
  os << "u,v,x1,x2,x3,x4\n";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    os << detail::fmt17(grid.u_at(k / grid.nv)) << ',' << detail::fmt17(grid.v_at(k % grid.nv));
    for (int c = 0; c < 4; ++c) os << ',' << detail::fmt17(pts[k][c]);
    os << '\n';
  }
}

/// Three distinct coordinate indices in 0..3, parsed from e.g. "x1,x3,x4".
inline std::array<int, 3> parse_projection(std::string_view text) {
  const auto parts = detail::split(text, ',');
  std::array<int, 3> out{};
  if (parts.size() != 3) throw Error(ErrorCode::Usage, "projection needs three coordinates");
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string& p = parts[i];
    if (p.size() != 2 || p[0] != 'x' || p[1] < '1' || p[1] > '4')
      throw Error(ErrorCode::Usage, "bad projection coordinate '" + p + "'");
    out[i] = p[1] - '1';
    for (std::size_t k = 0; k < i; ++k)
      if (out[k] == out[i]) throw Error(ErrorCode::Usage, "projection repeats " + p);
  }
  return out;
}

/// Vertices are the grid points projected to three coordinates; faces are the grid quads.
inline void write_obj(std::ostream& os, const SurfacePatch& patch, const GridSpec& grid,
                      const std::array<int, 3>& projection) {
  const std::vector<Vec4> pts = sample_surface(patch, grid);
  os << "# projection: x" << projection[0] + 1 << ",x" << projection[1] + 1 << ",x"
     << projection[2] + 1 << '\n';
  for (const Vec4& p : pts)
    os << "v " << detail::fmt17(p[projection[0]]) << ' ' << detail::fmt17(p[projection[1]]) << ' '
       << detail::fmt17(p[projection[2]]) << '\n';
  for (std::size_t i = 0; i + 1 < grid.nu; ++i)
    for (std::size_t j = 0; j + 1 < grid.nv; ++j) {
      const std::size_t a = i * grid.nv + j + 1;
      os << "f " << a << ' ' << a + grid.nv << ' ' << a + grid.nv + 1 << ' ' << a + 1 << '\n';
    }
}

/// Writes via a temporary file in the same directory and renames it into place.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot move output into place at " + path.string());
  }
}

}  // namespace cmc
