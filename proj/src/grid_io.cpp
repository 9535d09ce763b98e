#include "mirage/grid_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "mirage/errors.hpp"

namespace mirage {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) parts.push_back(cur);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError("line " + std::to_string(line) + ": bad number '" + s + "'", line);
  return v;
}

}  // namespace

void write_grid_csv(std::ostream& out, const HistogramGrid& grid) {
  const Bounds& b = grid.bounds();
  out << "# mirage-grid v1\n";
  out << "# kind=" << to_string(grid.kind()) << " nx=" << grid.nx() << " ny=" << grid.ny()
      << " xmin=" << format_number(b.xmin) << " xmax=" << format_number(b.xmax) << " ymin=" << format_number(b.ymin)
      << " ymax=" << format_number(b.ymax) << '\n';
  out << "x,y,value\n";
  for (int iy = 0; iy < grid.ny(); ++iy)
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const Point c = grid.center(ix, iy);
      out << format_number(c.x()) << ',' << format_number(c.y()) << ',';
      if (!grid.is_empty(ix, iy)) out << format_number(grid(ix, iy));
      out << '\n';
    }
}

void write_grid_csv(const std::filesystem::path& path, const HistogramGrid& grid) {
  auto out = open_out(path);
  write_grid_csv(out, grid);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

HistogramGrid read_grid_csv(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  const auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next() || line != "# mirage-grid v1") throw ParseError("line 1: missing '# mirage-grid v1' header", 1);
  if (!next() || line.rfind("# ", 0) != 0) throw ParseError("line 2: missing grid description", 2);
  std::map<std::string, std::string> fields;
  for (const auto& tok : split(line.substr(2), ' ')) {
    if (tok.empty()) continue;
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("line 2: expected key=value, got '" + tok + "'", 2);
    fields[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"kind", "nx", "ny", "xmin", "xmax", "ymin", "ymax"})
    if (!fields.count(key)) throw ParseError(std::string("line 2: missing ") + key, 2);

  GridKind kind;
  try {
    kind = grid_kind_from_string(fields["kind"]);
  } catch (const DomainError& e) {
    throw ParseError(std::string("line 2: ") + e.what(), 2);
  }
  const double nx = parse_double(fields["nx"], 2), ny = parse_double(fields["ny"], 2);
  if (nx < 1 || ny < 1 || nx != std::floor(nx) || ny != std::floor(ny) || nx * ny > 1e8)
    throw ParseError("line 2: bad grid size", 2);
  const Bounds b{parse_double(fields["xmin"], 2), parse_double(fields["xmax"], 2), parse_double(fields["ymin"], 2),
                 parse_double(fields["ymax"], 2)};
  if (!(b.xmax > b.xmin) || !(b.ymax > b.ymin)) throw ParseError("line 2: empty bounds", 2);
  HistogramGrid grid(static_cast<int>(nx), static_cast<int>(ny), b, kind);

  if (!next() || line != "x,y,value") throw ParseError("line 3: expected column header 'x,y,value'", 3);
  for (int iy = 0; iy < grid.ny(); ++iy)
    for (int ix = 0; ix < grid.nx(); ++ix) {
      if (!next()) throw ParseError("line " + std::to_string(n + 1) + ": unexpected end of file", n + 1);
      const auto cols = split(line, ',');
      if (cols.size() != 3) throw ParseError("line " + std::to_string(n) + ": expected 3 columns", n);
      parse_double(cols[0], n);
      parse_double(cols[1], n);
      grid(ix, iy) = cols[2].empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(cols[2], n);
    }
  while (next())
    if (!line.empty()) throw ParseError("line " + std::to_string(n) + ": trailing data after grid", n);
  return grid;
}

HistogramGrid read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_grid_csv(in);
}

PixelRange pixel_range(const HistogramGrid& grid, double saturation) {
  switch (grid.kind()) {
    case GridKind::counts: return {0.0, saturation};
    case GridKind::mean_displacement: return {0.0, grid.max_abs()};
    case GridKind::field: {
      const double m = grid.max_abs();
      return {-m, m};
    }
  }
  return {};
}

unsigned char to_pixel(double v, const PixelRange& r) {
  if (std::isnan(v) || !(r.hi > r.lo)) return 0;
  const double t = (std::clamp(v, r.lo, r.hi) - r.lo) / (r.hi - r.lo);
  return static_cast<unsigned char>(std::lround(255.0 * t));
}

PixelRange write_pgm(const std::filesystem::path& path, const HistogramGrid& grid, double saturation) {
  if (grid.kind() == GridKind::counts && !(saturation > 0)) throw DomainError("saturation must be positive");
  const PixelRange r = pixel_range(grid, saturation);
  {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    out << "P5\n" << grid.nx() << ' ' << grid.ny() << "\n255\n";
    std::vector<char> row(grid.nx());
    for (int iy = grid.ny() - 1; iy >= 0; --iy) {
      for (int ix = 0; ix < grid.nx(); ++ix) row[ix] = static_cast<char>(to_pixel(grid(ix, iy), r));
      out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
  auto side = open_out(path.string() + ".txt");
  side << "kind=" << to_string(grid.kind()) << '\n'
       << "lo=" << format_number(r.lo) << '\n'
       << "hi=" << format_number(r.hi) << '\n'
       << "mapping=pixel = round(255 * (clamp(v, lo, hi) - lo) / (hi - lo)); empty bins -> 0; lo == hi -> 0\n"
       << "orientation=first row is ymax, first column is xmin\n";
  return r;
}

void write_trajectory_csv(std::ostream& out, std::span<const Trajectory> trajs) {
  out << "run_id,iter,x_mm,y_mm,w,p_drawn\n";
  for (const auto& t : trajs)
    for (const auto& s : t.states) {
      out << s.run_id << ',' << s.iter << ',' << format_number(s.pos.x()) << ',' << format_number(s.pos.y()) << ','
          << format_number(s.w) << ',';
      if (!std::isnan(s.p)) out << format_number(s.p);
      out << '\n';
    }
}

void write_trajectory_csv(const std::filesystem::path& path, std::span<const Trajectory> trajs) {
  auto out = open_out(path);
  write_trajectory_csv(out, trajs);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace mirage
