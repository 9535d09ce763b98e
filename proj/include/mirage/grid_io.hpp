#pragma once

// File formats.
//
// Grid CSV
//   # mirage-grid v1
//   # kind=<counts|mean_displacement|field> nx=<int> ny=<int> xmin=<mm> xmax=<mm> ymin=<mm> ymax=<mm>
//   x,y,value
//   <one row per bin, iy outer (ymin upward), ix inner (xmin rightward)>
// x, y are bin centres in mm. Empty bins (NaN) have a blank value field.
// Numbers use 17 significant digits, so identical grids give identical bytes.
//
// PGM
//   Binary P5, nx wide, ny high, maxval 255, first row = largest y.
//   pixel = round(255 * (clamp(v, lo, hi) - lo) / (hi - lo)), empty bins -> 0,
//   lo == hi -> 0. The range depends on kind:
//     counts             lo = 0,        hi = saturation
//     mean_displacement  lo = 0,        hi = max value
//     field              lo = -max|v|,  hi = max|v|
//   A sidecar "<image>.txt" records kind, lo, hi and the mapping.
//
// Trajectory CSV
//   run_id,iter,x_mm,y_mm,w,p_drawn
//   p_drawn is blank for the first state of each run.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "mirage/dynamics.hpp"
#include "mirage/grid.hpp"

namespace mirage {

inline constexpr double kDefaultSaturation = 220.0;

// Shortest round-trip formatting is not used; fixed 17 significant digits.
std::string format_number(double v);

void write_grid_csv(std::ostream& out, const HistogramGrid& grid);
void write_grid_csv(const std::filesystem::path& path, const HistogramGrid& grid);

// Throws ParseError with the 1-based line number of the first bad line.
HistogramGrid read_grid_csv(std::istream& in);
HistogramGrid read_grid_csv(const std::filesystem::path& path);

struct PixelRange {
  double lo = 0;
  double hi = 0;
};

PixelRange pixel_range(const HistogramGrid& grid, double saturation = kDefaultSaturation);
unsigned char to_pixel(double v, const PixelRange& range);

// Writes the image and its sidecar; returns the range used.
PixelRange write_pgm(const std::filesystem::path& path, const HistogramGrid& grid,
                     double saturation = kDefaultSaturation);

void write_trajectory_csv(std::ostream& out, std::span<const Trajectory> trajs);
void write_trajectory_csv(const std::filesystem::path& path, std::span<const Trajectory> trajs);

}  // namespace mirage
