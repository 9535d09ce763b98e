#pragma once

// Rectangular binned grid over the corral bounding box. Used for occupancy
// counts, per-bin mean displacement and sampled fields alike.
//
// Bins are half-open [lo, hi) in each axis except the last bin, which is
// closed, so every point of the box lands in exactly one bin. Field grids are
// sampled at bin centres. Empty bins hold NaN.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "mirage/geometry.hpp"

namespace mirage {

enum class GridKind { counts, mean_displacement, field };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& s);

struct Bounds {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;

  static Bounds of(const EllipseGeometry<double>& g) { return {-g.a(), g.a(), -g.b(), g.b()}; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct BinIndex {
  int ix;
  int iy;
};

class HistogramGrid {
 public:
  HistogramGrid() = default;
  HistogramGrid(int nx, int ny, Bounds bounds, GridKind kind);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const Bounds& bounds() const { return bounds_; }
  GridKind kind() const { return kind_; }

  double dx() const { return (bounds_.xmax - bounds_.xmin) / nx_; }
  double dy() const { return (bounds_.ymax - bounds_.ymin) / ny_; }

  std::optional<BinIndex> bin_of(const Point& p) const;
  Point center(int ix, int iy) const;

  double& operator()(int ix, int iy) { return values_(ix, iy); }
  double operator()(int ix, int iy) const { return values_(ix, iy); }
  bool is_empty(int ix, int iy) const { return std::isnan(values_(ix, iy)); }

  // values(ix, iy); columns run along y.
  Eigen::ArrayXXd& values() { return values_; }
  const Eigen::ArrayXXd& values() const { return values_; }

  // Visit counts behind a mean_displacement grid (zero for other kinds).
  Eigen::ArrayXXd& weights() { return weights_; }
  const Eigen::ArrayXXd& weights() const { return weights_; }

  // Largest |value| over non-empty bins (0 if none).
  double max_abs() const;

 private:
  int nx_ = 0, ny_ = 0;
  Bounds bounds_;
  GridKind kind_ = GridKind::counts;
  Eigen::ArrayXXd values_;
  Eigen::ArrayXXd weights_;
};

// Field grid with bin centres inside the ellipse set to fn(centre) and the
// rest empty.
template <typename Fn>
HistogramGrid sample_field(const EllipseGeometry<double>& g, int nx, int ny, Fn&& fn) {
  HistogramGrid grid(nx, ny, Bounds::of(g), GridKind::field);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const Point c = grid.center(ix, iy);
      grid(ix, iy) = contains(g, c) ? fn(c) : std::numeric_limits<double>::quiet_NaN();
    }
  return grid;
}

}  // namespace mirage
