#include "mirage/grid.hpp"

#include <algorithm>

#include "mirage/errors.hpp"

namespace mirage {

std::string to_string(GridKind kind) {
  switch (kind) {
    case GridKind::counts: return "counts";
    case GridKind::mean_displacement: return "mean_displacement";
    case GridKind::field: return "field";
  }
  return "unknown";
}

GridKind grid_kind_from_string(const std::string& s) {
  if (s == "counts") return GridKind::counts;
  if (s == "mean_displacement") return GridKind::mean_displacement;
  if (s == "field") return GridKind::field;
  throw DomainError("unknown grid kind '" + s + "'");
}

HistogramGrid::HistogramGrid(int nx, int ny, Bounds bounds, GridKind kind)
    : nx_(nx), ny_(ny), bounds_(bounds), kind_(kind) {
  if (nx < 1 || ny < 1) throw DomainError("grid needs at least one bin per axis");
  if (!(bounds.xmax > bounds.xmin) || !(bounds.ymax > bounds.ymin)) throw DomainError("grid bounds are empty");
  const double fill = kind == GridKind::mean_displacement ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  values_ = Eigen::ArrayXXd::Constant(nx, ny, fill);
  weights_ = Eigen::ArrayXXd::Zero(nx, ny);
}

std::optional<BinIndex> HistogramGrid::bin_of(const Point& p) const {
  if (!(p.x() >= bounds_.xmin && p.x() <= bounds_.xmax && p.y() >= bounds_.ymin && p.y() <= bounds_.ymax))
    return std::nullopt;
  const int ix = std::min(static_cast<int>((p.x() - bounds_.xmin) / dx()), nx_ - 1);
  const int iy = std::min(static_cast<int>((p.y() - bounds_.ymin) / dy()), ny_ - 1);
  return BinIndex{ix, iy};
}

Point HistogramGrid::center(int ix, int iy) const {
  return {bounds_.xmin + (ix + 0.5) * dx(), bounds_.ymin + (iy + 0.5) * dy()};
}

double HistogramGrid::max_abs() const {
  double m = 0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double v = values_.data()[i];
    if (!std::isnan(v)) m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace mirage
