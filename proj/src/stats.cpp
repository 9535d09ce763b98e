#include "mirage/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mirage/errors.hpp"

namespace mirage {

HistogramGrid position_histogram(std::span<const Trajectory> trajs, const EllipseGeometry<double>& g, int nx,
                                 int ny) {
  HistogramGrid grid(nx, ny, Bounds::of(g), GridKind::counts);
  for (const auto& t : trajs)
    for (const auto& s : t.states)
      if (const auto bin = grid.bin_of(s.pos)) grid(bin->ix, bin->iy) += 1.0;
  return grid;
}

HistogramGrid displacement_histogram(std::span<const Trajectory> trajs, const EllipseGeometry<double>& g, int nx,
                                     int ny) {
  HistogramGrid grid(nx, ny, Bounds::of(g), GridKind::mean_displacement);
  Eigen::ArrayXXd sum = Eigen::ArrayXXd::Zero(nx, ny);
  auto& visits = grid.weights();
  for (const auto& t : trajs) {
    std::size_t b = 0;
    for (std::size_t i = 0; i + 1 < t.states.size(); ++i) {
      while (b < t.run_boundaries.size() && t.run_boundaries[b] < i + 1) ++b;
      if (b < t.run_boundaries.size() && t.run_boundaries[b] == i + 1) continue;
      const auto bin = grid.bin_of(t.states[i].pos);
      if (!bin) continue;
      sum(bin->ix, bin->iy) += (t.states[i + 1].pos - t.states[i].pos).norm();
      visits(bin->ix, bin->iy) += 1.0;
    }
  }
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      if (visits(ix, iy) > 0) grid(ix, iy) = sum(ix, iy) / visits(ix, iy);
  return grid;
}

HistogramGrid merge(const HistogramGrid& lhs, const HistogramGrid& rhs) {
  if (lhs.nx() != rhs.nx() || lhs.ny() != rhs.ny() || !(lhs.bounds() == rhs.bounds()) || lhs.kind() != rhs.kind())
    throw DomainError("merge: grids differ in shape, bounds or kind");
  HistogramGrid out = lhs;
  if (lhs.kind() != GridKind::mean_displacement) {
    out.values() = lhs.values() + rhs.values();
    return out;
  }
  for (int iy = 0; iy < lhs.ny(); ++iy)
    for (int ix = 0; ix < lhs.nx(); ++ix) {
      const double wl = lhs.weights()(ix, iy), wr = rhs.weights()(ix, iy);
      const double w = wl + wr;
      out.weights()(ix, iy) = w;
      if (w > 0)
        out(ix, iy) = ((wl > 0 ? wl * lhs(ix, iy) : 0.0) + (wr > 0 ? wr * rhs(ix, iy) : 0.0)) / w;
    }
  return out;
}

namespace {

void normalize_max(HistogramGrid& grid) {
  const double m = grid.max_abs();
  if (!(m > 0)) throw DomainError("averaged field vanishes identically (alpha = beta = 0?)");
  grid.values() /= m;
}

void check_weights(double alpha, double beta) {
  if (!(alpha >= 0) || !(beta >= 0)) throw DomainError("mode weights must be nonnegative");
  if (alpha == 0 && beta == 0) throw DomainError("alpha = beta = 0 gives a degenerate (zero) field");
}

}  // namespace

HistogramGrid averaged_field_analytic(const ModePair& modes, double alpha, double beta, int nx, int ny) {
  check_weights(alpha, beta);
  HistogramGrid grid = sample_field(modes.alpha_mode.geometry, nx, ny, [&](const Point& c) {
    return 0.25 * alpha * mode_value(modes.alpha_mode, c) + 0.25 * beta * mode_value(modes.beta_mode, c);
  });
  normalize_max(grid);
  return grid;
}

HistogramGrid averaged_field_from_draws(const ModePair& modes, double alpha, double beta,
                                        std::span<const double> draws, int nx, int ny) {
  check_weights(alpha, beta);
  if (draws.empty()) throw DomainError("averaged_field_mc: need at least one draw");
  const HistogramGrid a = mode_grid(modes.alpha_mode, nx, ny);
  const HistogramGrid b = mode_grid(modes.beta_mode, nx, ny);
  HistogramGrid grid = a;
  grid.values().setZero();
  for (const double p : draws) grid.values() += p * alpha * a.values() + (0.5 - p) * beta * b.values();
  grid.values() /= static_cast<double>(draws.size());
  normalize_max(grid);
  return grid;
}

HistogramGrid averaged_field_mc(const ModePair& modes, double alpha, double beta, long draws, std::uint64_t seed,
                                int nx, int ny) {
  if (draws < 1) throw DomainError("averaged_field_mc: need at least one draw");
  Rng rng(seed);
  std::vector<double> p(static_cast<std::size_t>(draws));
  for (auto& v : p) v = 0.5 * uniform01(rng);
  return averaged_field_from_draws(modes, alpha, beta, p, nx, ny);
}

namespace {

template <typename Fn>
void for_common_bins(const HistogramGrid& lhs, const HistogramGrid& rhs, Fn&& fn) {
  if (lhs.nx() != rhs.nx() || lhs.ny() != rhs.ny()) throw DomainError("grids differ in shape");
  for (int iy = 0; iy < lhs.ny(); ++iy)
    for (int ix = 0; ix < lhs.nx(); ++ix)
      if (!lhs.is_empty(ix, iy) && !rhs.is_empty(ix, iy)) fn(lhs(ix, iy), rhs(ix, iy));
}

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
    i = j + 1;
  }
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double max_abs_difference(const HistogramGrid& lhs, const HistogramGrid& rhs) {
  double m = 0;
  for_common_bins(lhs, rhs, [&](double a, double b) { m = std::max(m, std::abs(a - b)); });
  return m;
}

double rms_difference(const HistogramGrid& lhs, const HistogramGrid& rhs) {
  double s = 0;
  long n = 0;
  for_common_bins(lhs, rhs, [&](double a, double b) {
    s += (a - b) * (a - b);
    ++n;
  });
  return n > 0 ? std::sqrt(s / n) : 0.0;
}

double grid_correlation(const HistogramGrid& lhs, const HistogramGrid& rhs) {
  std::vector<double> a, b;
  for_common_bins(lhs, rhs, [&](double x, double y) {
    a.push_back(x);
    b.push_back(y);
  });
  return pearson(a, b);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("spearman: sample sizes differ");
  const auto rx = ranks(x), ry = ranks(y);
  return pearson(rx, ry);
}

double interior_occupancy(const HistogramGrid& counts, const EllipseGeometry<double>& g) {
  long interior = 0, visited = 0;
  for (int iy = 0; iy < counts.ny(); ++iy)
    for (int ix = 0; ix < counts.nx(); ++ix) {
      if (!contains(g, counts.center(ix, iy))) continue;
      ++interior;
      if (counts(ix, iy) > 0) ++visited;
    }
  return interior > 0 ? static_cast<double>(visited) / interior : 0.0;
}

OccupancyDisplacement occupancy_displacement_correlation(const HistogramGrid& counts,
                                                         const HistogramGrid& displacement, double min_visits) {
  std::vector<double> occ, disp;
  for (int iy = 0; iy < counts.ny(); ++iy)
    for (int ix = 0; ix < counts.nx(); ++ix)
      if (counts(ix, iy) >= min_visits && !displacement.is_empty(ix, iy)) {
        occ.push_back(counts(ix, iy));
        disp.push_back(displacement(ix, iy));
      }
  return {spearman(occ, disp), static_cast<int>(occ.size())};
}

}  // namespace mirage
