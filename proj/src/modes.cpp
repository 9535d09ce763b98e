#include "mirage/modes.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace mirage {

double boundary_value(const ModeSpec& spec, const EllipseGeometry<double>& g, double q, int terms) {
  return radial_eval(angular_solve(spec, q, terms), g.xi0());
}

namespace {

struct Sample {
  double q;
  double value;
  double lead;  // normalizing coefficient of the radial series
};

Sample sample_at(const ModeSpec& spec, const EllipseGeometry<double>& g, double q, int terms) {
  const auto sol = angular_solve(spec, q, terms);
  return {q, radial_eval(sol, g.xi0()), sol.coeffs(0)};
}

}  // namespace

std::vector<double> boundary_roots(const ModeSpec& spec, const EllipseGeometry<double>& g, int count,
                                   const QSearch& search) {
  spec.validate();
  std::vector<double> roots;
  if (count <= 0) return roots;

  const int steps = static_cast<int>(std::floor(search.q_max / search.scan_step + 1e-9));
  Sample prev = sample_at(spec, g, search.scan_step, search.terms);
  for (int i = 2; i <= steps && static_cast<int>(roots.size()) < count; ++i) {
    const Sample cur = sample_at(spec, g, std::min(i * search.scan_step, search.q_max), search.terms);
    if (prev.value == 0.0) {
      roots.push_back(prev.q);
    } else if ((prev.value < 0) != (cur.value < 0) && cur.value != 0.0 &&
               (prev.lead < 0) == (cur.lead < 0)) {
      // A sign change of the lead coefficient would be a pole, not a root.
      Sample lo = prev, hi = cur;
      while (hi.q - lo.q > search.tolerance) {
        const double mid = 0.5 * (lo.q + hi.q);
        if (mid <= lo.q || mid >= hi.q) break;
        const Sample m = sample_at(spec, g, mid, search.terms);
        if (m.value == 0.0) {
          lo = hi = m;
          break;
        }
        ((m.value < 0) == (lo.value < 0) ? lo : hi) = m;
      }
      roots.push_back(0.5 * (lo.q + hi.q));
    }
    prev = cur;
  }
  if (static_cast<int>(roots.size()) < count) {
    throw NotFoundError("find_q: only " + std::to_string(roots.size()) + " boundary roots for " +
                            spec.label() + " in q <= " + std::to_string(search.q_max) + ", need " +
                            std::to_string(count),
                        static_cast<int>(roots.size()));
  }
  return roots;
}

double find_q(const ModeSpec& spec, const EllipseGeometry<double>& g, const QSearch& search) {
  return boundary_roots(spec, g, spec.radial_index, search).back();
}

double mode_product(const Eigenmode& mode, double xi, double eta) {
  if (xi > mode.geometry.xi0() + kMaxXiBeyondBoundary)
    throw DomainError("mode evaluation at xi = " + std::to_string(xi) + " beyond xi0 + 0.5");
  return radial_eval(mode.angular, xi) * angular_eval(mode.angular, eta);
}

namespace {

double direct_value(const Eigenmode& mode, const Point& p) {
  const auto c = cartesian_to_elliptical(mode.geometry, p);
  return mode.norm * mode_product(mode, c.xi, c.eta);
}

double interpolate(const ModeCache& cache, const Point& p, bool& ok) {
  const Bounds& b = cache.bounds;
  const int last = cache.resolution - 1;
  const double u = (p.x() - b.xmin) / (b.xmax - b.xmin) * last;
  const double v = (p.y() - b.ymin) / (b.ymax - b.ymin) * last;
  if (!(u >= 0 && u <= last && v >= 0 && v <= last)) {
    ok = false;
    return 0;
  }
  ok = true;
  const int i = std::min(static_cast<int>(u), last - 1);
  const int j = std::min(static_cast<int>(v), last - 1);
  const double fu = u - i, fv = v - j;
  const auto& n = cache.nodes;
  return (1 - fu) * (1 - fv) * n(i, j) + fu * (1 - fv) * n(i + 1, j) + (1 - fu) * fv * n(i, j + 1) +
         fu * fv * n(i + 1, j + 1);
}

// Largest |product| near `start`, by compass search inside the ellipse.
double refine_max(const Eigenmode& mode, Point start, double step, double best) {
  const auto value_at = [&](const Point& p) {
    const auto c = cartesian_to_elliptical(mode.geometry, p);
    return std::abs(mode_product(mode, c.xi, c.eta));
  };
  while (step > 1e-7) {
    bool moved = false;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        const Point p = start + step * Point(dx, dy);
        if (!contains(mode.geometry, p)) continue;
        const double v = value_at(p);
        if (v > best) {
          best = v;
          start = p;
          moved = true;
        }
      }
    if (!moved) step *= 0.5;
  }
  return best;
}

template <typename RowFn>
void parallel_rows(int rows, RowFn&& fn) {
  const int workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int r = w; r < rows; r += workers) fn(r);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

Eigenmode build_mode(const ModeSpec& spec, const EllipseGeometry<double>& g, const BuildOptions& options) {
  Eigenmode mode;
  mode.spec = spec;
  mode.geometry = g;
  mode.q = find_q(spec, g, options.search);
  mode.angular = angular_solve(spec, mode.q, options.search.terms);
  mode.norm = 1.0;

  const int n = options.normalization_grid;
  if (n < 2) throw DomainError("build_mode: normalization grid must have at least 2 nodes per axis");
  const Bounds b = Bounds::of(g);
  const double hx = (b.xmax - b.xmin) / (n - 1), hy = (b.ymax - b.ymin) / (n - 1);
  std::vector<double> row_best(n, 0.0);
  std::vector<Point> row_arg(n, Point::Zero());
  parallel_rows(n, [&](int iy) {
    for (int ix = 0; ix < n; ++ix) {
      const Point p(b.xmin + ix * hx, b.ymin + iy * hy);
      if (!contains(g, p)) continue;
      const double v = std::abs(direct_value(mode, p));
      if (v > row_best[iy]) {
        row_best[iy] = v;
        row_arg[iy] = p;
      }
    }
  });
  const auto best = std::max_element(row_best.begin(), row_best.end()) - row_best.begin();
  if (!(row_best[best] > 0)) throw NumericalError("build_mode: mode " + spec.label() + " vanishes on the grid");
  const double peak = refine_max(mode, row_arg[best], std::max(hx, hy), row_best[best]);
  mode.norm = 1.0 / peak;

  if (options.cache_resolution > 0) return with_cache(mode, options.cache_resolution);
  return mode;
}

Eigenmode with_cache(const Eigenmode& mode, int resolution) {
  if (resolution < 2) throw DomainError("with_cache: resolution must be at least 2");
  auto cache = std::make_shared<ModeCache>();
  cache->resolution = resolution;
  cache->bounds = Bounds::of(mode.geometry);
  cache->nodes.resize(resolution, resolution);
  const Bounds& b = cache->bounds;
  const double hx = (b.xmax - b.xmin) / (resolution - 1), hy = (b.ymax - b.ymin) / (resolution - 1);
  parallel_rows(resolution, [&](int iy) {
    for (int ix = 0; ix < resolution; ++ix)
      cache->nodes(ix, iy) = direct_value(mode, Point(b.xmin + ix * hx, b.ymin + iy * hy));
  });
  Eigenmode out = mode;
  out.cache = std::move(cache);
  return out;
}

double mode_value(const Eigenmode& mode, const Point& p, EvalPath path) {
  if (path == EvalPath::cached && mode.cache) {
    bool ok = false;
    const double v = interpolate(*mode.cache, p, ok);
    if (ok) return v;
  }
  return direct_value(mode, p);
}

Eigen::Vector2d mode_gradient(const Eigenmode& mode, const Point& p, double h, double k, EvalPath path) {
  if (!(h > 0) || !(k > 0)) throw DomainError("mode_gradient: steps must be positive");
  const double gx = (mode_value(mode, {p.x() + h, p.y()}, path) - mode_value(mode, {p.x() - h, p.y()}, path)) / (2 * h);
  const double gy = (mode_value(mode, {p.x(), p.y() + k}, path) - mode_value(mode, {p.x(), p.y() - k}, path)) / (2 * k);
  return {gx, gy};
}

HistogramGrid mode_grid(const Eigenmode& mode, int nx, int ny) {
  return sample_field(mode.geometry, nx, ny, [&](const Point& c) { return mode_value(mode, c); });
}

}  // namespace mirage
