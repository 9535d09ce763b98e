#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mirage/errors.hpp"
#include "mirage/modes.hpp"
#include "mirage/random.hpp"

using namespace mirage;
using std::numbers::pi;

namespace {

const auto g = EllipseGeometry<double>::mirage_corral();
const ModeSpec odd15{1, Parity::odd, 5};
const ModeSpec even44{4, Parity::even, 4};

const Eigenmode& odd_mode() {
  static const Eigenmode m = build_mode(odd15, g, {.cache_resolution = 1024});
  return m;
}
const Eigenmode& even_mode() {
  static const Eigenmode m = build_mode(even44, g, {.cache_resolution = 1024});
  return m;
}

Point random_interior(Rng& rng, double shrink = 0.98) {
  const EllipseGeometry<double> inner(shrink * g.a(), g.e());
  return sample_interior(inner, rng);
}

}  // namespace

TEST_CASE("boundary roots are ascending and match an independent solver") {
  // Dirichlet roots at xi0 = acosh 2 from scipy.special.mathieu_modsem1 / modcem1
  const auto odd = boundary_roots(odd15, g, 5);
  const double odd_ref[] = {1.1461, 3.8951, 8.2812, 14.3121, 21.98806};
  for (int i = 0; i < 5; ++i) CHECK(odd[i] == doctest::Approx(odd_ref[i]).epsilon(5e-5));
  const auto even = boundary_roots(even44, g, 4);
  const double even_ref[] = {4.0833, 8.5124, 14.1832, 21.42942};
  for (int i = 0; i < 4; ++i) CHECK(even[i] == doctest::Approx(even_ref[i]).epsilon(5e-5));
  for (std::size_t i = 1; i < odd.size(); ++i) CHECK(odd[i] > odd[i - 1]);
}

TEST_CASE("find_q returns converged roots") {
  const double q_odd = find_q(odd15, g), q_even = find_q(even44, g);
  CHECK(std::abs(boundary_value(odd15, g, q_odd)) < 1e-9);
  CHECK(std::abs(boundary_value(even44, g, q_even)) < 1e-9);
  // a tighter search and a longer series do not move the root
  QSearch fine;
  fine.terms = 100;
  fine.scan_step = 0.02;
  fine.q_max = 23.0;
  CHECK(find_q(odd15, g, fine) == doctest::Approx(q_odd).epsilon(1e-10));
  CHECK(find_q(even44, g, fine) == doctest::Approx(q_even).epsilon(1e-10));
}

TEST_CASE("missing roots are reported") {
  QSearch narrow;
  narrow.q_max = 5.0;
  try {
    find_q(odd15, g, narrow);
    FAIL("expected NotFoundError");
  } catch (const NotFoundError& e) {
    CHECK(e.located == 2);
  }
}

TEST_CASE("unit maximum amplitude") {
  for (const Eigenmode* m : {&odd_mode(), &even_mode()}) {
    const HistogramGrid grid = mode_grid(*m, 301, 301);
    CHECK(grid.max_abs() <= 1.0 + 1e-9);
    CHECK(grid.max_abs() > 0.97);
  }
}

TEST_CASE("modes vanish on the wall") {
  for (const Eigenmode* m : {&odd_mode(), &even_mode()}) {
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const double eta = -pi + 2 * pi * i / 1000;
      worst = std::max(worst, std::abs(m->norm * mode_product(*m, g.xi0(), eta)));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("reflection symmetries") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Point p = random_interior(rng);
    const double x = p.x(), y = p.y();
    const auto& e = even_mode();
    const double v = mode_value(e, p);
    CHECK(std::abs(mode_value(e, {-x, y}) - v) < 1e-10);
    CHECK(std::abs(mode_value(e, {x, -y}) - v) < 1e-10);
    const auto& o = odd_mode();
    const double w = mode_value(o, p);
    CHECK(std::abs(mode_value(o, {-x, y}) - w) < 1e-10);
    CHECK(std::abs(mode_value(o, {x, -y}) + w) < 1e-10);
  }
  CHECK(std::abs(mode_value(odd_mode(), {3.0, 0.0})) < 1e-12);
}

TEST_CASE("modes solve the Helmholtz equation") {
  Rng rng(3);
  for (const Eigenmode* m : {&odd_mode(), &even_mode()}) {
    const double k2 = m->wavenumber_squared();
    CHECK(k2 == doctest::Approx(4 * m->q / (7.125 * 7.125)));
    const double h = 1e-3;
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const Point p = random_interior(rng, 0.95);
      const auto f = [&](double dx, double dy) { return mode_value(*m, {p.x() + dx, p.y() + dy}); };
      const double lap = (f(h, 0) + f(-h, 0) + f(0, h) + f(0, -h) - 4 * f(0, 0)) / (h * h);
      worst = std::max(worst, std::abs(lap + k2 * f(0, 0)));
    }
    CHECK(worst <= 1e-3 * k2);
  }
}

TEST_CASE("cached evaluation tracks direct evaluation") {
  Rng rng(5);
  for (const Eigenmode* m : {&odd_mode(), &even_mode()}) {
    REQUIRE(m->cache);
    double worst = 0;
    for (int i = 0; i < 2000; ++i) {
      const Point p = random_interior(rng, 1.0);
      worst = std::max(worst, std::abs(mode_value(*m, p, EvalPath::cached) - mode_value(*m, p)));
    }
    CHECK(worst <= 5e-4);
  }
  // at nodes the interpolant is exact
  const auto& m = even_mode();
  const auto& c = *m.cache;
  const double dx = (c.bounds.xmax - c.bounds.xmin) / (c.resolution - 1);
  const double dy = (c.bounds.ymax - c.bounds.ymin) / (c.resolution - 1);
  const Point node(c.bounds.xmin + 500 * dx, c.bounds.ymin + 600 * dy);
  CHECK(mode_value(m, node, EvalPath::cached) == doctest::Approx(mode_value(m, node)).epsilon(1e-12));
}

TEST_CASE("cache interpolation error falls with resolution") {
  const Eigenmode coarse = with_cache(even_mode(), 128);
  const Eigenmode fine = with_cache(even_mode(), 512);
  Rng rng(8);
  double e_coarse = 0, e_fine = 0;
  for (int i = 0; i < 2000; ++i) {
    const Point p = random_interior(rng);
    const double exact = mode_value(even_mode(), p);
    e_coarse = std::max(e_coarse, std::abs(mode_value(coarse, p, EvalPath::cached) - exact));
    e_fine = std::max(e_fine, std::abs(mode_value(fine, p, EvalPath::cached) - exact));
  }
  // bilinear: error ~ spacing^2, so 4x finer gives ~16x smaller
  CHECK(e_coarse / e_fine > 8.0);
}

TEST_CASE("gradient converges at second order") {
  const auto& m = odd_mode();
  const Point p(2.3, -4.1);
  // Richardson-extrapolated reference from two small steps
  const Eigen::Vector2d g1 = mode_gradient(m, p, 1e-3, 1e-3);
  const Eigen::Vector2d g2 = mode_gradient(m, p, 5e-4, 5e-4);
  const Eigen::Vector2d ref = (4 * g2 - g1) / 3;
  const double e1 = (mode_gradient(m, p, 0.04, 0.04) - ref).norm();
  const double e2 = (mode_gradient(m, p, 0.02, 0.02) - ref).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS(mode_gradient(m, p, 0.0, 1e-3), DomainError);
}

TEST_CASE("mode grids") {
  const HistogramGrid grid = mode_grid(even_mode(), 64, 48);
  CHECK(grid.nx() == 64);
  CHECK(grid.ny() == 48);
  CHECK(grid.kind() == GridKind::field);
  CHECK(grid.is_empty(0, 0));
  CHECK_FALSE(grid.is_empty(32, 24));
}

TEST_CASE("evaluation far outside the corral is refused") {
  const double far_xi = g.xi0() + kMaxXiBeyondBoundary + 0.1;
  const Point far(g.focal() * std::cosh(far_xi), 0.0);
  CHECK_THROWS_AS(mode_value(even_mode(), far), DomainError);
  // slightly outside is allowed (finite-difference stencils at the wall)
  CHECK_NOTHROW(mode_value(even_mode(), Point(g.a() + 0.01, 0.0)));
}
