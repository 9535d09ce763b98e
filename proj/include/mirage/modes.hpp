#pragma once

// Dirichlet eigenmodes of the elliptical corral,
//
//   Psi_{n,j}(xi, eta) = Mc_n(xi, q_{n,j}) ce_n(eta, q_{n,j})   (even)
//   Psi_{n,j}(xi, eta) = Ms_n(xi, q_{n,j}) se_n(eta, q_{n,j})   (odd)
//
// where q_{n,j} is the j-th q at which the radial factor vanishes on the
// boundary xi = xi0. Modes are scaled to unit maximum amplitude.

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "mirage/geometry.hpp"
#include "mirage/grid.hpp"
#include "mirage/mathieu.hpp"

namespace mirage {

struct QSearch {
  double q_max = 50.0;
  double scan_step = 0.05;
  double tolerance = 1e-11;  // bracket width at which bisection stops
  int terms = kDefaultTerms;
};

// Value of the radial factor on the boundary as a function of q.
double boundary_value(const ModeSpec& spec, const EllipseGeometry<double>& g, double q,
                      int terms = kDefaultTerms);

// First `count` boundary roots in increasing q. Throws NotFoundError when the
// window holds fewer.
std::vector<double> boundary_roots(const ModeSpec& spec, const EllipseGeometry<double>& g,
                                   int count, const QSearch& search = {});

// q_{n,j}: the spec.radial_index-th root.
double find_q(const ModeSpec& spec, const EllipseGeometry<double>& g, const QSearch& search = {});

// Node values over the bounding box for bilinear interpolation.
struct ModeCache {
  int resolution = 0;  // nodes per axis
  Bounds bounds;
  Eigen::ArrayXXd nodes;  // nodes(ix, iy)
};

struct Eigenmode {
  ModeSpec spec;
  EllipseGeometry<double> geometry = EllipseGeometry<double>::mirage_corral();
  double q = 0;
  AngularSolution<double> angular;
  double norm = 1;  // multiplies radial * angular so that max |Psi| = 1
  std::shared_ptr<const ModeCache> cache;

  double wavenumber_squared() const { return 4.0 * q / (geometry.focal() * geometry.focal()); }
};

struct BuildOptions {
  QSearch search;
  int normalization_grid = 512;
  int cache_resolution = 0;  // 0 disables the cache
};

Eigenmode build_mode(const ModeSpec& spec, const EllipseGeometry<double>& g,
                     const BuildOptions& options = {});

// Copy of mode with an interpolation cache of resolution x resolution nodes.
Eigenmode with_cache(const Eigenmode& mode, int resolution);

enum class EvalPath { direct, cached };

// Points must satisfy xi <= xi0 + 0.5; further out throws DomainError.
inline constexpr double kMaxXiBeyondBoundary = 0.5;

// Unnormalized radial * angular product at elliptical coordinates.
double mode_product(const Eigenmode& mode, double xi, double eta);

double mode_value(const Eigenmode& mode, const Point& p, EvalPath path = EvalPath::direct);

// Centred differences with steps h (x) and k (y).
Eigen::Vector2d mode_gradient(const Eigenmode& mode, const Point& p, double h, double k,
                              EvalPath path = EvalPath::direct);

// Field grid of mode values at bin centres inside the ellipse.
HistogramGrid mode_grid(const Eigenmode& mode, int nx, int ny);

}  // namespace mirage
