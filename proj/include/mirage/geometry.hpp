#pragma once

// Elliptical corral geometry and confocal elliptical coordinates.
//
//   x = A cosh(xi) cos(eta),  y = A sinh(xi) sin(eta)
//
// with A the semi-focal distance. The corral boundary is xi = xi0, where
// A cosh(xi0) = a and A sinh(xi0) = b. All lengths are in millimetres.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

#include <Eigen/Core>

#include "mirage/errors.hpp"
#include "mirage/random.hpp"

namespace mirage {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Point = Point2<double>;

template <typename Scalar>
struct EllipticalCoord {
  Scalar xi;
  Scalar eta;
};

template <typename Scalar = double>
class EllipseGeometry {
 public:
  EllipseGeometry(Scalar semi_major, Scalar eccentricity)
      : a_(semi_major), e_(eccentricity) {
    if (!(semi_major > 0) || !(eccentricity > 0) || !(eccentricity < 1))
      throw DomainError("ellipse requires a > 0 and 0 < e < 1");
    using std::sqrt;
    b_ = a_ * sqrt(Scalar(1) - e_ * e_);
    focal_ = a_ * e_;
    xi0_ = std::atanh(b_ / a_);
  }

  // Corral of the mirage experiment: a = 14.25 mm, e = 0.5 (A = 7.125 mm).
  static EllipseGeometry mirage_corral() { return EllipseGeometry(Scalar(14.25), Scalar(0.5)); }

  Scalar a() const { return a_; }
  Scalar b() const { return b_; }
  Scalar e() const { return e_; }
  Scalar focal() const { return focal_; }
  Scalar xi0() const { return xi0_; }

 private:
  Scalar a_, e_, b_, focal_, xi0_;
};

template <typename Scalar>
Point2<Scalar> elliptical_to_cartesian(const EllipseGeometry<Scalar>& g, Scalar xi, Scalar eta) {
  using std::cos, std::cosh, std::sin, std::sinh;
  return {g.focal() * cosh(xi) * cos(eta), g.focal() * sinh(xi) * sin(eta)};
}

// Inverse transform via xi + i eta = acosh((x + i y) / A).
// eta takes the sign of y. Points on the focal segment (y == 0, |x| <= A)
// map to xi = 0 with eta = +acos(x / A); the rest of the x-axis maps to
// eta = 0 (x > A) or eta = +pi (x < -A).
template <typename Scalar>
EllipticalCoord<Scalar> cartesian_to_elliptical(const EllipseGeometry<Scalar>& g,
                                                const Point2<Scalar>& p) {
  using std::abs, std::acos, std::acosh;
  const Scalar A = g.focal();
  if (p.y() == Scalar(0)) {
    const Scalar t = p.x() / A;
    if (abs(t) <= Scalar(1)) return {Scalar(0), acos(t)};
    if (t > 0) return {acosh(t), Scalar(0)};
    return {acosh(-t), std::numbers::pi_v<Scalar>};
  }
  const std::complex<Scalar> w = std::acosh(std::complex<Scalar>(p.x() / A, p.y() / A));
  Scalar xi = abs(w.real());
  Scalar eta = w.imag();
  if ((eta < 0) != (p.y() < 0)) eta = -eta;
  return {xi, eta};
}

// Boundary inclusive: a point exactly on the ellipse is inside.
template <typename Scalar>
bool contains(const EllipseGeometry<Scalar>& g, const Point2<Scalar>& p) {
  const Scalar u = p.x() / g.a();
  const Scalar v = p.y() / g.b();
  return u * u + v * v <= Scalar(1);
}

// Uniform point in the ellipse by rejection from [-a, a] x [-b, b].
// If candidates is non-null, the number of drawn candidates is added to it.
template <typename Scalar>
Point2<Scalar> sample_interior(const EllipseGeometry<Scalar>& g, Rng& rng,
                               std::size_t* candidates = nullptr) {
  for (;;) {
    const Point2<Scalar> p(static_cast<Scalar>(uniform(rng, -double(g.a()), double(g.a()))),
                           static_cast<Scalar>(uniform(rng, -double(g.b()), double(g.b()))));
    if (candidates) ++*candidates;
    if (contains(g, p)) return p;
  }
}

}  // namespace mirage
