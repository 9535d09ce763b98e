#pragma once

// Bessel functions of the first kind of integer order.
//
// A single downward (Miller) recurrence produces J_0..J_nmax at one argument.
// The start index sits well above max(nmax, x), where the recurrence is
// stable, and the unnormalized sequence is scaled with
// J_0(x) + 2 * sum_{k>=1} J_{2k}(x) = 1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "mirage/errors.hpp"

namespace mirage {

inline constexpr int kBesselMaxOrder = 60;
inline constexpr double kBesselMaxArg = 25.0;

// Limits for the sequence routine used by the Mathieu series, which also
// serves truncation oracles (orders past 200, arguments up to ~45).
inline constexpr int kBesselSequenceMaxOrder = 1000;
inline constexpr double kBesselSequenceMaxArg = 200.0;

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
ArrayX<Scalar> bessel_j_sequence(int nmax, Scalar x) {
  using std::abs, std::ceil, std::sqrt;
  if (nmax < 0 || nmax > kBesselSequenceMaxOrder || !(x >= 0) || x > Scalar(kBesselSequenceMaxArg))
    throw DomainError("bessel_j_sequence: order " + std::to_string(nmax) + " or argument " +
                      std::to_string(static_cast<double>(x)) + " outside validated range");

  ArrayX<Scalar> out = ArrayX<Scalar>::Zero(nmax + 1);
  if (x == Scalar(0)) {
    out(0) = Scalar(1);
    return out;
  }

  const int top = std::max(nmax, static_cast<int>(ceil(x)));
  int start = top + 30 + static_cast<int>(2 * sqrt(40.0 * top));
  start += start % 2;

  const Scalar big = Scalar(1e250);
  const Scalar two_over_x = Scalar(2) / x;
  Scalar next = 0;         // j_{k+1}
  Scalar cur = Scalar(1e-30);  // j_k, arbitrary seed
  Scalar even_sum = 0;     // sum of j_{2k}, k >= 1
  for (int k = start; k > 0; --k) {
    const Scalar prev = Scalar(k) * two_over_x * cur - next;  // j_{k-1}
    next = cur;
    cur = prev;
    if (k - 1 <= nmax) out(k - 1) = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) even_sum += cur;
    if (abs(cur) > big) {
      const Scalar s = Scalar(1) / big;
      cur *= s;
      next *= s;
      even_sum *= s;
      out *= s;
    }
  }
  const Scalar norm = cur + Scalar(2) * even_sum;
  if (!(abs(norm) > 0) || !std::isfinite(static_cast<double>(norm)))
    throw NumericalError("bessel_j_sequence: normalization failed at x = " +
                         std::to_string(static_cast<double>(x)));
  out /= norm;
  return out;
}

// J_order(arg) on the validated domain order 0..60, arg in [0, 25].
template <typename Scalar = double>
Scalar bessel_j(int order, Scalar arg) {
  if (order < 0 || order > kBesselMaxOrder || !(arg >= 0) || arg > Scalar(kBesselMaxArg))
    throw DomainError("bessel_j: order " + std::to_string(order) + ", argument " +
                      std::to_string(static_cast<double>(arg)) + " outside [0,60] x [0,25]");
  return bessel_j_sequence<Scalar>(order, arg)(order);
}

}  // namespace mirage
