#pragma once

// Angular and radial Mathieu functions of the first kind.
//
// The angular function is a Fourier series whose coefficients form an
// eigenvector of a symmetric tridiagonal matrix, one matrix per
// parity/order class:
//
//   ce_{2r}   : cos(2k eta),      first off-diagonal pair scaled by sqrt(2)
//   ce_{2r+1} : cos((2k+1) eta),  top-left entry 1 + q
//   se_{2r+1} : sin((2k+1) eta),  top-left entry 1 - q
//   se_{2r+2} : sin((2k+2) eta)
//
// The radial function reuses the same coefficients in the Bessel-product
// series with arguments sqrt(q) e^{-xi} and sqrt(q) e^{xi}.

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "mirage/bessel.hpp"
#include "mirage/errors.hpp"

namespace mirage {

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

// (n, parity, j): order n of ce_n / se_n and the j-th Dirichlet root.
struct ModeSpec {
  int order = 0;
  Parity parity = Parity::even;
  int radial_index = 1;

  void validate() const {
    if (order < 0) throw DomainError("mode order must be >= 0");
    if (parity == Parity::odd && order < 1) throw DomainError("odd modes require order >= 1");
    if (radial_index < 1) throw DomainError("radial index j must be >= 1");
  }

  std::string label() const {
    return std::string(to_string(parity)) + "_" + std::to_string(order) + "_" +
           std::to_string(radial_index);
  }

  friend bool operator==(const ModeSpec&, const ModeSpec&) = default;
};

inline constexpr int kDefaultTerms = 50;

// Harmonic index of the r-th Fourier term for the class of (order, parity).
inline int mathieu_harmonic(int order, Parity parity, int r) {
  if (parity == Parity::even) return order % 2 == 0 ? 2 * r : 2 * r + 1;
  return order % 2 == 1 ? 2 * r + 1 : 2 * r + 2;
}

// Position of the requested function among the ascending eigenvalues of its class.
inline int mathieu_rank(int order, Parity parity) {
  if (parity == Parity::even) return order / 2;
  return order % 2 == 1 ? (order - 1) / 2 : order / 2 - 1;
}

template <typename Scalar>
struct AngularSolution {
  Scalar q{};
  Scalar char_value{};
  // Unit-norm eigenvector of the symmetric class matrix.
  ArrayX<Scalar> eigenvector;
  // Fourier coefficients of the series. Equal to the eigenvector except the
  // constant term of ce_{2r}, which is eigenvector(0) / sqrt(2). With this
  // scaling the integral of y^2 over [-pi, pi] is exactly pi.
  ArrayX<Scalar> coeffs;
  Parity parity = Parity::even;
  int order = 0;

  int terms() const { return static_cast<int>(coeffs.size()); }
  int harmonic(int r) const { return mathieu_harmonic(order, parity, r); }
};

template <typename Scalar>
struct TridiagonalMatrix {
  ArrayX<Scalar> diag;
  ArrayX<Scalar> offdiag;  // size - 1 entries
};

template <typename Scalar>
TridiagonalMatrix<Scalar> mathieu_matrix(int order, Parity parity, Scalar q, int size) {
  TridiagonalMatrix<Scalar> t{ArrayX<Scalar>(size), ArrayX<Scalar>::Constant(size - 1, q)};
  for (int r = 0; r < size; ++r) {
    const Scalar m = mathieu_harmonic(order, parity, r);
    t.diag(r) = m * m;
  }
  if (parity == Parity::even && order % 2 == 0) {
    t.offdiag(0) = std::numbers::sqrt2_v<Scalar> * q;
  } else if (order % 2 == 1) {
    t.diag(0) += parity == Parity::even ? q : -q;
  }
  return t;
}

template <typename Scalar>
AngularSolution<Scalar> angular_solve(const ModeSpec& spec, Scalar q, int terms = kDefaultTerms) {
  using std::abs, std::isfinite;
  spec.validate();
  if (!(q > 0) || q > Scalar(50))
    throw DomainError("angular_solve: q must lie in (0, 50], got " + std::to_string(static_cast<double>(q)));
  const int rank = mathieu_rank(spec.order, spec.parity);
  if (terms < kDefaultTerms || terms <= rank)
    throw DomainError("angular_solve: truncation must be at least 50 terms");

  const auto t = mathieu_matrix(spec.order, spec.parity, q, terms);
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(t.diag.matrix(), t.offdiag.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "angular_solve: tridiagonal eigensolver failed (class " << to_string(spec.parity)
        << " order " << spec.order << ", q = " << static_cast<double>(q) << ", size " << terms
        << ", diag[0..2] = " << static_cast<double>(t.diag(0)) << ' '
        << static_cast<double>(t.diag(1)) << ' ' << static_cast<double>(t.diag(2)) << ')';
    throw NumericalError(msg.str());
  }

  AngularSolution<Scalar> sol;
  sol.q = q;
  sol.parity = spec.parity;
  sol.order = spec.order;
  sol.char_value = solver.eigenvalues()(rank);
  sol.eigenvector = solver.eigenvectors().col(rank).array();

  // Sign convention: ce_n(0) > 0, se_n'(0) > 0. Neither can vanish for a
  // nontrivial solution, so the choice is continuous in q.
  Scalar orient = 0;
  for (int r = 0; r < terms; ++r) {
    const Scalar c = (r == 0 && spec.parity == Parity::even && spec.order % 2 == 0)
                         ? sol.eigenvector(0) / std::numbers::sqrt2_v<Scalar>
                         : sol.eigenvector(r);
    orient += spec.parity == Parity::even ? c : c * Scalar(mathieu_harmonic(spec.order, spec.parity, r));
  }
  if (orient < 0) sol.eigenvector = -sol.eigenvector;

  sol.coeffs = sol.eigenvector;
  if (spec.parity == Parity::even && spec.order % 2 == 0) sol.coeffs(0) /= std::numbers::sqrt2_v<Scalar>;
  if (!sol.coeffs.allFinite()) throw NumericalError("angular_solve: non-finite coefficients");
  return sol;
}

// ce_n(eta, q) or se_n(eta, q).
template <typename Scalar>
Scalar angular_eval(const AngularSolution<Scalar>& sol, Scalar eta) {
  using std::cos, std::sin;
  Scalar sum = 0;
  for (int r = sol.terms() - 1; r >= 0; --r) {
    const Scalar arg = Scalar(sol.harmonic(r)) * eta;
    sum += sol.coeffs(r) * (sol.parity == Parity::even ? cos(arg) : sin(arg));
  }
  return sum;
}

// Mc_n^(1)(xi, q) or Ms_n^(1)(xi, q) from the Bessel-product series,
// normalized by the lowest Fourier coefficient. Uses every coefficient of
// the angular solution unless terms is given (terms <= sol.terms()).
template <typename Scalar>
Scalar radial_eval(const AngularSolution<Scalar>& sol, Scalar xi, int terms = -1) {
  using std::exp, std::sqrt;
  if (terms < 0) terms = sol.terms();
  if (terms < 1 || terms > sol.terms()) throw DomainError("radial_eval: invalid term count");
  if (!(xi >= 0)) throw DomainError("radial_eval: xi must be >= 0");

  const Scalar root_q = sqrt(sol.q);
  const Scalar v_small = root_q * exp(-xi);
  const Scalar v_large = root_q * exp(xi);
  // Index offset between the paired Bessel orders.
  const int shift = (sol.parity == Parity::even && sol.order % 2 == 0) ? 0
                    : (sol.parity == Parity::odd && sol.order % 2 == 0) ? 2
                                                                        : 1;
  const auto j_small = bessel_j_sequence<Scalar>(terms - 1 + shift, v_small);
  const auto j_large = bessel_j_sequence<Scalar>(terms - 1 + shift, v_large);

  Scalar sum = 0;
  for (int l = terms - 1; l >= 0; --l) {
    Scalar pair;
    if (shift == 0) {
      pair = j_small(l) * j_large(l);
    } else if (sol.parity == Parity::even) {
      pair = j_small(l) * j_large(l + shift) + j_small(l + shift) * j_large(l);
    } else {
      pair = j_small(l) * j_large(l + shift) - j_small(l + shift) * j_large(l);
    }
    sum += (l % 2 == 0 ? sol.coeffs(l) : -sol.coeffs(l)) * pair;
  }
  const int rank = mathieu_rank(sol.order, sol.parity);
  const Scalar sign = rank % 2 == 0 ? Scalar(1) : Scalar(-1);
  return sign * sum / sol.coeffs(0);
}

}  // namespace mirage
