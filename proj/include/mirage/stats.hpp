#pragma once

// Long-time statistics of walker trajectories and averaged wavefields.

#include <cstdint>
#include <span>
#include <vector>

#include "mirage/dynamics.hpp"
#include "mirage/grid.hpp"

namespace mirage {

inline constexpr int kDefaultBins = 90;

// Occupancy counts of every recorded state.
HistogramGrid position_histogram(std::span<const Trajectory> trajs, const EllipseGeometry<double>& g,
                                 int nx = kDefaultBins, int ny = kDefaultBins);

// Per-bin mean of |pos_{n+1} - pos_n|, binned by the step's starting state.
// Steps across run boundaries are skipped. Unvisited bins stay empty (NaN).
HistogramGrid displacement_histogram(std::span<const Trajectory> trajs, const EllipseGeometry<double>& g,
                                     int nx = kDefaultBins, int ny = kDefaultBins);

// Elementwise merge of partial grids of the same shape: counts add, mean
// displacements combine weighted by their visit counts.
HistogramGrid merge(const HistogramGrid& lhs, const HistogramGrid& rhs);

// E_p[Psi] = alpha/4 Psi_a + beta/4 Psi_b, scaled to max |value| = 1.
HistogramGrid averaged_field_analytic(const ModePair& modes, double alpha, double beta, int nx, int ny);

// Average of the sampled fields p_i alpha Psi_a + (1/2 - p_i) beta Psi_b over
// the given draws, scaled to max |value| = 1.
HistogramGrid averaged_field_from_draws(const ModePair& modes, double alpha, double beta,
                                        std::span<const double> draws, int nx, int ny);

// Same with N draws p ~ U[0, 1/2] from a generator seeded with seed.
HistogramGrid averaged_field_mc(const ModePair& modes, double alpha, double beta, long draws,
                                std::uint64_t seed, int nx, int ny);

// Largest nodewise |lhs - rhs| over bins non-empty in both.
double max_abs_difference(const HistogramGrid& lhs, const HistogramGrid& rhs);
double rms_difference(const HistogramGrid& lhs, const HistogramGrid& rhs);

// Pearson correlation over bins non-empty in both.
double grid_correlation(const HistogramGrid& lhs, const HistogramGrid& rhs);

// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

// Fraction of bins whose centre lies in the ellipse that have nonzero count.
double interior_occupancy(const HistogramGrid& counts, const EllipseGeometry<double>& g);

struct OccupancyDisplacement {
  double spearman = 0;
  int bins = 0;  // bins entering the correlation
};

// Rank correlation between occupancy and mean displacement over bins with at
// least min_visits visits.
OccupancyDisplacement occupancy_displacement_correlation(const HistogramGrid& counts,
                                                         const HistogramGrid& displacement,
                                                         double min_visits = 20);

}  // namespace mirage
