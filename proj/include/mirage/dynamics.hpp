#pragma once

// Stochastic walker map on the two-mode corral wavefield.
//
// Each iteration draws p ~ U[0, 1/2] and forms
//
//   Psi = p * alpha * Psi_a + (1/2 - p) * beta * Psi_b
//
// then updates the wave amplitude and the position:
//
//   w'   = mu * (w + Psi(x, y))
//   x'   = x - C w' Psi_y(x, y),   y' = y + C w' Psi_x(x, y)   (perpendicular)
//   x'   = x - C w' Psi_x(x, y),   y' = y - C w' Psi_y(x, y)   (anti-gradient)
//
// with the gradient taken by centred differences. A walker that leaves the
// corral ends its run and a new run starts at a uniform random point.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mirage/geometry.hpp"
#include "mirage/grid.hpp"
#include "mirage/modes.hpp"
#include "mirage/random.hpp"

namespace mirage {

enum class Propulsion { perpendicular, anti_gradient };

std::string to_string(Propulsion p);
Propulsion propulsion_from_string(const std::string& s);

struct SimParams {
  double C = 6.0;
  double mu = 0.99;
  double alpha = 0.5;
  double beta = 0.5;
  double h = 1e-2;  // mm
  double k = 1e-2;  // mm
  long max_total_iters = 100000;
  int max_runs = 100;
  Propulsion propulsion = Propulsion::perpendicular;
  std::uint64_t seed = 42;
  double w0 = 0.0;
  bool use_cache = true;

  void validate() const;
  EvalPath eval_path() const { return use_cache ? EvalPath::cached : EvalPath::direct; }
};

// alpha weights alpha_mode (Psi_{1,5}), beta weights beta_mode (Psi_{4,4}).
struct ModePair {
  Eigenmode alpha_mode;
  Eigenmode beta_mode;
};

struct WalkerState {
  Point pos = Point::Zero();
  double w = 0;
  long iter = 0;  // iterations since the start of this run
  int run_id = 0;
  // p drawn by the step that produced this state; NaN for a run's start.
  double p = std::numeric_limits<double>::quiet_NaN();
};

struct StepResult {
  WalkerState next;
  double psi = 0;                          // Psi(pos) for the drawn p
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  Eigen::Vector2d displacement = Eigen::Vector2d::Zero();  // applied to pos
};

struct Trajectory {
  std::vector<WalkerState> states;
  // Index into states of the first state of every restarted run (run 0 excluded).
  std::vector<std::size_t> run_boundaries;
  int escape_count = 0;
};

double wavefield(const ModePair& modes, double p, const SimParams& params, const Point& pos,
                 EvalPath path = EvalPath::direct);

// Centred-difference gradient of the combined field for a fixed p.
Eigen::Vector2d wavefield_gradient(const ModePair& modes, double p, const SimParams& params,
                                   const Point& pos, EvalPath path = EvalPath::direct);

// One map iteration with an explicit p.
StepResult step_with(const WalkerState& state, const ModePair& modes, const SimParams& params, double p);

// One map iteration; consumes exactly one draw from rng.
StepResult step_detail(const WalkerState& state, const ModePair& modes, const SimParams& params, Rng& rng);

inline WalkerState step(const WalkerState& state, const ModePair& modes, const SimParams& params, Rng& rng) {
  return step_detail(state, modes, params, rng).next;
}

// Called for every step, including the one that escapes (escaped == true).
using StepObserver = std::function<void(const WalkerState& from, const StepResult& result, bool escaped)>;

Trajectory run(const ModePair& modes, const SimParams& params, const EllipseGeometry<double>& g,
               const StepObserver& observer = {});

// Start point of run `run_id`, drawn from its own substream.
Point restart_point(const EllipseGeometry<double>& g, std::uint64_t seed, int run_id);

// w_next * Psi(., .; p) at bin centres inside the ellipse.
HistogramGrid instantaneous_field(double w_next, const ModePair& modes, const SimParams& params, double p,
                                  int resolution);

// Mean |displacement| per retained step of a trajectory.
double mean_step_length(const Trajectory& traj);

struct CalibrationOptions {
  double target_step = 0.12;  // mm
  long pilot_iters = 10000;
  int pilots = 4;             // pilot runs with seeds seed, seed+1, ...
  double c_min = 0.25;
  double c_max = 500.0;
  double rel_tol = 1e-2;
};

struct Calibration {
  double C = 0;
  double mean_step = 0;  // pilot average at C
  int evaluations = 0;
};

// Average mean step length over the pilot runs at coupling C.
double pilot_mean_step(const ModePair& modes, SimParams params, const EllipseGeometry<double>& g,
                       const CalibrationOptions& options);

// Smallest C on a geometric scan whose pilot mean step reaches the target,
// refined by bisection in log C. Mean step is not monotone in C (walkers
// stall in low-field regions), so the first crossing is taken.
Calibration calibrate_coupling(const ModePair& modes, const SimParams& params, const EllipseGeometry<double>& g,
                               const CalibrationOptions& options = {});

}  // namespace mirage
