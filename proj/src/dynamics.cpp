#include "mirage/dynamics.hpp"

#include <cmath>

#include "mirage/errors.hpp"

namespace mirage {

std::string to_string(Propulsion p) {
  return p == Propulsion::perpendicular ? "perpendicular" : "anti_gradient";
}

Propulsion propulsion_from_string(const std::string& s) {
  if (s == "perpendicular") return Propulsion::perpendicular;
  if (s == "anti_gradient") return Propulsion::anti_gradient;
  throw ConfigError("unknown propulsion mode '" + s + "' (expected perpendicular or anti_gradient)");
}

void SimParams::validate() const {
  if (!(mu > 0 && mu < 1)) throw ConfigError("mu must lie in (0, 1)");
  if (!(C > 0) || !std::isfinite(C)) throw ConfigError("C must be positive");
  if (!(alpha >= 0) || !(beta >= 0)) throw ConfigError("alpha and beta must be nonnegative");
  if (!(h > 0) || !(k > 0)) throw ConfigError("finite-difference steps h, k must be positive");
  if (max_total_iters < 1 || max_runs < 1) throw ConfigError("iteration and run budgets must be >= 1");
  if (!std::isfinite(w0)) throw ConfigError("w0 must be finite");
}

double wavefield(const ModePair& modes, double p, const SimParams& params, const Point& pos, EvalPath path) {
  return p * params.alpha * mode_value(modes.alpha_mode, pos, path) +
         (0.5 - p) * params.beta * mode_value(modes.beta_mode, pos, path);
}

Eigen::Vector2d wavefield_gradient(const ModePair& modes, double p, const SimParams& params, const Point& pos,
                                   EvalPath path) {
  const double h = params.h, k = params.k;
  const auto f = [&](double x, double y) { return wavefield(modes, p, params, Point(x, y), path); };
  return {(f(pos.x() + h, pos.y()) - f(pos.x() - h, pos.y())) / (2 * h),
          (f(pos.x(), pos.y() + k) - f(pos.x(), pos.y() - k)) / (2 * k)};
}

StepResult step_with(const WalkerState& state, const ModePair& modes, const SimParams& params, double p) {
  const EvalPath path = params.eval_path();
  StepResult r;
  r.psi = wavefield(modes, p, params, state.pos, path);
  r.gradient = wavefield_gradient(modes, p, params, state.pos, path);

  const double w_next = params.mu * (state.w + r.psi);
  const double s = params.C * w_next;
  if (params.propulsion == Propulsion::perpendicular)
    r.displacement = {-s * r.gradient.y(), s * r.gradient.x()};
  else
    r.displacement = {-s * r.gradient.x(), -s * r.gradient.y()};

  r.next.pos = state.pos + r.displacement;
  r.next.w = w_next;
  r.next.iter = state.iter + 1;
  r.next.run_id = state.run_id;
  r.next.p = p;
  return r;
}

StepResult step_detail(const WalkerState& state, const ModePair& modes, const SimParams& params, Rng& rng) {
  return step_with(state, modes, params, 0.5 * uniform01(rng));
}

Point restart_point(const EllipseGeometry<double>& g, std::uint64_t seed, int run_id) {
  Rng rng = substream(seed, static_cast<std::uint64_t>(run_id));
  return sample_interior(g, rng);
}

Trajectory run(const ModePair& modes, const SimParams& params, const EllipseGeometry<double>& g,
               const StepObserver& observer) {
  params.validate();
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(params.max_total_iters));

  Rng rng(params.seed);
  const auto start = [&](int run_id) {
    WalkerState s;
    s.pos = restart_point(g, params.seed, run_id);
    s.w = params.w0;
    s.run_id = run_id;
    return s;
  };

  WalkerState state = start(0);
  traj.states.push_back(state);
  long stepped = 0;
  while (static_cast<long>(traj.states.size()) < params.max_total_iters) {
    const StepResult r = step_detail(state, modes, params, rng);
    const bool escaped = !contains(g, r.next.pos);
    if (observer) observer(state, r, escaped);
    if (!escaped) {
      state = r.next;
      traj.states.push_back(state);
      ++stepped;
      continue;
    }
    ++traj.escape_count;
    if (state.run_id + 1 >= params.max_runs) break;
    state = start(state.run_id + 1);
    traj.run_boundaries.push_back(traj.states.size());
    traj.states.push_back(state);
  }
  if (stepped == 0 && params.max_total_iters > 1)
    throw NumericalError("run: no in-bounds step retained after " + std::to_string(traj.escape_count) +
                         " escapes; every run left the corral on its first step (C = " +
                         std::to_string(params.C) + ")");
  return traj;
}

HistogramGrid instantaneous_field(double w_next, const ModePair& modes, const SimParams& params, double p,
                                  int resolution) {
  return sample_field(modes.alpha_mode.geometry, resolution, resolution,
                      [&](const Point& c) { return w_next * wavefield(modes, p, params, c); });
}

double mean_step_length(const Trajectory& traj) {
  double total = 0;
  long n = 0;
  std::size_t next_boundary = 0;
  for (std::size_t i = 0; i + 1 < traj.states.size(); ++i) {
    while (next_boundary < traj.run_boundaries.size() && traj.run_boundaries[next_boundary] <= i)
      ++next_boundary;
    if (next_boundary < traj.run_boundaries.size() && traj.run_boundaries[next_boundary] == i + 1) continue;
    total += (traj.states[i + 1].pos - traj.states[i].pos).norm();
    ++n;
  }
  return n > 0 ? total / n : 0.0;
}

double pilot_mean_step(const ModePair& modes, SimParams params, const EllipseGeometry<double>& g,
                       const CalibrationOptions& options) {
  params.max_total_iters = options.pilot_iters;
  const std::uint64_t base = params.seed;
  double total = 0;
  for (int i = 0; i < options.pilots; ++i) {
    params.seed = base + static_cast<std::uint64_t>(i);
    total += mean_step_length(run(modes, params, g));
  }
  return total / options.pilots;
}

Calibration calibrate_coupling(const ModePair& modes, const SimParams& params, const EllipseGeometry<double>& g,
                               const CalibrationOptions& options) {
  if (!(options.target_step > 0)) throw DomainError("calibrate_coupling: target step must be positive");
  if (options.pilots < 1 || options.pilot_iters < 2) throw DomainError("calibrate_coupling: empty pilot budget");
  Calibration cal;
  SimParams p = params;
  const auto eval = [&](double c) {
    p.C = c;
    ++cal.evaluations;
    return pilot_mean_step(modes, p, g, options);
  };

  double lo = 0;
  double hi = options.c_min, hi_step = eval(hi);
  while (hi_step < options.target_step) {
    if (hi >= options.c_max)
      throw NumericalError("calibrate_coupling: mean step stays below " + std::to_string(options.target_step) +
                           " mm for C up to " + std::to_string(options.c_max));
    lo = hi;
    hi = std::min(hi * 1.25, options.c_max);
    hi_step = eval(hi);
  }
  if (lo == 0) return {hi, hi_step, cal.evaluations};

  for (int it = 0; it < 40; ++it) {
    if (std::abs(hi_step / options.target_step - 1) <= options.rel_tol || hi / lo < 1 + 1e-4) break;
    const double mid = std::sqrt(lo * hi);
    const double s = eval(mid);
    if (s >= options.target_step) {
      hi = mid;
      hi_step = s;
    } else {
      lo = mid;
    }
  }
  cal.C = hi;
  cal.mean_step = hi_step;
  return cal;
}

}  // namespace mirage
