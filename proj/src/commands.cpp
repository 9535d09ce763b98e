#include "mirage/commands.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "mirage/errors.hpp"
#include "mirage/grid_io.hpp"
#include "mirage/random.hpp"
#include "mirage/stats.hpp"

#ifndef MIRAGE_VERSION
#define MIRAGE_VERSION "unknown"
#endif

namespace mirage {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* version() { return MIRAGE_VERSION; }

void apply(RunConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.sim.seed = *o.seed;
  if (o.weights) std::tie(cfg.sim.alpha, cfg.sim.beta) = *o.weights;
  if (o.propulsion) cfg.sim.propulsion = propulsion_from_string(*o.propulsion);
  if (o.bins) cfg.bins = *o.bins;
  if (o.mc) cfg.mc = *o.mc;
  if (o.grid) cfg.grid = *o.grid;
  if (o.out) cfg.out_dir = *o.out;
  cfg.validate();
}

std::vector<WeightPreset> selected_presets(const RunConfig& cfg, const Overrides& o) {
  if (!o.weights) return cfg.presets;
  char name[96];
  std::snprintf(name, sizeof name, "weights_%g_%g", o.weights->first, o.weights->second);
  return {{name, o.weights->first, o.weights->second}};
}

ModePair build_modes(const RunConfig& cfg) {
  cfg.validate();
  const auto g = cfg.geometry();
  const BuildOptions opt = cfg.build_options();
  return {build_mode(cfg.alpha_mode, g, opt), build_mode(cfg.beta_mode, g, opt)};
}

namespace {

ordered_json mode_summary(const Eigenmode& m) {
  return {{"label", m.spec.label()}, {"q", m.q}, {"wavenumber_squared", m.wavenumber_squared()}, {"norm", m.norm}};
}

ordered_json base_metadata(const char* command, const RunConfig& cfg, const ModePair* modes) {
  ordered_json j;
  j["command"] = command;
  j["version"] = version();
  j["generator"] = kGeneratorName;
  j["seed"] = cfg.sim.seed;
  j["C"] = cfg.sim.C;
  if (modes) j["modes"] = {mode_summary(modes->alpha_mode), mode_summary(modes->beta_mode)};
  j["config"] = to_json(cfg);
  return j;
}

void write_metadata(const fs::path& dir, const ordered_json& j) {
  fs::create_directories(dir);
  std::ofstream out(dir / "metadata.json", std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + (dir / "metadata.json").string());
}

void write_grid(const fs::path& dir, const std::string& stem, const HistogramGrid& grid, double saturation) {
  write_grid_csv(dir / (stem + ".csv"), grid);
  write_pgm(dir / (stem + ".pgm"), grid, saturation);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct PresetResult {
  std::string name;
  ordered_json summary;
  std::exception_ptr error;
};

PresetResult simulate_preset(const RunConfig& cfg, const ModePair& modes, const WeightPreset& preset) {
  PresetResult r{preset.name, {}, nullptr};
  try {
    RunConfig local = cfg;
    local.sim.alpha = preset.alpha;
    local.sim.beta = preset.beta;
    const auto g = local.geometry();
    const fs::path dir = fs::path(local.out_dir) / "simulate" / preset.name;
    fs::create_directories(dir);

    const Trajectory traj = run(modes, local.sim, g);
    const std::span<const Trajectory> one(&traj, 1);
    write_trajectory_csv(dir / "trajectory.csv", one);

    const HistogramGrid counts = position_histogram(one, g, local.bins, local.bins);
    const HistogramGrid disp = displacement_histogram(one, g, local.bins, local.bins);
    write_grid(dir, "positions", counts, local.saturation);
    write_grid(dir, "displacement", disp, local.saturation);

    const WalkerState& last = traj.states.back();
    const double p = std::isnan(last.p) ? 0.25 : last.p;
    write_grid(dir, "field_snapshot", instantaneous_field(last.w, modes, local.sim, p, local.grid), local.saturation);

    const auto od = occupancy_displacement_correlation(counts, disp, local.min_visits);
    r.summary = {{"preset", preset.name},
                 {"alpha", preset.alpha},
                 {"beta", preset.beta},
                 {"states", traj.states.size()},
                 {"runs", traj.run_boundaries.size() + 1},
                 {"escapes", traj.escape_count},
                 {"mean_step_mm", mean_step_length(traj)},
                 {"interior_occupancy", interior_occupancy(counts, g)},
                 {"occupancy_displacement_spearman", od.spearman},
                 {"spearman_bins", od.bins}};
    ordered_json meta = base_metadata("simulate", local, &modes);
    meta["result"] = r.summary;
    write_metadata(dir, meta);
  } catch (...) {
    r.error = std::current_exception();
  }
  return r;
}

}  // namespace

void cmd_modes(const RunConfig& cfg, std::ostream& log) {
  const ModePair modes = build_modes(cfg);
  const fs::path dir = fs::path(cfg.out_dir) / "modes";
  fs::create_directories(dir);
  for (const Eigenmode* m : {&modes.alpha_mode, &modes.beta_mode}) {
    write_grid(dir, m->spec.label(), mode_grid(*m, cfg.grid, cfg.grid), cfg.saturation);
    log << m->spec.label() << " q = " << fixed(m->q, 4) << " (" << format_number(m->q) << ")\n";
  }
  write_metadata(dir, base_metadata("modes", cfg, &modes));
}

void cmd_simulate(const RunConfig& cfg, const std::vector<WeightPreset>& presets, std::ostream& log) {
  const ModePair modes = build_modes(cfg);
  std::vector<PresetResult> results(presets.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < presets.size(); ++i)
    workers.emplace_back([&, i] { results[i] = simulate_preset(cfg, modes, presets[i]); });
  for (auto& w : workers) w.join();

  for (const auto& r : results) {
    if (r.error) std::rethrow_exception(r.error);
    const auto& s = r.summary;
    log << r.name << ": alpha=" << s["alpha"].get<double>() << " beta=" << s["beta"].get<double>()
        << " states=" << s["states"].get<std::size_t>() << " escapes=" << s["escapes"].get<int>()
        << " mean_step=" << fixed(s["mean_step_mm"].get<double>(), 4) << " mm"
        << " occupancy=" << fixed(s["interior_occupancy"].get<double>(), 3)
        << " spearman=" << fixed(s["occupancy_displacement_spearman"].get<double>(), 3) << '\n';
  }
}

void cmd_avgfield(const RunConfig& cfg, const std::vector<WeightPreset>& presets, std::ostream& log) {
  const ModePair modes = build_modes(cfg);
  for (const auto& preset : presets) {
    const fs::path dir = fs::path(cfg.out_dir) / "avgfield" / preset.name;
    fs::create_directories(dir);
    RunConfig local = cfg;
    local.sim.alpha = preset.alpha;
    local.sim.beta = preset.beta;

    const HistogramGrid analytic = averaged_field_analytic(modes, preset.alpha, preset.beta, cfg.grid, cfg.grid);
    write_grid(dir, "analytic", analytic, cfg.saturation);
    ordered_json meta = base_metadata("avgfield", local, &modes);
    log << preset.name << ": analytic field written";
    if (cfg.mc > 0) {
      const HistogramGrid mc =
          averaged_field_mc(modes, preset.alpha, preset.beta, cfg.mc, cfg.sim.seed, cfg.grid, cfg.grid);
      write_grid(dir, "mc", mc, cfg.saturation);
      const double dev = max_abs_difference(mc, analytic);
      meta["mc_draws"] = cfg.mc;
      meta["max_abs_deviation"] = dev;
      meta["rms_deviation"] = rms_difference(mc, analytic);
      log << ", mc N=" << cfg.mc << " max deviation " << format_number(dev);
    }
    log << '\n';
    write_metadata(dir, meta);
  }
}

fs::path cmd_render(const fs::path& csv, std::optional<fs::path> out, double saturation, std::ostream& log) {
  const HistogramGrid grid = read_grid_csv(csv);
  fs::path target = out ? *out : fs::path(csv).replace_extension(".pgm");
  const PixelRange r = write_pgm(target, grid, saturation);
  log << "wrote " << target.string() << " (" << to_string(grid.kind()) << ", range " << format_number(r.lo) << " .. "
      << format_number(r.hi) << ")\n";
  return target;
}

RunConfig cmd_calibrate(const RunConfig& cfg, std::ostream& log) {
  const ModePair modes = build_modes(cfg);
  const Calibration cal = calibrate_coupling(modes, cfg.sim, cfg.geometry(), cfg.calibration);
  RunConfig updated = cfg;
  updated.sim.C = cal.C;
  log << "C = " << format_number(cal.C) << " (mean step " << fixed(cal.mean_step, 4) << " mm over "
      << cfg.calibration.pilots << " pilots, " << cal.evaluations << " evaluations)\n";
  return updated;
}

}  // namespace mirage
