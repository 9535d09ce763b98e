// mirage: modes | simulate | avgfield | render | calibrate

#include <iostream>

#include <CLI11.hpp>

#include "mirage/commands.hpp"
#include "mirage/errors.hpp"

using namespace mirage;

int main(int argc, char** argv) {
  CLI::App app{"Stochastic walker in an elliptical corral"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  std::string config_path;
  Overrides o;
  std::vector<double> weights;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { o.seed = v; }, "RNG seed");
    sub->add_option("--weights", weights, "alpha beta mode weights")->expected(2);
    sub->add_option_function<std::string>(
        "--propulsion", [&](const std::string& v) { o.propulsion = v; }, "perpendicular or anti_gradient");
    sub->add_option_function<int>("--bins", [&](const int& v) { o.bins = v; }, "histogram bins per axis");
    sub->add_option_function<long>("--mc", [&](const long& v) { o.mc = v; }, "Monte Carlo draws for avgfield");
    sub->add_option_function<int>("--grid", [&](const int& v) { o.grid = v; }, "field grid size per axis");
    sub->add_option_function<std::string>("--out", [&](const std::string& v) { o.out = v; }, "output directory");
  };

  auto* modes = app.add_subcommand("modes", "solve for both corral modes, write grids and q values");
  auto* simulate = app.add_subcommand("simulate", "run trajectories and write histograms");
  auto* avgfield = app.add_subcommand("avgfield", "time-averaged wavefields, analytic and Monte Carlo");
  auto* calibrate = app.add_subcommand("calibrate", "fit C to the configured mean step length");
  for (auto* sub : {modes, simulate, avgfield, calibrate}) add_common(sub);

  std::string write_config;
  calibrate->add_option("--write-config", write_config, "save the calibrated configuration here");

  auto* render = app.add_subcommand("render", "render a grid CSV to PGM");
  std::string render_in, render_out;
  render->add_option("csv", render_in, "grid CSV written by this tool")->required()->check(CLI::ExistingFile);
  render->add_option("-o,--output", render_out, "output image (default: input with .pgm)");
  render->add_option("--config", config_path, "JSON configuration file (stats.saturation)")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!weights.empty()) o.weights = std::pair{weights[0], weights[1]};
    apply(cfg, o);
    const auto presets = selected_presets(cfg, o);

    if (*modes) {
      cmd_modes(cfg, std::cout);
    } else if (*simulate) {
      cmd_simulate(cfg, presets, std::cout);
    } else if (*avgfield) {
      cmd_avgfield(cfg, presets, std::cout);
    } else if (*calibrate) {
      const RunConfig updated = cmd_calibrate(cfg, std::cout);
      if (!write_config.empty()) save_config(write_config, updated);
    } else if (*render) {
      std::optional<std::filesystem::path> out;
      if (!render_out.empty()) out = render_out;
      cmd_render(render_in, out, cfg.saturation, std::cout);
    }
  } catch (const ParseError& e) {
    std::cerr << "mirage: parse error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "mirage: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mirage: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
