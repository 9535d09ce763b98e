#pragma once

// Workflows behind the command-line tool. Each writes into
// <out>/<command>/... and leaves a metadata.json in every directory it
// creates: the effective configuration, seed, generator, coupling C, mode q
// values and tool version.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "mirage/config.hpp"

namespace mirage {

const char* version();

// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::pair<double, double>> weights;
  std::optional<std::string> propulsion;
  std::optional<int> bins;
  std::optional<long> mc;
  std::optional<int> grid;
  std::optional<std::string> out;
};

void apply(RunConfig& cfg, const Overrides& o);

// Weight presets a command acts on: the --weights pair if given, else the
// configured presets.
std::vector<WeightPreset> selected_presets(const RunConfig& cfg, const Overrides& o);

ModePair build_modes(const RunConfig& cfg);

void cmd_modes(const RunConfig& cfg, std::ostream& log);
void cmd_simulate(const RunConfig& cfg, const std::vector<WeightPreset>& presets, std::ostream& log);
void cmd_avgfield(const RunConfig& cfg, const std::vector<WeightPreset>& presets, std::ostream& log);

// Renders a grid CSV to PGM; output defaults to the input with .pgm.
std::filesystem::path cmd_render(const std::filesystem::path& csv, std::optional<std::filesystem::path> out,
                                 double saturation, std::ostream& log);

// Calibrates C at the configured weights and returns the updated config.
RunConfig cmd_calibrate(const RunConfig& cfg, std::ostream& log);

}  // namespace mirage
