#include "mirage/config.hpp"

#include <fstream>
#include <set>

#include "mirage/errors.hpp"

namespace mirage {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Reads keys from one JSON object and reports any it did not consume.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& at(const char* key) const { return j_.at(key); }
  std::string path(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError(path_ + ": unknown key '" + k + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Parity parity_from_string(const std::string& s, const std::string& where) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  throw ConfigError(where + ": parity must be 'even' or 'odd', got '" + s + "'");
}

ModeSpec read_mode(const json& j, const std::string& where, ModeSpec spec) {
  Section s(j, where);
  std::string parity = to_string(spec.parity);
  s.read("order", spec.order);
  s.read("parity", parity);
  s.read("radial_index", spec.radial_index);
  s.finish();
  spec.parity = parity_from_string(parity, where + ".parity");
  return spec;
}

ordered_json mode_json(const ModeSpec& m) {
  return {{"order", m.order}, {"parity", to_string(m.parity)}, {"radial_index", m.radial_index}};
}

}  // namespace

BuildOptions RunConfig::build_options() const {
  BuildOptions opt;
  opt.search.terms = terms;
  opt.normalization_grid = normalization_grid;
  opt.cache_resolution = sim.use_cache ? cache_resolution : 0;
  return opt;
}

void RunConfig::validate() const {
  try {
    (void)geometry();
    alpha_mode.validate();
    beta_mode.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (terms < kDefaultTerms || terms > 400) throw ConfigError("modes.terms must lie in [50, 400]");
  if (normalization_grid < 16) throw ConfigError("modes.normalization_grid must be >= 16");
  if (sim.use_cache && cache_resolution < 16) throw ConfigError("modes.cache_resolution must be >= 16");
  sim.validate();
  if (!(calibration.target_step > 0) || calibration.pilot_iters < 2 || calibration.pilots < 1)
    throw ConfigError("calibration: target_step > 0, pilot_iters >= 2 and pilots >= 1 required");
  if (presets.empty()) throw ConfigError("presets: at least one preset required");
  for (const auto& p : presets) {
    if (p.name.empty()) throw ConfigError("presets: every preset needs a name");
    if (!(p.alpha >= 0) || !(p.beta >= 0)) throw ConfigError("presets." + p.name + ": weights must be >= 0");
  }
  if (bins < 1) throw ConfigError("stats.bins must be >= 1");
  if (!(saturation > 0)) throw ConfigError("stats.saturation must be > 0");
  if (!(min_visits >= 0)) throw ConfigError("stats.min_visits must be >= 0");
  if (grid < 2) throw ConfigError("output.grid must be >= 2");
  if (mc < 0) throw ConfigError("output.mc must be >= 0");
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["geometry"] = {{"a", c.a}, {"e", c.e}};
  j["modes"] = {{"alpha_mode", mode_json(c.alpha_mode)},
                {"beta_mode", mode_json(c.beta_mode)},
                {"terms", c.terms},
                {"normalization_grid", c.normalization_grid},
                {"cache_resolution", c.cache_resolution}};
  const SimParams& s = c.sim;
  j["simulation"] = {{"C", s.C},
                     {"mu", s.mu},
                     {"alpha", s.alpha},
                     {"beta", s.beta},
                     {"h", s.h},
                     {"k", s.k},
                     {"max_total_iters", s.max_total_iters},
                     {"max_runs", s.max_runs},
                     {"propulsion", to_string(s.propulsion)},
                     {"seed", s.seed},
                     {"w0", s.w0},
                     {"use_cache", s.use_cache}};
  j["calibration"] = {{"target_step", c.calibration.target_step},
                      {"pilot_iters", c.calibration.pilot_iters},
                      {"pilots", c.calibration.pilots}};
  j["presets"] = ordered_json::array();
  for (const auto& p : c.presets) j["presets"].push_back({{"name", p.name}, {"alpha", p.alpha}, {"beta", p.beta}});
  j["stats"] = {{"bins", c.bins}, {"saturation", c.saturation}, {"min_visits", c.min_visits}};
  j["output"] = {{"dir", c.out_dir}, {"grid", c.grid}, {"mc", c.mc}};
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Section root(j, "config");

  if (root.has("geometry")) {
    Section s(root.at("geometry"), "geometry");
    s.read("a", c.a);
    s.read("e", c.e);
    s.finish();
  }

  if (root.has("modes")) {
    Section s(root.at("modes"), "modes");
    if (s.has("alpha_mode")) c.alpha_mode = read_mode(s.at("alpha_mode"), s.path("alpha_mode"), c.alpha_mode);
    if (s.has("beta_mode")) c.beta_mode = read_mode(s.at("beta_mode"), s.path("beta_mode"), c.beta_mode);
    s.read("terms", c.terms);
    s.read("normalization_grid", c.normalization_grid);
    s.read("cache_resolution", c.cache_resolution);
    s.finish();
  }

  if (root.has("simulation")) {
    Section s(root.at("simulation"), "simulation");
    SimParams& p = c.sim;
    std::string propulsion = to_string(p.propulsion);
    s.read("C", p.C);
    s.read("mu", p.mu);
    s.read("alpha", p.alpha);
    s.read("beta", p.beta);
    s.read("h", p.h);
    s.read("k", p.k);
    s.read("max_total_iters", p.max_total_iters);
    s.read("max_runs", p.max_runs);
    s.read("propulsion", propulsion);
    s.read("seed", p.seed);
    s.read("w0", p.w0);
    s.read("use_cache", p.use_cache);
    s.finish();
    p.propulsion = propulsion_from_string(propulsion);
  }

  if (root.has("calibration")) {
    Section s(root.at("calibration"), "calibration");
    s.read("target_step", c.calibration.target_step);
    s.read("pilot_iters", c.calibration.pilot_iters);
    s.read("pilots", c.calibration.pilots);
    s.finish();
  }

  if (root.has("presets")) {
    const json& arr = root.at("presets");
    if (!arr.is_array()) throw ConfigError("presets: expected an array");
    c.presets.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Section s(arr[i], "presets[" + std::to_string(i) + "]");
      WeightPreset p;
      s.read("name", p.name);
      s.read("alpha", p.alpha);
      s.read("beta", p.beta);
      s.finish();
      c.presets.push_back(p);
    }
  }

  if (root.has("stats")) {
    Section s(root.at("stats"), "stats");
    s.read("bins", c.bins);
    s.read("saturation", c.saturation);
    s.read("min_visits", c.min_visits);
    s.finish();
  }

  if (root.has("output")) {
    Section s(root.at("output"), "output");
    s.read("dir", c.out_dir);
    s.read("grid", c.grid);
    s.read("mc", c.mc);
    s.finish();
  }

  root.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  return config_from_json(j);
}

void save_config(const std::filesystem::path& path, const RunConfig& cfg) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << to_json(cfg).dump(2) << '\n';
}

}  // namespace mirage
