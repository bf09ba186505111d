#include "dlr/runner.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dlr/errors.hpp"
#include "dlr/experiments.hpp"
#include "dlr/sampling.hpp"
#include "dlr/spectral.hpp"
#include "dlr/version.hpp"

namespace dlr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

// Removes a '#' comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

const std::vector<std::string> kCommon = {"delta_ez", "ez", "dt_sim", "sample_rule", "calibration"};
const std::vector<std::string> kGateAxis = {"t_gates", "t_gate_min", "t_gate_max", "t_gate_step"};
const std::vector<std::string> kShapeParams = {"t_d", "beta", "kaiser_beta"};
const std::vector<std::string> kSampling = {"f_samp", "fine_dt", "sample_point", "recalibrate"};

const std::map<std::string, std::vector<std::vector<std::string>>> kExperimentKeys = {
    {"gate_time", {kCommon, kGateAxis, kShapeParams, kSampling, {"shapes", "amplitude_mode"}}},
    {"td", {kCommon, kGateAxis, {"windows", "kaiser_beta", "t_ds", "t_d_min", "t_d_max", "t_d_step"}}},
    {"dez_fsamp",
     {kCommon,
      {"window", "kaiser_beta", "t_gate", "delta_ezs", "delta_ez_min", "delta_ez_max", "delta_ez_step",
       "f_samps", "f_samp_min", "f_samp_max", "f_samp_step", "fine_dt", "sample_point", "recalibrate",
       "clip"}}},
    {"error_model", {kCommon, kGateAxis, kShapeParams, {"shape"}}},
    {"dlr_comparison",
     {kCommon, kGateAxis, kShapeParams,
      {"shapes", "amplitude_mode", "windows", "t_ds", "t_d_min", "t_d_max", "t_d_step",
       "spectrum_shapes", "spectrum_t_gate", "freqs", "f_min", "f_max", "f_step"}}},
    {"calibration_compare", {kCommon, kGateAxis, kShapeParams, {"shape"}}},
    {"spectrum",
     {kCommon, kShapeParams,
      {"shapes", "t_gate", "freqs", "f_min", "f_max", "f_step", "f_samp", "alias_terms",
       "bw_threshold_db"}}},
};

// Typed access to the parameter map.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& m) : m_(m) {}

  bool has(const std::string& key) const { return m_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = m_.find(key);
    return it == m_.end() ? fallback : unquote(it->second);
  }

  double num(const std::string& key, double fallback) const {
    const auto it = m_.find(key);
    return it == m_.end() ? fallback : to_double(key, unquote(it->second));
  }

  double required(const std::string& key) const {
    if (!has(key)) throw ConfigError("missing key '" + key + "'");
    return num(key, 0.0);
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto it = m_.find(key);
    if (it == m_.end()) return fallback;
    const std::string v = unquote(it->second);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("key '" + key + "' expects true or false");
  }

  std::vector<std::string> list(const std::string& key) const {
    const auto it = m_.find(key);
    if (it == m_.end()) throw ConfigError("missing key '" + key + "'");
    std::string v = trim(it->second);
    if (!v.empty() && v.front() == '[') {
      if (v.back() != ']') throw ConfigError("unterminated list for key '" + key + "'");
      v = v.substr(1, v.size() - 2);
    }
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = unquote(item);
      if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw ConfigError("key '" + key + "' needs at least one value");
    return out;
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : list(key)) out.push_back(to_double(key, item));
    return out;
  }

  // Either an explicit list `<plural>` or `<prefix>_min/_max/_step`.
  std::vector<double> axis(const std::string& plural, const std::string& prefix) const {
    if (has(plural)) return numbers(plural);
    const double lo = required(prefix + "_min");
    const double hi = required(prefix + "_max");
    const double step = required(prefix + "_step");
    try {
      return arange(lo, hi, step);
    } catch (const InvalidParameter&) {
      throw ConfigError("invalid range for '" + prefix + "'");
    }
  }

 private:
  static double to_double(const std::string& key, const std::string& text) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "' expects a number, got '" + text + "'");
    }
  }

  const std::map<std::string, std::string>& m_;
};

SimulationOptions simulation_options(const Params& p) {
  SimulationOptions opt;
  opt.system.delta_ez = p.num("delta_ez", 0.1);
  opt.system.ez = p.num("ez", 0.0);
  opt.system.dt_sim = p.num("dt_sim", kDefaultDt);
  const std::string rule = p.str("sample_rule", "midpoint");
  if (rule == "midpoint") {
    opt.rule = SampleRule::Midpoint;
  } else if (rule == "left") {
    opt.rule = SampleRule::LeftEndpoint;
  } else if (rule == "right") {
    opt.rule = SampleRule::RightEndpoint;
  } else {
    throw ConfigError("sample_rule must be midpoint, left or right");
  }
  const std::string cal = p.str("calibration", "operator");
  if (cal == "operator") {
    opt.calibration = PhaseCalibration::Operator;
  } else if (cal == "first-order") {
    opt.calibration = PhaseCalibration::FirstOrder;
  } else {
    throw ConfigError("calibration must be operator or first-order");
  }
  return opt;
}

SamplingConfig sampling_config(const Params& p, double f_samp) {
  SamplingConfig cfg;
  cfg.f_samp = f_samp;
  cfg.fine_dt = p.num("fine_dt", kDefaultDt);
  const std::string point = p.str("sample_point", "left");
  if (point == "left") {
    cfg.point = SamplePoint::LeftEdge;
  } else if (point == "midpoint") {
    cfg.point = SamplePoint::Midpoint;
  } else {
    throw ConfigError("sample_point must be left or midpoint");
  }
  cfg.recalibrate = p.flag("recalibrate", false);
  return cfg;
}

ShapeTemplate shape_from(const Params& p, const std::string& token, double delta_ez) {
  try {
    return parse_shape(token, delta_ez, p.num("t_d", 5.0), p.num("beta", 0.0),
                       p.num("kaiser_beta", 6.14));
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
}

std::vector<ShapeTemplate> shapes_from(const Params& p, double delta_ez) {
  std::vector<ShapeTemplate> out;
  for (const auto& token : p.list("shapes")) out.push_back(shape_from(p, token, delta_ez));
  return out;
}

AmplitudeMode amplitude_mode(const Params& p) {
  const std::string mode = p.str("amplitude_mode", "pi");
  if (mode == "pi") return AmplitudeMode::PiCalibrated;
  if (mode == "max-fidelity") return AmplitudeMode::MaxFidelity;
  throw ConfigError("amplitude_mode must be pi or max-fidelity");
}

std::vector<WindowKind> windows_from(const Params& p) {
  std::vector<WindowKind> out;
  for (const auto& w : p.list("windows")) {
    try {
      out.push_back(parse_window(w, p.num("kaiser_beta", 6.14)));
    } catch (const InvalidParameter& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

std::filesystem::path write_table(const SweepResult& r, const std::filesystem::path& dir,
                                  const std::string& stem) {
  const auto path = dir / (stem + ".csv");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  write_csv(os, r);
  return path;
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [name, keys] : kExperimentKeys) out.push_back(name);
  return out;
}

std::vector<std::string> allowed_keys(const std::string& experiment) {
  const auto it = kExperimentKeys.find(experiment);
  if (it == kExperimentKeys.end()) throw ConfigError("unknown experiment '" + experiment + "'");
  std::set<std::string> keys;
  for (const auto& group : it->second) keys.insert(group.begin(), group.end());
  return {keys.begin(), keys.end()};
}

RunConfig parse_config(std::istream& in, const std::string& default_name) {
  RunConfig cfg;
  cfg.name = default_name;
  std::map<std::string, std::string> raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!raw.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
  }
  const auto exp = raw.find("experiment");
  if (exp == raw.end()) throw ConfigError("missing key 'experiment'");
  cfg.experiment = unquote(exp->second);
  raw.erase(exp);
  if (const auto it = raw.find("name"); it != raw.end()) {
    cfg.name = unquote(it->second);
    raw.erase(it);
  }
  if (const auto it = raw.find("output_dir"); it != raw.end()) {
    cfg.output_dir = unquote(it->second);
    raw.erase(it);
  }
  const auto keys = allowed_keys(cfg.experiment);
  for (const auto& [key, value] : raw) {
    if (!std::binary_search(keys.begin(), keys.end(), key)) {
      throw ConfigError("unknown key '" + key + "' for experiment '" + cfg.experiment + "'");
    }
  }
  cfg.params = std::move(raw);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  return parse_config(in, path.stem().string());
}

std::vector<std::filesystem::path> run_experiment(const RunConfig& cfg) {
  const Params p(cfg.params);
  const SimulationOptions opt = simulation_options(p);
  std::vector<SweepResult> tables;  // first is the main table
  std::vector<std::string> suffixes;
  nlohmann::json extra = nlohmann::json::object();

  if (cfg.experiment == "gate_time") {
    SimulationOptions local = opt;
    if (p.has("f_samp")) local.sampling = sampling_config(p, p.num("f_samp", 0.0));
    tables.push_back(sweep_gate_time(shapes_from(p, opt.system.delta_ez),
                                     p.axis("t_gates", "t_gate"), local, amplitude_mode(p)));
    suffixes.push_back("");
  } else if (cfg.experiment == "td") {
    auto out = sweep_td(windows_from(p), p.axis("t_gates", "t_gate"), p.axis("t_ds", "t_d"), opt);
    tables.push_back(std::move(out.grid));
    tables.push_back(std::move(out.best));
    suffixes = {"", "_argmin"};
  } else if (cfg.experiment == "dlr_comparison") {
    // Gate-time comparison of the shapes, their spectra at one duration and
    // the DLR-static t_d landscape per window.
    const auto t_gates = p.axis("t_gates", "t_gate");
    tables.push_back(sweep_gate_time(shapes_from(p, opt.system.delta_ez), t_gates, opt,
                                     amplitude_mode(p)));
    std::vector<ShapeTemplate> spectrum_shapes;
    for (const auto& token : p.list("spectrum_shapes")) {
      spectrum_shapes.push_back(shape_from(p, token, opt.system.delta_ez));
    }
    SpectrumOptions so;
    so.freqs = p.axis("freqs", "f");
    so.dt = opt.system.dt_sim;
    tables.push_back(spectrum_table(spectrum_shapes, p.num("spectrum_t_gate", 50.0), so,
                                    opt.system.delta_ez));
    auto td = sweep_td(windows_from(p), t_gates, p.axis("t_ds", "t_d"), opt);
    tables.push_back(std::move(td.grid));
    tables.push_back(std::move(td.best));
    suffixes = {"", "_spectrum", "_td", "_td_argmin"};
  } else if (cfg.experiment == "dez_fsamp") {
    SimulationOptions local = opt;
    local.sampling = sampling_config(p, 1.0);
    WindowKind window;
    try {
      window = parse_window(p.str("window", "rc"), p.num("kaiser_beta", 6.14));
    } catch (const InvalidParameter& e) {
      throw ConfigError(e.what());
    }
    tables.push_back(sweep_dez_fsamp(p.num("t_gate", 50.0), window, p.axis("delta_ezs", "delta_ez"),
                                     p.axis("f_samps", "f_samp"), local, p.num("clip", 1e-5)));
    suffixes.push_back("");
  } else if (cfg.experiment == "error_model" || cfg.experiment == "calibration_compare") {
    const auto shape = shape_from(p, p.str("shape", "rc"), opt.system.delta_ez);
    const auto t_gates = p.axis("t_gates", "t_gate");
    tables.push_back(cfg.experiment == "error_model" ? sweep_error_model(shape, t_gates, opt)
                                                      : sweep_calibration(shape, t_gates, opt));
    suffixes.push_back("");
  } else if (cfg.experiment == "spectrum") {
    SpectrumOptions so;
    so.freqs = p.axis("freqs", "f");
    if (p.has("f_samp")) so.f_samp = p.num("f_samp", 0.0);
    so.alias_terms = static_cast<int>(p.num("alias_terms", 1));
    so.dt = opt.system.dt_sim;
    const auto shapes = shapes_from(p, opt.system.delta_ez);
    const double t_gate = p.num("t_gate", 50.0);
    tables.push_back(spectrum_table(shapes, t_gate, so, opt.system.delta_ez));
    suffixes.push_back("");
    if (p.has("bw_threshold_db")) {
      // Bandwidth on a 0.5 MHz grid from 0 to f_max, one value per shape.
      const double threshold = p.num("bw_threshold_db", -40.0);
      const auto grid = frequency_grid(0.0, so.freqs.back(), 5e-4);
      nlohmann::json bw = nlohmann::json::object();
      for (const auto& shape : shapes) {
        SimulationOptions sim;
        sim.system.dt_sim = so.dt;
        PulseSpec spec = shape.spec;
        spec.t_gate = t_gate;
        const Waveform w = prepare_waveform(spec, sim);
        nlohmann::json entry;
        try {
          const double b = bandwidth_at_threshold(fourier(w, grid), threshold);
          entry["bandwidth_GHz"] = b;
          entry["min_sampling_frequency_GHz"] = min_sampling_frequency(opt.system.delta_ez, b);
        } catch (const NotFound&) {
          entry["bandwidth_GHz"] = nullptr;
        }
        bw[shape.label] = entry;
      }
      extra["bandwidth"] = bw;
      extra["bw_threshold_db"] = threshold;
    }
  } else {
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  }

  std::filesystem::create_directories(cfg.output_dir);
  std::vector<std::filesystem::path> written;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    written.push_back(write_table(tables[i], cfg.output_dir, cfg.name + suffixes[i]));
  }

  nlohmann::json meta;
  meta["experiment"] = cfg.experiment;
  meta["name"] = cfg.name;
  meta["code_version"] = kVersion;
  meta["params"] = cfg.params;
  meta["columns"] = nlohmann::json::array();
  for (const auto& t : tables) {
    nlohmann::json cols = t.axis_names;
    for (const auto& v : t.value_names) cols.push_back(v);
    meta["columns"].push_back({{"table", t.experiment}, {"names", cols}, {"rows", t.rows.size()}});
  }
  meta["units"] = {{"time", "ns"}, {"frequency", "GHz"}, {"angle", "rad"}};
  if (!extra.empty()) meta["results"] = extra;
  const auto meta_path = cfg.output_dir / (cfg.name + ".meta.json");
  std::ofstream os(meta_path, std::ios::binary);
  if (!os) throw Error("cannot write " + meta_path.string());
  os << meta.dump(2) << '\n';
  written.push_back(meta_path);
  return written;
}

int run(const std::filesystem::path& config, std::ostream& err,
        const std::optional<std::filesystem::path>& output_dir) {
  try {
    RunConfig cfg = load_config(config);
    if (output_dir) cfg.output_dir = *output_dir;
    run_experiment(cfg);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParameter& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace dlr
