// Command-line front end: runs config-driven experiments and single-shot
// spectrum, simulation and calibration queries.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dlr/errors.hpp"
#include "dlr/experiments.hpp"
#include "dlr/runner.hpp"
#include "dlr/spectral.hpp"
#include "dlr/version.hpp"

namespace {

struct PulseArgs {
  std::string shape = "plain";
  std::string window = "rc";
  double t_gate = 50.0;
  double t_d = 5.0;
  double beta = 0.0;
  double kaiser_beta = 6.14;
  double delta_ez = 0.1;
  double dt = dlr::kDefaultDt;

  void add_to(CLI::App* app) {
    app->add_option("--shape", shape, "plain, dlr-static, dlr-average, dlr-dynamic, drag, drag-average");
    app->add_option("--window", window, "rc, hamming, kaiser, square");
    app->add_option("--t-gate", t_gate, "gate duration (ns)");
    app->add_option("--t-d", t_d, "DLR-static delay (ns)");
    app->add_option("--beta", beta, "DRAG coefficient (ns)");
    app->add_option("--kaiser-beta", kaiser_beta, "Kaiser shape parameter");
    app->add_option("--delta-ez", delta_ez, "qubit frequency difference (GHz)");
    app->add_option("--dt", dt, "time step (ns)");
  }

  dlr::PulseSpec spec() const {
    auto tmpl = dlr::parse_shape(shape + ":" + window, delta_ez, t_d, beta, kaiser_beta);
    tmpl.spec.t_gate = t_gate;
    return tmpl.spec;
  }
};

// Output stream: a file if a path is given, otherwise stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw dlr::ConfigError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const dlr::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const dlr::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DLR pulse design and CZ gate simulation"};
  app.set_version_flag("--version", std::string(dlr::kVersion));
  app.require_subcommand(1);
  int code = 0;

  auto* run = app.add_subcommand("run", "run an experiment config");
  std::string config;
  std::string output_dir;
  run->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output-dir", output_dir, "overrides output_dir from the config");
  run->callback([&] {
    std::optional<std::filesystem::path> dir;
    if (!output_dir.empty()) dir = output_dir;
    code = dlr::run(config, std::cerr, dir);
  });

  auto* spectrum = app.add_subcommand("spectrum", "Fourier spectrum of a calibrated pulse as CSV");
  PulseArgs spec_args;
  spec_args.add_to(spectrum);
  double f_min = -0.5, f_max = 0.5, df = 1e-3;
  std::string spec_out;
  spectrum->add_option("--f-min", f_min, "GHz");
  spectrum->add_option("--f-max", f_max, "GHz");
  spectrum->add_option("--df", df, "GHz");
  spectrum->add_option("-o,--output", spec_out, "CSV path (default stdout)");
  spectrum->callback([&] {
    code = guarded([&] {
      dlr::SimulationOptions opt;
      opt.system.delta_ez = spec_args.delta_ez;
      opt.system.dt_sim = spec_args.dt;
      const auto w = dlr::prepare_waveform(spec_args.spec(), opt);
      const auto freqs = dlr::frequency_grid(f_min, f_max, df);
      Output out(spec_out);
      dlr::write_csv(out.stream(), dlr::fourier(w, freqs));
    });
  });

  auto* simulate = app.add_subcommand("simulate", "simulate one CZ gate and print the report as JSON");
  PulseArgs sim_args;
  sim_args.add_to(simulate);
  double ez = 0.0;
  std::string calibration = "operator";
  std::string amplitude_mode = "pi";
  double f_samp = 0.0;
  simulate->add_option("--ez", ez, "mean qubit frequency (GHz), 0 = rotating frame");
  simulate->add_option("--calibration", calibration, "operator or first-order")
      ->check(CLI::IsMember({"operator", "first-order"}));
  simulate->add_option("--amplitude-mode", amplitude_mode, "pi or max-fidelity")
      ->check(CLI::IsMember({"pi", "max-fidelity"}));
  simulate->add_option("--f-samp", f_samp, "zero-order-hold sampling frequency (GHz)");
  simulate->callback([&] {
    code = guarded([&] {
      dlr::SimulationOptions opt;
      opt.system.delta_ez = sim_args.delta_ez;
      opt.system.ez = ez;
      opt.system.dt_sim = sim_args.dt;
      opt.calibration = calibration == "operator" ? dlr::PhaseCalibration::Operator
                                                  : dlr::PhaseCalibration::FirstOrder;
      if (f_samp > 0.0) {
        dlr::SamplingConfig cfg;
        cfg.f_samp = f_samp;
        cfg.fine_dt = sim_args.dt;
        opt.sampling = cfg;
      }
      const auto w = dlr::prepare_waveform(sim_args.spec(), opt);
      const auto mode = amplitude_mode == "pi" ? dlr::AmplitudeMode::PiCalibrated
                                               : dlr::AmplitudeMode::MaxFidelity;
      const auto [report, factor] = dlr::simulate_point(w, opt, mode);
      nlohmann::json j = report;
      j["amplitude_factor"] = factor;
      std::cout << j.dump(2) << '\n';
    });
  });

  auto* calibrate = app.add_subcommand("calibrate", "pi-area amplitude of a pulse");
  PulseArgs cal_args;
  cal_args.add_to(calibrate);
  calibrate->callback([&] {
    code = guarded([&] {
      const auto spec = dlr::calibrate_amplitude(cal_args.spec(), cal_args.dt);
      const auto w = dlr::materialize(spec, cal_args.dt);
      double peak = 0.0;
      for (const auto& v : w.samples()) peak = std::max(peak, std::abs(v));
      const nlohmann::json j = {{"shape", dlr::shaping_name(spec.shaping)},
                                {"window", dlr::window_name(spec.window)},
                                {"t_gate_ns", spec.t_gate},
                                {"amplitude_GHz", spec.amplitude},
                                {"peak_GHz", peak},
                                {"area", dlr::pulse_area(w)}};
      std::cout << j.dump(2) << '\n';
    });
  });

  auto* list = app.add_subcommand("list-experiments", "names accepted by the experiment key");
  list->callback([&] {
    for (const auto& name : dlr::experiment_names()) std::cout << name << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return code;
}
