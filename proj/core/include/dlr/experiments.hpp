#pragma once

// Parameter sweeps that regenerate the figure data sets, plus CSV and JSON
// output. Grid points are evaluated in parallel and always assembled in grid
// order, so results do not depend on the worker count.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlr/dynamics.hpp"
#include "dlr/fidelity.hpp"
#include "dlr/sampling.hpp"
#include "dlr/waveforms.hpp"

namespace dlr {

enum class AmplitudeMode { PiCalibrated, MaxFidelity };

using Cell = std::variant<double, std::string>;

struct SweepRow {
  std::vector<Cell> axes;
  std::vector<double> values;
};

/// Table of grid points. Columns are the axis names followed by the value
/// names; for simulation sweeps the values start with infidelity, fidelity,
/// epsilon, theta1, theta2.
struct SweepResult {
  std::string experiment;
  std::vector<std::string> axis_names;
  std::vector<std::string> value_names;
  std::vector<SweepRow> rows;
  nlohmann::json metadata = nlohmann::json::object();

  /// Column index of a value; NotFound if absent.
  std::size_t value_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

/// Header row plus one line per grid point ('.' decimals, '\n' endings).
void write_csv(std::ostream& os, const SweepResult& r);

/// A pulse description whose t_gate is filled in per grid point, with a
/// label for the shape column.
struct ShapeTemplate {
  std::string label;
  PulseSpec spec;
};

/// Parses "window", "shaping" or "shaping:window" (e.g. "square",
/// "dlr-dynamic", "dlr-static:hamming"). Windows: rc, hamming, kaiser,
/// square. Shapings: plain, dlr-static, dlr-average, dlr-dynamic, drag,
/// drag-average. t_d and beta feed dlr-static and drag; kaiser_beta the
/// Kaiser window; delta_ez the variants that derive their notch from f_osc.
ShapeTemplate parse_shape(const std::string& token, double delta_ez, double t_d = 5.0,
                          double beta = 0.0, double kaiser_beta = 6.14);

WindowKind parse_window(const std::string& name, double kaiser_beta = 6.14);

/// Inclusive grid lo, lo + step, ... <= hi; values are rounded to 1e-9 so
/// decimal steps print cleanly.
std::vector<double> arange(double lo, double hi, double step);

/// Worker count: DLR_WORKERS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Evaluates task(i) for i in [0, n) on `workers` threads. The first
/// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task,
                  unsigned workers = 0);

struct SimulationOptions {
  SystemParams system;
  PhaseCalibration calibration = PhaseCalibration::Operator;
  SampleRule rule = SampleRule::Midpoint;
  std::optional<SamplingConfig> sampling;  // zero-order hold before propagation
};

/// Calibrated waveform for one grid point: pi-area amplitude, then the
/// optional zero-order hold.
Waveform prepare_waveform(const PulseSpec& spec, const SimulationOptions& opt);

/// Simulates w, scaling the amplitude by the best factor in [0.95, 1.05]
/// (golden-section, relative tolerance 1e-6) when mode is MaxFidelity.
/// Returns the report and the factor applied.
std::pair<FidelityReport, double> simulate_point(const Waveform& w, const SimulationOptions& opt,
                                                 AmplitudeMode mode);

/// Infidelity vs gate duration for each shape.
/// Axes: t_gate_ns, shape. Values: the five standard columns, amplitude_GHz.
SweepResult sweep_gate_time(const std::vector<ShapeTemplate>& shapes,
                            const std::vector<double>& t_gates, const SimulationOptions& opt,
                            AmplitudeMode mode);

struct TdSweep {
  SweepResult grid;  // window, t_gate_ns, t_d_ns, f_notch_GHz
  SweepResult best;  // per (window, t_gate) minimum over t_d
};

/// DLR-static infidelity over (t_gate, t_d) for each window.
TdSweep sweep_td(const std::vector<WindowKind>& windows, const std::vector<double>& t_gates,
                 const std::vector<double>& t_ds, const SimulationOptions& opt);

/// Zero-order-held pulse infidelity over (delta_ez, f_samp). The values
/// carry the raw infidelity and a copy clipped from below at `clip`.
SweepResult sweep_dez_fsamp(double t_gate, const WindowKind& window,
                            const std::vector<double>& delta_ez, const std::vector<double>& f_samps,
                            const SimulationOptions& opt, double clip = 1e-5);

/// Simulated infidelity next to the analytic error models for each gate
/// time (operator calibration). Extra values: epsilon_phase_integral,
/// epsilon_spectral, magnus2_delta, analytic_infidelity,
/// analytic_infidelity_magnus2.
SweepResult sweep_error_model(const ShapeTemplate& shape, const std::vector<double>& t_gates,
                              const SimulationOptions& opt);

/// Operator-based vs first-order phase calibration per gate time.
/// Axes: t_gate_ns, calibration.
SweepResult sweep_calibration(const ShapeTemplate& shape, const std::vector<double>& t_gates,
                              const SimulationOptions& opt);

struct SpectrumOptions {
  std::vector<double> freqs;
  std::optional<double> f_samp;  // adds the zero-order-hold spectrum
  int alias_terms = 1;
  double dt = kDefaultDt;
};

/// Spectra of the calibrated shapes. Axes: freq_GHz, shape.
/// Values: re, im, abs_db (relative to each shape's peak), and when f_samp
/// is set, sampled_re, sampled_im, sampled_abs_db.
SweepResult spectrum_table(const std::vector<ShapeTemplate>& shapes, double t_gate,
                           const SpectrumOptions& opt, double delta_ez);

}  // namespace dlr
