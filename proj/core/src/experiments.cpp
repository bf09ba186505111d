#include "dlr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "dlr/errors.hpp"
#include "dlr/io.hpp"
#include "dlr/spectral.hpp"

namespace dlr {

namespace {

const std::vector<std::string> kStandardValues = {"infidelity", "fidelity", "epsilon", "theta1",
                                                  "theta2"};

std::vector<double> standard_values(const FidelityReport& r) {
  return {r.infidelity(), r.fidelity, r.epsilon_simulated, r.theta1, r.theta2};
}

std::vector<std::string> with_extras(std::initializer_list<std::string> extras) {
  std::vector<std::string> out = kStandardValues;
  out.insert(out.end(), extras);
  return out;
}

void check_finite(const SweepRow& row) {
  for (double v : row.values) {
    if (!std::isfinite(v)) throw Error("sweep produced a non-finite value");
  }
}

PulseSpec instantiate(const PulseSpec& tmpl, double t_gate) {
  PulseSpec spec = tmpl;
  spec.t_gate = t_gate;
  return spec;
}

void csv_cell(std::ostream& os, const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    os << format_double(*d);
  } else {
    os << std::get<std::string>(c);
  }
}

}  // namespace

std::size_t SweepResult::value_index(const std::string& name) const {
  const auto it = std::find(value_names.begin(), value_names.end(), name);
  if (it == value_names.end()) throw NotFound("no value column named " + name);
  return static_cast<std::size_t>(it - value_names.begin());
}

std::vector<double> SweepResult::column(const std::string& name) const {
  const std::size_t idx = value_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.values[idx]);
  return out;
}

void write_csv(std::ostream& os, const SweepResult& r) {
  bool first = true;
  for (const auto& name : r.axis_names) {
    os << (first ? "" : ",") << name;
    first = false;
  }
  for (const auto& name : r.value_names) {
    os << (first ? "" : ",") << name;
    first = false;
  }
  os << '\n';
  for (const auto& row : r.rows) {
    first = true;
    for (const auto& c : row.axes) {
      if (!first) os << ',';
      csv_cell(os, c);
      first = false;
    }
    for (double v : row.values) {
      if (!first) os << ',';
      os << format_double(v);
      first = false;
    }
    os << '\n';
  }
}

WindowKind parse_window(const std::string& name, double kaiser_beta) {
  if (name == "rc" || name == "raised-cosine") return RaisedCosine{};
  if (name == "hamming") return Hamming{};
  if (name == "kaiser") return Kaiser{kaiser_beta};
  if (name == "square") return Square{};
  throw InvalidParameter("unknown window '" + name + "'");
}

ShapeTemplate parse_shape(const std::string& token, double delta_ez, double t_d, double beta,
                          double kaiser_beta) {
  std::string shaping = token;
  std::string window = "rc";
  if (const auto colon = token.find(':'); colon != std::string::npos) {
    shaping = token.substr(0, colon);
    window = token.substr(colon + 1);
  } else if (token == "rc" || token == "raised-cosine" || token == "hamming" ||
             token == "kaiser" || token == "square") {
    shaping = "plain";
    window = token;
  }
  PulseSpec spec;
  spec.window = parse_window(window, kaiser_beta);
  if (shaping == "plain") {
    spec.shaping = Plain{};
  } else if (shaping == "dlr-static") {
    spec.shaping = DlrStatic{t_d};
  } else if (shaping == "dlr-average") {
    spec.shaping = DlrAverage{delta_ez};
  } else if (shaping == "dlr-dynamic") {
    spec.shaping = DlrDynamic{delta_ez};
  } else if (shaping == "drag") {
    spec.shaping = Drag{beta};
  } else if (shaping == "drag-average") {
    spec.shaping = DragAverage{delta_ez};
  } else {
    throw InvalidParameter("unknown shaping '" + shaping + "'");
  }
  return ShapeTemplate{token, spec};
}

std::vector<double> arange(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw InvalidParameter("invalid range");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::round((lo + static_cast<double>(k) * step) * 1e9) / 1e9;
  }
  return out;
}

unsigned worker_count() {
  if (const char* env = std::getenv("DLR_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task, unsigned workers) {
  if (workers == 0) workers = worker_count();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned k = 0; k < workers; ++k) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Waveform prepare_waveform(const PulseSpec& spec, const SimulationOptions& opt) {
  const double dt = opt.system.dt_sim;
  Waveform w = materialize(calibrate_amplitude(spec, dt), dt);
  if (opt.sampling) return zero_order_hold(w, *opt.sampling);
  return w;
}

std::pair<FidelityReport, double> simulate_point(const Waveform& w, const SimulationOptions& opt,
                                                 AmplitudeMode mode) {
  auto eval = [&](double factor) {
    const Waveform scaled = factor == 1.0 ? w : w.scaled(factor);
    return cz_fidelity_from_unitary(propagate(scaled, opt.system, opt.rule), scaled, opt.system,
                                    opt.calibration);
  };
  FidelityReport center = eval(1.0);
  if (mode == AmplitudeMode::PiCalibrated) return {center, 1.0};

  // Golden-section search for the minimum infidelity in [0.95, 1.05].
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.95;
  double b = 1.05;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  FidelityReport rc = eval(c);
  FidelityReport rd = eval(d);
  while (b - a > 1e-6) {
    if (rc.infidelity() < rd.infidelity()) {
      b = d;
      d = c;
      rd = rc;
      c = b - invphi * (b - a);
      rc = eval(c);
    } else {
      a = c;
      c = d;
      rc = rd;
      d = a + invphi * (b - a);
      rd = eval(d);
    }
  }
  std::pair<FidelityReport, double> best{center, 1.0};
  if (rc.infidelity() < best.first.infidelity()) best = {rc, c};
  if (rd.infidelity() < best.first.infidelity()) best = {rd, d};
  return best;
}

SweepResult sweep_gate_time(const std::vector<ShapeTemplate>& shapes,
                            const std::vector<double>& t_gates, const SimulationOptions& opt,
                            AmplitudeMode mode) {
  if (shapes.empty() || t_gates.empty()) throw InvalidParameter("gate-time sweep needs shapes and t_gates");
  SweepResult r;
  r.experiment = "gate_time";
  r.axis_names = {"t_gate_ns", "shape"};
  r.value_names = with_extras({"amplitude_GHz"});
  r.rows.resize(shapes.size() * t_gates.size());
  parallel_for(r.rows.size(), [&](std::size_t i) {
    const auto& shape = shapes[i / t_gates.size()];
    const double t_gate = t_gates[i % t_gates.size()];
    const Waveform w = prepare_waveform(instantiate(shape.spec, t_gate), opt);
    const auto [report, factor] = simulate_point(w, opt, mode);
    double peak = 0.0;
    for (const auto& v : w.samples()) peak = std::max(peak, std::abs(v));
    SweepRow row{{t_gate, shape.label}, standard_values(report)};
    row.values.push_back(peak * factor);
    check_finite(row);
    r.rows[i] = std::move(row);
  });
  return r;
}

TdSweep sweep_td(const std::vector<WindowKind>& windows, const std::vector<double>& t_gates,
                 const std::vector<double>& t_ds, const SimulationOptions& opt) {
  if (windows.empty() || t_gates.empty() || t_ds.empty()) {
    throw InvalidParameter("t_d sweep needs windows, t_gates and t_ds");
  }
  const double min_gate = *std::min_element(t_gates.begin(), t_gates.end());
  for (double t_d : t_ds) {
    if (!(t_d > 0.0) || !(t_d < min_gate)) throw InvalidParameter("t_d must lie in (0, min t_gate)");
  }
  TdSweep out;
  auto& g = out.grid;
  g.experiment = "td";
  g.axis_names = {"window", "t_gate_ns", "t_d_ns", "f_notch_GHz"};
  g.value_names = kStandardValues;
  const std::size_t per_window = t_gates.size() * t_ds.size();
  g.rows.resize(windows.size() * per_window);
  parallel_for(g.rows.size(), [&](std::size_t i) {
    const auto& window = windows[i / per_window];
    const double t_gate = t_gates[(i % per_window) / t_ds.size()];
    const double t_d = t_ds[i % t_ds.size()];
    const PulseSpec spec{window, t_gate, 1.0, DlrStatic{t_d}};
    const auto [report, factor] = simulate_point(prepare_waveform(spec, opt), opt,
                                                 AmplitudeMode::PiCalibrated);
    SweepRow row{{window_name(window), t_gate, t_d, 0.5 / t_d}, standard_values(report)};
    check_finite(row);
    g.rows[i] = std::move(row);
  });

  auto& b = out.best;
  b.experiment = "td_argmin";
  b.axis_names = {"window", "t_gate_ns"};
  b.value_names = with_extras({"t_d_ns", "f_notch_GHz"});
  for (std::size_t start = 0; start < g.rows.size(); start += t_ds.size()) {
    std::size_t best = start;
    for (std::size_t k = start; k < start + t_ds.size(); ++k) {
      if (g.rows[k].values[0] < g.rows[best].values[0]) best = k;
    }
    const auto& row = g.rows[best];
    SweepRow sel{{row.axes[0], row.axes[1]}, row.values};
    sel.values.push_back(std::get<double>(row.axes[2]));
    sel.values.push_back(std::get<double>(row.axes[3]));
    b.rows.push_back(std::move(sel));
  }
  return out;
}

SweepResult sweep_dez_fsamp(double t_gate, const WindowKind& window,
                            const std::vector<double>& delta_ez, const std::vector<double>& f_samps,
                            const SimulationOptions& opt, double clip) {
  if (delta_ez.empty() || f_samps.empty()) throw InvalidParameter("sweep needs delta_ez and f_samp grids");
  SweepResult r;
  r.experiment = "dez_fsamp";
  r.axis_names = {"delta_ez_GHz", "f_samp_GHz"};
  r.value_names = with_extras({"infidelity_clipped"});
  r.rows.resize(delta_ez.size() * f_samps.size());
  const SamplingConfig base = opt.sampling.value_or(SamplingConfig{});
  // The continuous pulse does not depend on delta_ez or f_samp.
  const PulseSpec spec{window, t_gate, 1.0, Plain{}};
  const Waveform continuous = materialize(calibrate_amplitude(spec, opt.system.dt_sim), opt.system.dt_sim);
  parallel_for(r.rows.size(), [&](std::size_t i) {
    const double dez = delta_ez[i / f_samps.size()];
    const double fs = f_samps[i % f_samps.size()];
    SimulationOptions local = opt;
    local.system.delta_ez = dez;
    SamplingConfig cfg = base;
    cfg.f_samp = fs;
    const Waveform held = zero_order_hold(continuous, cfg);
    const auto [report, factor] = simulate_point(held, local, AmplitudeMode::PiCalibrated);
    SweepRow row{{dez, fs}, standard_values(report)};
    row.values.push_back(std::max(report.infidelity(), clip));
    check_finite(row);
    r.rows[i] = std::move(row);
  });
  return r;
}

SweepResult sweep_error_model(const ShapeTemplate& shape, const std::vector<double>& t_gates,
                              const SimulationOptions& opt) {
  if (t_gates.empty()) throw InvalidParameter("error-model sweep needs t_gates");
  SweepResult r;
  r.experiment = "error_model";
  r.axis_names = {"t_gate_ns", "shape"};
  r.value_names = with_extras({"epsilon_phase_integral", "epsilon_spectral", "magnus2_delta",
                               "analytic_infidelity", "analytic_infidelity_magnus2"});
  r.rows.resize(t_gates.size());
  parallel_for(r.rows.size(), [&](std::size_t i) {
    const Waveform w = prepare_waveform(instantiate(shape.spec, t_gates[i]), opt);
    const auto [report, factor] = simulate_point(w, opt, AmplitudeMode::PiCalibrated);
    SweepRow row{{t_gates[i], shape.label}, standard_values(report)};
    row.values.insert(row.values.end(),
                      {report.terms.epsilon, report.epsilon_spectral, report.terms.magnus2_delta,
                       analytic_infidelity(report.terms, false),
                       analytic_infidelity(report.terms, true)});
    check_finite(row);
    r.rows[i] = std::move(row);
  });
  return r;
}

SweepResult sweep_calibration(const ShapeTemplate& shape, const std::vector<double>& t_gates,
                              const SimulationOptions& opt) {
  if (t_gates.empty()) throw InvalidParameter("calibration sweep needs t_gates");
  SweepResult r;
  r.experiment = "calibration_compare";
  r.axis_names = {"t_gate_ns", "calibration"};
  r.value_names = kStandardValues;
  r.rows.resize(2 * t_gates.size());
  parallel_for(t_gates.size(), [&](std::size_t i) {
    const Waveform w = prepare_waveform(instantiate(shape.spec, t_gates[i]), opt);
    const Unitary4 u = propagate(w, opt.system, opt.rule);
    const auto op = cz_fidelity_from_unitary(u, w, opt.system, PhaseCalibration::Operator);
    const auto fo = cz_fidelity_from_unitary(u, w, opt.system, PhaseCalibration::FirstOrder);
    r.rows[2 * i] = SweepRow{{t_gates[i], std::string("operator")}, standard_values(op)};
    r.rows[2 * i + 1] = SweepRow{{t_gates[i], std::string("first-order")}, standard_values(fo)};
    check_finite(r.rows[2 * i]);
    check_finite(r.rows[2 * i + 1]);
  });
  return r;
}

SweepResult spectrum_table(const std::vector<ShapeTemplate>& shapes, double t_gate,
                           const SpectrumOptions& opt, double delta_ez) {
  if (shapes.empty() || opt.freqs.empty()) throw InvalidParameter("spectrum needs shapes and frequencies");
  SweepResult r;
  r.experiment = "spectrum";
  r.axis_names = {"freq_GHz", "shape"};
  r.value_names = {"re", "im", "abs_db"};
  if (opt.f_samp) r.value_names.insert(r.value_names.end(), {"sampled_re", "sampled_im", "sampled_abs_db"});
  const std::size_t nf = opt.freqs.size();
  r.rows.resize(shapes.size() * nf);
  parallel_for(shapes.size(), [&](std::size_t s) {
    SimulationOptions sim;
    sim.system.delta_ez = delta_ez;
    sim.system.dt_sim = opt.dt;
    const Waveform w = prepare_waveform(instantiate(shapes[s].spec, t_gate), sim);
    const Spectrum spec = fourier(w, opt.freqs);
    std::vector<Complex> sampled;
    if (opt.f_samp) {
      const SpectrumFn fn = [&w](double f) { return fourier_at(w, f); };
      sampled.resize(nf);
      for (std::size_t k = 0; k < nf; ++k) {
        sampled[k] = sampled_spectrum(fn, *opt.f_samp, opt.freqs[k], opt.alias_terms);
      }
    }
    auto peak_of = [](const std::vector<Complex>& v) {
      double p = 0.0;
      for (const auto& x : v) p = std::max(p, std::abs(x));
      return p;
    };
    auto db = [](Complex v, double peak) {
      return v == Complex{} || peak == 0.0 ? -std::numeric_limits<double>::infinity()
                                           : power_db(v, peak);
    };
    const double peak = peak_of(spec.values);
    const double sampled_peak = opt.f_samp ? peak_of(sampled) : 0.0;
    for (std::size_t k = 0; k < nf; ++k) {
      SweepRow row{{opt.freqs[k], shapes[s].label},
                   {spec.values[k].real(), spec.values[k].imag(), db(spec.values[k], peak)}};
      if (opt.f_samp) {
        row.values.insert(row.values.end(),
                          {sampled[k].real(), sampled[k].imag(), db(sampled[k], sampled_peak)});
      }
      r.rows[s * nf + k] = std::move(row);
    }
  });
  return r;
}

}  // namespace dlr
