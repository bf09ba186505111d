#include "dlr/shaping.hpp"

#include <algorithm>
#include <cmath>

#include "dlr/errors.hpp"

namespace dlr {

double DlrPlan::scalar_t_d() const {
  if (const auto* t_d = std::get_if<double>(&t_d_profile)) return *t_d;
  throw Unsupported("dynamic DLR plans have no single delay");
}

Envelope dlr_static(const Envelope& base, double t_d) {
  if (!(t_d > 0.0)) throw InvalidParameter("DLR delay must be positive");
  return Envelope{[base, t_d](double t) { return base(t) + base(t - t_d); }, base.duration + t_d};
}

Envelope dlr_multi(const Envelope& base, std::span<const Replica> replicas) {
  if (replicas.empty()) throw InvalidParameter("dlr_multi needs at least one replica");
  std::vector<Replica> copies(replicas.begin(), replicas.end());
  double end = 0.0;
  for (const auto& r : copies) {
    if (!(r.delay >= 0.0)) throw InvalidParameter("replica delays must be non-negative");
    end = std::max(end, r.delay);
  }
  return Envelope{[base, copies](double t) {
                    Complex acc = 0.0;
                    for (const auto& r : copies) acc += r.weight * base(t - r.delay);
                    return acc;
                  },
                  base.duration + end};
}

Envelope dlr_static_pulse(const WindowKind& window, double t_gate, double t_d) {
  if (!(t_d > 0.0 && t_d < t_gate)) {
    throw InvalidParameter("DLR delay must satisfy 0 < t_d < t_gate");
  }
  return dlr_static(window_envelope(window, t_gate - t_d), t_d);
}

std::vector<double> oscillation_frequency(const Waveform& w, double delta_ez) {
  std::vector<double> f(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    f[k] = std::hypot(delta_ez, std::abs(w[k]));
  }
  return f;
}

Waveform bootstrap_pulse(double t_gate, double dt) {
  return calibrate_waveform(sample(window_envelope(RaisedCosine{}, t_gate), dt));
}

double average_notch_frequency(double t_gate, double delta_ez, double dt) {
  if (!(t_gate > 0.0)) throw InvalidParameter("t_gate must be positive");
  if (!(delta_ez > 0.0)) throw InvalidParameter("delta_ez must be positive");
  const auto f_osc = oscillation_frequency(bootstrap_pulse(t_gate, dt), delta_ez);
  const auto [lo, hi] = std::minmax_element(f_osc.begin(), f_osc.end());
  return 0.5 * (*lo + *hi);
}

ShapedPulse dlr_average(const WindowKind& window, double t_gate, double delta_ez, double dt) {
  const double f_notch = average_notch_frequency(t_gate, delta_ez, dt);
  const double t_d = 0.5 / f_notch;
  Waveform pulse = calibrate_waveform(sample(dlr_static_pulse(window, t_gate, t_d), dt));
  return ShapedPulse{std::move(pulse), DlrPlan{DlrVariant::Average, t_d, f_notch}};
}

Waveform dlr_dynamic_envelope(const WindowKind& window, double t_gate, double delta_ez, double dt,
                              std::vector<double>* t_d_profile) {
  if (!(delta_ez > 0.0)) throw InvalidParameter("delta_ez must be positive");
  const Waveform boot = bootstrap_pulse(t_gate, dt);
  const auto f_osc = oscillation_frequency(boot, delta_ez);
  std::vector<double> t_d(f_osc.size());
  std::vector<Complex> out(f_osc.size());
  for (std::size_t k = 0; k < f_osc.size(); ++k) {
    t_d[k] = 0.5 / f_osc[k];
    if (!(t_d[k] < t_gate)) {
      throw InvalidParameter("DLR-dynamic delay 1/(2 f_osc) must stay below t_gate");
    }
    // Both copies shrink to t_gate - t_d(t) so the pair still ends at t_gate.
    const double t = boot.time(k);
    const double sub = t_gate - t_d[k];
    out[k] = window_value(window, t, sub) + window_value(window, t - t_d[k], sub);
  }
  if (t_d_profile != nullptr) *t_d_profile = std::move(t_d);
  return Waveform(std::move(out), boot.dt());
}

ShapedPulse dlr_dynamic(const WindowKind& window, double t_gate, double delta_ez, double dt) {
  std::vector<double> profile;
  Waveform pulse = calibrate_waveform(dlr_dynamic_envelope(window, t_gate, delta_ez, dt, &profile));
  const double f_mid = 0.5 / profile[profile.size() / 2];
  return ShapedPulse{std::move(pulse), DlrPlan{DlrVariant::Dynamic, std::move(profile), f_mid}};
}

Envelope drag(const WindowKind& window, double t_gate, double beta) {
  if (std::holds_alternative<Square>(window)) {
    throw InvalidParameter("DRAG needs a differentiable window");
  }
  if (!(t_gate > 0.0)) throw InvalidParameter("t_gate must be positive");
  return Envelope{[window, t_gate, beta](double t) {
                    return Complex(window_value(window, t, t_gate),
                                   beta * window_derivative(window, t, t_gate));
                  },
                  t_gate};
}

double drag_beta_for_notch(double f_notch) {
  if (!(f_notch > 0.0)) throw InvalidParameter("notch frequency must be positive");
  return -1.0 / (kTwoPi * f_notch);
}

}  // namespace dlr
