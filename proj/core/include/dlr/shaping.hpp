#pragma once

// Delayed Leakage Reduction (DLR) and DRAG pulse construction.
//
// DLR adds a replica of a base pulse delayed by t_d. In the frequency
// domain this multiplies the spectrum by (1 + exp(-i 2 pi f t_d)), which
// vanishes at odd multiples of 1/(2 t_d).

#include <span>
#include <variant>
#include <vector>

#include "dlr/waveforms.hpp"

namespace dlr {

enum class DlrVariant { Static, Average, Dynamic };

struct DlrPlan {
  DlrVariant variant = DlrVariant::Static;
  // Scalar delay for static/average plans, sampled delay for dynamic plans.
  std::variant<double, std::vector<double>> t_d_profile = 0.0;
  // 1/(2 t_d) for scalar plans; for dynamic plans the notch at mid-gate.
  double f_notch = 0.0;

  bool is_scalar() const { return std::holds_alternative<double>(t_d_profile); }
  double scalar_t_d() const;
};

struct Replica {
  double delay;
  double weight = 1.0;
};

/// g(t) + g(t - t_d). The result spans base.duration + t_d.
Envelope dlr_static(const Envelope& base, double t_d);

/// Weighted sum of delayed copies of base; the undelayed original is not
/// included implicitly.
Envelope dlr_multi(const Envelope& base, std::span<const Replica> replicas);

/// DLR-static pulse of total length t_gate built from `window` sub-pulses of
/// length t_gate - t_d.
Envelope dlr_static_pulse(const WindowKind& window, double t_gate, double t_d);

struct ShapedPulse {
  Waveform pulse;  // pi-calibrated
  DlrPlan plan;
};

/// Instantaneous SWAP oscillation frequency sqrt(delta_ez^2 + |J|^2).
std::vector<double> oscillation_frequency(const Waveform& w, double delta_ez);

/// Pi-calibrated plain raised cosine of length t_gate, used to estimate
/// f_osc(t) before the DLR pulse exists.
Waveform bootstrap_pulse(double t_gate, double dt);

/// Notch placed at the mean of min and max f_osc of the bootstrap pulse.
double average_notch_frequency(double t_gate, double delta_ez, double dt);

/// DLR-average: static DLR with t_d = 1 / (2 f_notch), f_notch from
/// average_notch_frequency.
ShapedPulse dlr_average(const WindowKind& window, double t_gate, double delta_ez,
                        double dt = kDefaultDt);

/// DLR-dynamic: both sub-pulse length and delay follow
/// t_d(t) = 1 / (2 f_osc(t)) of the bootstrap pulse.
ShapedPulse dlr_dynamic(const WindowKind& window, double t_gate, double delta_ez,
                        double dt = kDefaultDt);

/// Unit-scale (uncalibrated) DLR-dynamic samples on the grid of `dt`.
Waveform dlr_dynamic_envelope(const WindowKind& window, double t_gate, double delta_ez,
                              double dt, std::vector<double>* t_d_profile = nullptr);

/// g(t) + i beta g'(t) with the analytic window derivative.
Envelope drag(const WindowKind& window, double t_gate, double beta);

/// beta = -1 / (2 pi f) puts the DRAG spectral zero at f = -f_notch.
double drag_beta_for_notch(double f_notch);

}  // namespace dlr
