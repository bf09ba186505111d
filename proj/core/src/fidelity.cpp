#include "dlr/fidelity.hpp"

#include <cmath>
#include <vector>

#include "dlr/errors.hpp"
#include "dlr/shaping.hpp"
#include "dlr/spectral.hpp"

namespace dlr {

namespace {

constexpr double kUnitarityTolerance = 1e-8;
constexpr double kMinDiagonal = 1e-6;

// The adiabatic-frame coupling is pi*g rather than 2*pi*g, and delta_theta
// is the per-qubit (halved) residual, so delta enters with weight 1/4.
constexpr double kMagnusWeight = 0.25;

// Running trapezoidal integral of y, starting at 0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& y, double dt) {
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t k = 1; k < y.size(); ++k) out[k] = out[k - 1] + 0.5 * dt * (y[k - 1] + y[k]);
  return out;
}

std::vector<double> magnitudes(const Waveform& w) {
  std::vector<double> out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = std::abs(w[k]);
  return out;
}

// Propagator with the common Zeeman rotation removed.
Unitary4 to_rotating_frame(const Unitary4& u, double ez, double t) {
  Unitary4 out = u;
  out.row(0) *= std::polar(1.0, kTwoPi * ez * t);
  out.row(3) *= std::polar(1.0, -kTwoPi * ez * t);
  return out;
}

}  // namespace

double wrap_angle(double angle) {
  double r = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

Unitary4 cz_gate() {
  Unitary4 u = Unitary4::Identity();
  u(3, 3) = -1.0;
  return u;
}

Unitary4 virtual_z(double theta1, double theta2) {
  Unitary4 u = Unitary4::Zero();
  u(0, 0) = std::polar(1.0, 0.5 * (theta1 + theta2));
  u(1, 1) = std::polar(1.0, 0.5 * (theta1 - theta2));
  u(2, 2) = std::polar(1.0, 0.5 * (theta2 - theta1));
  u(3, 3) = std::polar(1.0, -0.5 * (theta1 + theta2));
  return u;
}

double avg_gate_fidelity(const Unitary4& u_ideal, const Unitary4& u_sim) {
  if (unitarity_error(u_ideal) > kUnitarityTolerance || unitarity_error(u_sim) > kUnitarityTolerance) {
    throw NonUnitaryInput("average gate fidelity needs unitary inputs");
  }
  constexpr double d = 4.0;
  const double overlap = std::norm((u_ideal.adjoint() * u_sim).trace());
  return (overlap + d) / (d * (d + 1.0));
}

PhaseAngles calibrate_phases_operator(const Unitary4& u) {
  for (int k = 0; k < 4; ++k) {
    if (std::abs(u(k, k)) < kMinDiagonal) {
      throw DegenerateDiagonal("diagonal element too small to define a phase");
    }
  }
  return PhaseAngles{wrap_angle(kPi + std::arg(u(0, 0)) - std::arg(u(1, 1))),
                     wrap_angle(kPi + std::arg(u(3, 3)) - std::arg(u(2, 2)))};
}

PhaseAngles calibrate_phases_first_order(const Waveform& w, double delta_ez) {
  const double area = pulse_area(w);
  const auto f_osc = oscillation_frequency(w, delta_ez);
  const double swap_phase = kPi * trapezoid(f_osc, w.dt());
  return PhaseAngles{wrap_angle(kPi - kPi * area - swap_phase),
                     wrap_angle(kPi - kPi * area + swap_phase)};
}

double epsilon_phase_integral(const Waveform& w, double delta_ez) {
  const auto alpha = cumulative_trapezoid(oscillation_frequency(w, delta_ez), w.dt());
  const std::size_t n = w.size();
  if (n < 2) return 0.0;
  Complex acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double weight = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    acc += weight * w[k] * std::polar(1.0, kTwoPi * alpha[k]);
  }
  return std::norm(kPi * acc * w.dt());
}

double epsilon_spectral(const Waveform& w, double delta_ez) {
  return std::norm(kPi * fourier_at(w, -delta_ez));
}

double magnus2_delta(const Waveform& w, double delta_ez) {
  const std::size_t n = w.size();
  if (n < 3) return 0.0;
  const double dt = w.dt();
  const auto j = magnitudes(w);
  const auto f_osc = oscillation_frequency(w, delta_ez);
  const auto alpha = cumulative_trapezoid(f_osc, dt);

  // h(t) = g(t) exp(i 2 pi a(t)); the integrand is h*(t) h(t').
  std::vector<Complex> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    double jdot;
    if (k == 0) {
      jdot = (j[1] - j[0]) / dt;
    } else if (k + 1 == n) {
      jdot = (j[n - 1] - j[n - 2]) / dt;
    } else {
      jdot = (j[k + 1] - j[k - 1]) / (2.0 * dt);
    }
    const double g = -delta_ez * jdot / (kTwoPi * f_osc[k] * f_osc[k]);
    h[k] = g * std::polar(1.0, kTwoPi * alpha[k]);
  }

  // inner(t_k) = trapezoid of h over [0, t_k]; outer trapezoid of conj(h)*inner.
  Complex inner = 0.0;
  Complex outer = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) inner += 0.5 * dt * (h[k - 1] + h[k]);
    const double weight = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    outer += weight * std::conj(h[k]) * inner;
  }
  outer *= dt;
  return 4.0 * kPi * kPi * outer.imag();
}

InfidelityTerms infidelity_terms(const Waveform& w, const SystemParams& p, PhaseAngles angles) {
  InfidelityTerms t;
  const double t_gate = w.duration();
  t.epsilon = epsilon_phase_integral(w, p.delta_ez);
  t.delta_phi_j = kPi - kTwoPi * pulse_area(w);
  t.delta_phi = 0.5 * wrap_angle(angles.theta1 + angles.theta2 - kPi - 2.0 * kTwoPi * p.ez * t_gate);
  const double swap_phase = kTwoPi * trapezoid(oscillation_frequency(w, p.delta_ez), w.dt());
  t.delta_theta = 0.5 * wrap_angle(angles.theta2 - angles.theta1 - swap_phase);
  t.magnus2_delta = magnus2_delta(w, p.delta_ez);
  return t;
}

double analytic_infidelity(const InfidelityTerms& t, bool include_magnus2) {
  const double theta = t.delta_theta + (include_magnus2 ? kMagnusWeight * t.magnus2_delta : 0.0);
  return 0.4 * (t.epsilon + 2.0 * t.delta_phi_j * t.delta_phi_j + t.delta_phi * t.delta_phi +
                theta * theta);
}

double analytic_infidelity(const Waveform& w, const SystemParams& p, PhaseAngles angles,
                           bool include_magnus2) {
  return analytic_infidelity(infidelity_terms(w, p, angles), include_magnus2);
}

FidelityReport cz_fidelity_from_unitary(const Unitary4& u, const Waveform& w, const SystemParams& p,
                                        PhaseCalibration calibration) {
  const double t_gate = w.duration();
  PhaseAngles rot = calibration == PhaseCalibration::Operator
                        ? calibrate_phases_operator(to_rotating_frame(u, p.ez, t_gate))
                        : calibrate_phases_first_order(w, p.delta_ez);
  // Lab-frame angles also undo the common Zeeman rotation.
  const double frame = kTwoPi * p.ez * t_gate;
  const PhaseAngles angles{wrap_angle(rot.theta1 + frame), wrap_angle(rot.theta2 + frame)};

  FidelityReport r;
  r.theta1 = angles.theta1;
  r.theta2 = angles.theta2;
  r.fidelity = avg_gate_fidelity(cz_gate(), virtual_z(angles.theta1, angles.theta2) * u);
  r.epsilon_simulated = std::norm(u(2, 1));
  r.terms = infidelity_terms(w, p, angles);
  r.epsilon_spectral = epsilon_spectral(w, p.delta_ez);
  r.analytic_infidelity = analytic_infidelity(r.terms);
  return r;
}

FidelityReport cz_fidelity(const Waveform& w, const SystemParams& p, PhaseCalibration calibration) {
  return cz_fidelity_from_unitary(propagate(w, p), w, p, calibration);
}

void to_json(nlohmann::json& j, const InfidelityTerms& t) {
  j = nlohmann::json{{"epsilon", t.epsilon},
                     {"delta_phi_j", t.delta_phi_j},
                     {"delta_phi", t.delta_phi},
                     {"delta_theta", t.delta_theta},
                     {"magnus2_delta", t.magnus2_delta}};
}

void to_json(nlohmann::json& j, const FidelityReport& r) {
  j = nlohmann::json{{"fidelity", r.fidelity},
                     {"infidelity", r.infidelity()},
                     {"infidelity_terms", r.terms},
                     {"theta1", r.theta1},
                     {"theta2", r.theta2},
                     {"epsilon_simulated", r.epsilon_simulated},
                     {"epsilon_spectral", r.epsilon_spectral},
                     {"analytic_infidelity", r.analytic_infidelity}};
}

}  // namespace dlr
