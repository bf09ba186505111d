#include "dlr/waveforms.hpp"

#include <cmath>
#include <sstream>

#include "dlr/errors.hpp"
#include "dlr/shaping.hpp"

namespace dlr {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Waveform::Waveform(std::vector<Complex> samples, double dt, double t0)
    : samples_(std::move(samples)), dt_(dt), t0_(t0) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw InvalidParameter("waveform dt must be positive");
  if (samples_.empty()) throw InvalidParameter("waveform needs at least one sample");
}

bool Waveform::is_real() const {
  for (const auto& s : samples_) {
    if (s.imag() != 0.0) return false;
  }
  return true;
}

std::vector<double> Waveform::real_part() const {
  std::vector<double> out(samples_.size());
  for (std::size_t k = 0; k < samples_.size(); ++k) out[k] = samples_[k].real();
  return out;
}

Waveform Waveform::scaled(double factor) const {
  std::vector<Complex> out(samples_);
  for (auto& s : out) s *= factor;
  return Waveform(std::move(out), dt_, t0_);
}

Complex integrate(const Waveform& w) {
  const auto& s = w.samples();
  if (s.size() < 2) return {0.0, 0.0};
  Complex acc = 0.5 * (s.front() + s.back());
  for (std::size_t k = 1; k + 1 < s.size(); ++k) acc += s[k];
  return acc * w.dt();
}

double trapezoid(std::span<const double> y, double dt) {
  if (y.size() < 2) return 0.0;
  double acc = 0.5 * (y.front() + y.back());
  for (std::size_t k = 1; k + 1 < y.size(); ++k) acc += y[k];
  return acc * dt;
}

double pulse_area(const Waveform& w) {
  const auto& s = w.samples();
  if (s.size() < 2) return 0.0;
  double acc = 0.5 * (std::abs(s.front()) + std::abs(s.back()));
  for (std::size_t k = 1; k + 1 < s.size(); ++k) acc += std::abs(s[k]);
  return acc * w.dt();
}

std::string window_name(const WindowKind& kind) {
  return std::visit(Overloaded{
                        [](const RaisedCosine&) { return std::string("raised-cosine"); },
                        [](const Hamming&) { return std::string("hamming"); },
                        [](const Kaiser& k) {
                          std::ostringstream os;
                          os << "kaiser(" << k.beta << ")";
                          return os.str();
                        },
                        [](const Square&) { return std::string("square"); },
                    },
                    kind);
}

std::string shaping_name(const Shaping& shaping) {
  return std::visit(Overloaded{
                        [](const Plain&) { return std::string("plain"); },
                        [](const DlrStatic&) { return std::string("dlr-static"); },
                        [](const DlrAverage&) { return std::string("dlr-average"); },
                        [](const DlrDynamic&) { return std::string("dlr-dynamic"); },
                        [](const Drag&) { return std::string("drag"); },
                        [](const DragAverage&) { return std::string("drag-average"); },
                    },
                    shaping);
}

double bessel_i0(double x) {
  // sum_k ((x/2)^2)^k / (k!)^2
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

namespace {

// I1(x)/x, finite at x = 0.
double bessel_i1_over_x(double x) {
  const double q = 0.25 * x * x;
  double term = 0.5;
  double sum = 0.5;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

void check_window_args(const WindowKind& kind, double t_gate) {
  if (!(t_gate > 0.0)) throw InvalidParameter("t_gate must be positive");
  if (const auto* k = std::get_if<Kaiser>(&kind); k != nullptr && !(k->beta >= 0.0)) {
    throw InvalidParameter("Kaiser beta must be non-negative");
  }
}

}  // namespace

double window_value(const WindowKind& kind, double t, double t_gate) {
  check_window_args(kind, t_gate);
  if (t < 0.0 || t > t_gate) return 0.0;
  const double phase = kTwoPi * t / t_gate;
  return std::visit(Overloaded{
                        [&](const RaisedCosine&) { return 0.5 * (1.0 - std::cos(phase)); },
                        [&](const Hamming&) { return 0.54 - 0.46 * std::cos(phase); },
                        [&](const Kaiser& k) {
                          const double u = 2.0 * t / t_gate - 1.0;
                          const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
                          return bessel_i0(kPi * k.beta * s) / bessel_i0(kPi * k.beta);
                        },
                        [&](const Square&) { return 1.0; },
                    },
                    kind);
}

double window_derivative(const WindowKind& kind, double t, double t_gate) {
  check_window_args(kind, t_gate);
  if (std::holds_alternative<Square>(kind)) {
    throw InvalidParameter("square window has no classical derivative");
  }
  if (t < 0.0 || t > t_gate) return 0.0;
  const double omega = kTwoPi / t_gate;
  return std::visit(Overloaded{
                        [&](const RaisedCosine&) { return 0.5 * omega * std::sin(omega * t); },
                        [&](const Hamming&) { return 0.46 * omega * std::sin(omega * t); },
                        [&](const Kaiser& k) {
                          const double u = 2.0 * t / t_gate - 1.0;
                          const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
                          const double pb = kPi * k.beta;
                          return bessel_i1_over_x(pb * s) * pb * pb * (-u) * (2.0 / t_gate) /
                                 bessel_i0(pb);
                        },
                        [&](const Square&) { return 0.0; },
                    },
                    kind);
}

void validate(const PulseSpec& spec) {
  check_window_args(spec.window, spec.t_gate);
  if (!(spec.amplitude >= 0.0)) throw InvalidParameter("amplitude must be non-negative");
  std::visit(Overloaded{
                 [](const Plain&) {},
                 [&](const DlrStatic& s) {
                   if (!(s.t_d > 0.0 && s.t_d < spec.t_gate)) {
                     throw InvalidParameter("DLR delay must satisfy 0 < t_d < t_gate");
                   }
                 },
                 [](const DlrAverage& s) {
                   if (!(s.delta_ez > 0.0)) throw InvalidParameter("delta_ez must be positive");
                 },
                 [](const DlrDynamic& s) {
                   if (!(s.delta_ez > 0.0)) throw InvalidParameter("delta_ez must be positive");
                 },
                 [&](const Drag&) {
                   if (std::holds_alternative<Square>(spec.window)) {
                     throw InvalidParameter("DRAG needs a differentiable window");
                   }
                 },
                 [&](const DragAverage& s) {
                   if (std::holds_alternative<Square>(spec.window)) {
                     throw InvalidParameter("DRAG needs a differentiable window");
                   }
                   if (!(s.delta_ez > 0.0)) throw InvalidParameter("delta_ez must be positive");
                 },
             },
             spec.shaping);
}

Envelope window_envelope(const WindowKind& kind, double duration) {
  check_window_args(kind, duration);
  return Envelope{[kind, duration](double t) { return Complex(window_value(kind, t, duration), 0.0); },
                  duration};
}

std::size_t grid_steps(double t_gate, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
  if (!(t_gate > 0.0)) throw InvalidParameter("t_gate must be positive");
  const double ratio = t_gate / dt;
  const auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
  return std::max<std::size_t>(steps, 1);
}

Waveform sample(const Envelope& env, double dt, double amplitude) {
  const std::size_t steps = grid_steps(env.duration, dt);
  const double h = env.duration / static_cast<double>(steps);
  std::vector<Complex> out(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    // The last point is pinned to the exact end of the support.
    const double t = (k == steps) ? env.duration : static_cast<double>(k) * h;
    out[k] = amplitude * env(t);
  }
  return Waveform(std::move(out), h);
}

Waveform materialize(const PulseSpec& spec, double dt) {
  validate(spec);
  if (!(dt > 0.0) || dt > spec.t_gate / 100.0 * (1.0 + 1e-12)) {
    throw InvalidParameter("dt must be positive and at most t_gate/100");
  }
  const double t_gate = spec.t_gate;
  const double amp = spec.amplitude;
  return std::visit(
      Overloaded{
          [&](const Plain&) { return sample(window_envelope(spec.window, t_gate), dt, amp); },
          [&](const DlrStatic& s) {
            return sample(dlr_static_pulse(spec.window, t_gate, s.t_d), dt, amp);
          },
          [&](const DlrAverage& s) {
            const double t_d = 0.5 / average_notch_frequency(t_gate, s.delta_ez, dt);
            return sample(dlr_static_pulse(spec.window, t_gate, t_d), dt, amp);
          },
          [&](const DlrDynamic& s) {
            return dlr_dynamic_envelope(spec.window, t_gate, s.delta_ez, dt).scaled(amp);
          },
          [&](const Drag& s) { return sample(drag(spec.window, t_gate, s.beta), dt, amp); },
          [&](const DragAverage& s) {
            const double beta = drag_beta_for_notch(average_notch_frequency(t_gate, s.delta_ez, dt));
            return sample(drag(spec.window, t_gate, beta), dt, amp);
          },
      },
      spec.shaping);
}

PulseSpec calibrate_amplitude(const PulseSpec& spec, double dt) {
  PulseSpec unit = spec;
  unit.amplitude = 1.0;
  const double area = pulse_area(materialize(unit, dt));
  if (!(area > 0.0) || !std::isfinite(area)) throw DegeneratePulse("envelope integrates to zero");
  unit.amplitude = 0.5 / area;
  return unit;
}

Waveform calibrate_waveform(const Waveform& w) {
  const double area = pulse_area(w);
  if (!(area > 0.0) || !std::isfinite(area)) throw DegeneratePulse("envelope integrates to zero");
  return w.scaled(0.5 / area);
}

}  // namespace dlr
