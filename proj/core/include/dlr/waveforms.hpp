#pragma once

// Window functions, parametric pulse descriptions and their sampling onto
// uniform time grids.
//
// Units: times in ns, frequencies in GHz. A pulse value J is a cycle
// frequency, so 2*pi*J*dt is the phase (rad) accumulated over dt.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dlr {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Default simulation step (ns).
inline constexpr double kDefaultDt = 1e-3;

/// Uniformly sampled complex control signal J(t).
///
/// Sample k sits at time t0 + k*dt. The pulse spans (size()-1)*dt, so the
/// trapezoidal rule over the samples integrates it exactly for piecewise
/// linear signals.
class Waveform {
 public:
  Waveform(std::vector<Complex> samples, double dt, double t0 = 0.0);

  const std::vector<Complex>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double dt() const { return dt_; }
  double t0() const { return t0_; }
  double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }
  double duration() const { return static_cast<double>(samples_.size() - 1) * dt_; }
  const Complex& operator[](std::size_t k) const { return samples_[k]; }

  /// True when every imaginary part is exactly zero.
  bool is_real() const;
  std::vector<double> real_part() const;

  Waveform scaled(double factor) const;

 private:
  std::vector<Complex> samples_;
  double dt_;
  double t0_;
};

/// Trapezoidal integral of the samples.
Complex integrate(const Waveform& w);
double trapezoid(std::span<const double> y, double dt);

/// Trapezoidal integral of |J(t)|; this is the quantity whose 2*pi multiple
/// is the accumulated CPHASE angle.
double pulse_area(const Waveform& w);

struct RaisedCosine {};
struct Hamming {};
struct Kaiser {
  double beta = 6.14;
};
struct Square {};

using WindowKind = std::variant<RaisedCosine, Hamming, Kaiser, Square>;

std::string window_name(const WindowKind& kind);

/// Zeroth-order modified Bessel function of the first kind, power series.
double bessel_i0(double x);

/// Unit-peak window on [0, t_gate], zero outside.
double window_value(const WindowKind& kind, double t, double t_gate);

/// Analytic time derivative of window_value. Square has no classical
/// derivative and raises InvalidParameter.
double window_derivative(const WindowKind& kind, double t, double t_gate);

// Shaping variants. DlrAverage, DlrDynamic and DragAverage derive their
// notch from f_osc(t) and therefore need the qubit splitting.
struct Plain {};
struct DlrStatic {
  double t_d;
};
struct DlrAverage {
  double delta_ez;
};
struct DlrDynamic {
  double delta_ez;
};
struct Drag {
  double beta;
};
struct DragAverage {
  double delta_ez;
};

using Shaping = std::variant<Plain, DlrStatic, DlrAverage, DlrDynamic, Drag, DragAverage>;

std::string shaping_name(const Shaping& shaping);

struct PulseSpec {
  WindowKind window = RaisedCosine{};
  double t_gate = 50.0;
  double amplitude = 1.0;  // GHz, multiplies the unit-scale envelope
  Shaping shaping = Plain{};
};

void validate(const PulseSpec& spec);

/// Continuous envelope: a callable plus its support [0, duration].
struct Envelope {
  std::function<Complex(double)> eval;
  double duration = 0.0;

  Complex operator()(double t) const { return eval(t); }
};

Envelope window_envelope(const WindowKind& kind, double duration);

/// Number of steps used to resolve a pulse of length t_gate with a step no
/// larger than dt. The effective step is t_gate / steps.
std::size_t grid_steps(double t_gate, double dt);

/// Samples amplitude * env(t) on the grid k * (duration/steps).
Waveform sample(const Envelope& env, double dt, double amplitude = 1.0);

/// Evaluates the pulse described by spec on a uniform grid whose step does
/// not exceed dt (the step is shrunk so the grid ends exactly at t_gate).
Waveform materialize(const PulseSpec& spec, double dt = kDefaultDt);

/// Rescales spec.amplitude so that 2*pi * integral |J| dt = pi on the
/// materialized grid.
PulseSpec calibrate_amplitude(const PulseSpec& spec, double dt = kDefaultDt);

/// Rescales an already sampled waveform to pi area.
Waveform calibrate_waveform(const Waveform& w);

}  // namespace dlr
