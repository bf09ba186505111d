#include "dlr/sampling.hpp"

#include <cmath>

#include "dlr/errors.hpp"

namespace dlr {

void validate(const SamplingConfig& cfg) {
  if (!(cfg.f_samp > 0.0) || !std::isfinite(cfg.f_samp)) {
    throw InvalidParameter("f_samp must be positive");
  }
  if (!(cfg.fine_dt > 0.0)) throw InvalidParameter("fine_dt must be positive");
  if (cfg.fine_dt > 1.0 / (20.0 * cfg.f_samp) * (1.0 + 1e-12)) {
    throw InvalidParameter("fine_dt must resolve a hold period with at least 20 points");
  }
}

Complex interpolate(const Waveform& w, double t) {
  const double x = (t - w.t0()) / w.dt();
  const double last = static_cast<double>(w.size() - 1);
  if (x < -1e-9 || x > last + 1e-9) return {0.0, 0.0};
  if (x <= 0.0) return w[0];
  if (x >= last) return w[w.size() - 1];
  const auto k = static_cast<std::size_t>(x);
  const double frac = x - static_cast<double>(k);
  return (1.0 - frac) * w[k] + frac * w[k + 1];
}

std::size_t hold_periods(const Waveform& w, double f_samp) {
  const double periods = w.duration() * f_samp;
  return static_cast<std::size_t>(std::ceil(periods - 1e-9 * std::max(1.0, periods)));
}

Waveform zero_order_hold(const Waveform& w, const SamplingConfig& cfg) {
  validate(cfg);
  const double duration = w.duration();
  const std::size_t periods = hold_periods(w, cfg.f_samp);
  if (periods < 2) throw InvalidParameter("f_samp gives fewer than 2 samples over the pulse");

  const double period = 1.0 / cfg.f_samp;
  const double offset = cfg.point == SamplePoint::Midpoint ? 0.5 * period : 0.0;
  std::vector<Complex> held(periods);
  for (std::size_t k = 0; k < periods; ++k) {
    held[k] = interpolate(w, w.t0() + static_cast<double>(k) * period + offset);
  }

  const std::size_t steps = grid_steps(duration, cfg.fine_dt);
  const double h = duration / static_cast<double>(steps);
  std::vector<Complex> out(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * h;
    // Small tolerance so grid points on a period boundary start the new hold.
    auto k = static_cast<std::size_t>(std::floor(t * cfg.f_samp + 1e-9));
    if (k >= periods) k = periods - 1;
    out[i] = held[k];
  }
  Waveform result(std::move(out), h, w.t0());
  return cfg.recalibrate ? calibrate_waveform(result) : result;
}

double min_sampling_frequency(double delta_ez, double bw_signal) {
  return delta_ez + 0.5 * bw_signal;
}

}  // namespace dlr
