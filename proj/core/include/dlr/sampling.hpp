#pragma once

// Finite sampling rate of the waveform generator: zero-order hold and the
// minimum sampling frequency.

#include "dlr/waveforms.hpp"

namespace dlr {

enum class SamplePoint {
  LeftEdge,  // value at the start of each hold period (DAC behaviour)
  Midpoint,  // value at the middle of each hold period
};

struct SamplingConfig {
  double f_samp = 1.0;         // GHz
  double fine_dt = kDefaultDt;  // ns, grid the staircase is emitted on
  SamplePoint point = SamplePoint::LeftEdge;
  bool recalibrate = false;  // rescale to pi area after holding
};

/// f_samp > 0 and fine_dt <= 1 / (20 f_samp).
void validate(const SamplingConfig& cfg);

/// Value of w at an arbitrary time by linear interpolation; zero outside
/// the sampled support.
Complex interpolate(const Waveform& w, double t);

/// Samples w every 1/f_samp, holds each value for one period and emits the
/// staircase on the fine grid over the original duration. A pulse of length
/// T is covered by ceil(T f_samp) hold periods.
Waveform zero_order_hold(const Waveform& w, const SamplingConfig& cfg);

/// Number of hold periods zero_order_hold uses for w.
std::size_t hold_periods(const Waveform& w, double f_samp);

/// delta_ez + bw_signal / 2.
double min_sampling_frequency(double delta_ez, double bw_signal);

}  // namespace dlr
