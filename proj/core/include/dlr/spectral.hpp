#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "dlr/shaping.hpp"
#include "dlr/waveforms.hpp"

namespace dlr {

/// Finite-duration Fourier transform S(f) = int J(t) exp(-i 2 pi f t) dt
/// sampled at `freqs` (GHz). Values are in GHz*ns (dimensionless).
struct Spectrum {
  std::vector<double> freqs;
  std::vector<Complex> values;
};

/// Uniform grid f_min, f_min + df, ... up to and including f_max.
std::vector<double> frequency_grid(double f_min, double f_max, double df);

/// Trapezoidal quadrature of the Fourier integral at a single frequency.
Complex fourier_at(const Waveform& w, double f);

Spectrum fourier(const Waveform& w, std::span<const double> freqs);

/// |1 + exp(-i 2 pi f t_d)|, the spectral factor a single delayed replica
/// multiplies onto the base spectrum.
double dlr_envelope_factor(double f, double t_d);

/// Odd multiples of 1/(2 t_d) up to f_max. Dynamic plans raise Unsupported.
std::vector<double> notch_frequencies(const DlrPlan& plan, double f_max);

/// Power in dB relative to a reference magnitude: 10 log10(|v|^2 / ref^2).
double power_db(Complex value, double reference_magnitude);

/// Two-sided signal bandwidth at a power threshold (dB, <= 0) below the
/// spectral peak.
///
/// The spectrum must cover f >= 0 with a spacing of at most 1 MHz. The
/// one-sided edge is the smallest sampled frequency beyond which |S|^2
/// stays below peak * 10^(threshold/10) up to the end of the grid; side
/// lobes that dip under the threshold and re-cross it do not end the band.
/// The result is twice that edge (the band spans -edge..edge).
double bandwidth_at_threshold(const Spectrum& s, double threshold_db);

using SpectrumFn = std::function<Complex(double)>;

/// Zero-order-hold spectrum of a sampled signal: the sinc envelope times
/// the alias sum over k in [-k_terms, k_terms]. k_terms = 1 keeps the
/// baseband and the first alias on each side.
Complex sampled_spectrum(const SpectrumFn& s, double f_samp, double f, int k_terms = 1);

/// CSV with header freq_GHz,re,im,abs_db; dB is relative to the largest
/// magnitude in the spectrum.
void write_csv(std::ostream& os, const Spectrum& s);

}  // namespace dlr
