#include "dlr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "dlr/errors.hpp"
#include "dlr/io.hpp"

namespace dlr {

std::vector<double> frequency_grid(double f_min, double f_max, double df) {
  if (!(df > 0.0) || !(f_max >= f_min)) throw InvalidParameter("invalid frequency grid");
  const auto n = static_cast<std::size_t>(std::floor((f_max - f_min) / df + 1e-9)) + 1;
  std::vector<double> f(n);
  // Rounded to 1e-12 GHz so decimal grids print without representation noise.
  for (std::size_t k = 0; k < n; ++k) {
    f[k] = std::round((f_min + static_cast<double>(k) * df) * 1e12) / 1e12;
  }
  return f;
}

Complex fourier_at(const Waveform& w, double f) {
  if (!std::isfinite(f)) throw InvalidParameter("frequency must be finite");
  const auto& s = w.samples();
  const std::size_t n = s.size();
  if (n < 2) return {0.0, 0.0};
  const double dt = w.dt();
  const Complex rot = std::polar(1.0, -kTwoPi * f * dt);
  // The rotating phasor is re-seeded periodically to bound rounding drift.
  constexpr std::size_t kResync = 256;
  Complex acc = 0.0;
  Complex phasor;
  for (std::size_t k = 0; k < n; ++k) {
    if (k % kResync == 0) {
      phasor = std::polar(1.0, -kTwoPi * f * w.time(k));
    } else {
      phasor *= rot;
    }
    const double weight = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    acc += weight * s[k] * phasor;
  }
  return acc * dt;
}

Spectrum fourier(const Waveform& w, std::span<const double> freqs) {
  Spectrum out;
  out.freqs.assign(freqs.begin(), freqs.end());
  out.values.resize(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) out.values[i] = fourier_at(w, freqs[i]);
  return out;
}

double dlr_envelope_factor(double f, double t_d) {
  // |1 + e^{-i x}| = 2 |cos(x/2)|, written so odd multiples give exact zeros
  // up to the cosine's own rounding.
  return 2.0 * std::abs(std::cos(kPi * f * t_d));
}

std::vector<double> notch_frequencies(const DlrPlan& plan, double f_max) {
  if (!plan.is_scalar()) throw Unsupported("dynamic DLR plans have no single notch family");
  const double t_d = plan.scalar_t_d();
  if (!(t_d > 0.0)) throw InvalidParameter("DLR delay must be positive");
  const double base = 0.5 / t_d;
  std::vector<double> out;
  for (int k = 1;; k += 2) {
    const double f = k * base;
    if (f > f_max * (1.0 + 1e-12)) break;
    out.push_back(f);
  }
  return out;
}

double power_db(Complex value, double reference_magnitude) {
  const double ratio = std::norm(value) / (reference_magnitude * reference_magnitude);
  return 10.0 * std::log10(ratio);
}

double bandwidth_at_threshold(const Spectrum& s, double threshold_db) {
  if (s.freqs.size() != s.values.size() || s.freqs.size() < 2) {
    throw InvalidParameter("spectrum needs matching frequency and value arrays");
  }
  if (threshold_db > 0.0) throw InvalidParameter("threshold must be <= 0 dB");
  double peak = 0.0;
  for (const auto& v : s.values) peak = std::max(peak, std::norm(v));
  const double limit = peak * std::pow(10.0, threshold_db / 10.0);
  // Scan from the top of the grid down to the last sample at or above the
  // limit (only f >= 0 is considered).
  std::size_t last_above = s.freqs.size();
  for (std::size_t i = s.freqs.size(); i-- > 0;) {
    if (s.freqs[i] < 0.0) continue;
    if (std::norm(s.values[i]) >= limit) {
      last_above = i;
      break;
    }
  }
  if (last_above == s.freqs.size()) throw NotFound("no sample reaches the threshold");
  if (last_above + 1 == s.freqs.size()) {
    throw NotFound("spectrum does not stay below the threshold within the grid");
  }
  // Linear interpolation of the dB curve between the bracketing samples.
  const double f0 = s.freqs[last_above];
  const double f1 = s.freqs[last_above + 1];
  const double p0 = std::norm(s.values[last_above]);
  const double p1 = std::norm(s.values[last_above + 1]);
  double edge = f0;
  if (p0 > limit && p1 > 0.0) {
    const double d0 = 10.0 * std::log10(p0 / limit);
    const double d1 = 10.0 * std::log10(p1 / limit);
    edge = f0 + (f1 - f0) * d0 / (d0 - d1);
  }
  return 2.0 * std::max(edge, 0.0);
}

Complex sampled_spectrum(const SpectrumFn& s, double f_samp, double f, int k_terms) {
  if (!(f_samp > 0.0)) throw InvalidParameter("sampling frequency must be positive");
  if (k_terms < 1) throw InvalidParameter("k_terms must be at least 1");
  const double x = kPi * f / f_samp;
  const double envelope = x == 0.0 ? 1.0 : std::sin(x) / x;
  Complex acc = 0.0;
  for (int k = -k_terms; k <= k_terms; ++k) acc += s(f - f_samp * k);
  return envelope * acc;
}

void write_csv(std::ostream& os, const Spectrum& s) {
  double peak = 0.0;
  for (const auto& v : s.values) peak = std::max(peak, std::abs(v));
  os << "freq_GHz,re,im,abs_db\n";
  for (std::size_t i = 0; i < s.freqs.size(); ++i) {
    const double db = peak > 0.0 && s.values[i] != 0.0 ? power_db(s.values[i], peak)
                                                         : -std::numeric_limits<double>::infinity();
    os << format_double(s.freqs[i]) << ',' << format_double(s.values[i].real()) << ','
       << format_double(s.values[i].imag()) << ',' << format_double(db) << '\n';
  }
}

}  // namespace dlr
