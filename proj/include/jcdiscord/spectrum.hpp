#pragma once

#include "jcdiscord/jc_model.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace jcd {

/// Uniformly sampled real signal on [0, t_max], both endpoints included.
struct TimeSeries {
  std::vector<double> t_values;
  std::vector<double> values;
  std::optional<SystemParams> params;

  double t_max() const { return t_values.back(); }
  double dt() const { return t_values[1] - t_values[0]; }
  std::size_t size() const { return values.size(); }

  /// Builds a series from samples of f at n_samples uniform times on
  /// [0, t_max]. Throws std::invalid_argument for t_max <= 0 or n_samples < 2.
  template <class F>
  static TimeSeries sample(F&& f, double t_max, std::size_t n_samples);
};

/// Whole-system discord (atom A measured) sampled on a uniform grid.
TimeSeries sample_series(const SystemParams& p, double t_max, std::size_t n_samples);

struct Peak {
  double omega = 0.0;
  double height = 0.0;
};

/// |F(omega_k)| with F(omega) = (2 pi)^(-1/2) int_0^T f(t) e^{i omega t} dt,
/// evaluated by the trapezoidal rule on omega_k = 2 pi k / T, k = 0..(N-1)/2.
struct SpectrumResult {
  std::vector<double> omega_grid;
  std::vector<double> magnitudes;
  std::vector<Peak> peaks;
  double window = 0.0;

  double bin_width() const { return omega_grid.size() > 1 ? omega_grid[1] - omega_grid[0] : 0.0; }
};

SpectrumResult fourier(const TimeSeries& series);

struct PeakOptions {
  /// Candidates below this fraction of the largest non-DC magnitude are dropped.
  double threshold_fraction = 1e-3;
  /// Candidates closer than this many bins are merged (the taller one wins).
  /// Also the offset at which sharpness is measured.
  std::size_t min_separation_bins = 4;
  /// A candidate must exceed the spectrum min_separation_bins away on both
  /// sides by this factor. Leakage ripples of the rectangular window stay
  /// below ~1.1; isolated tones reach well above 1.3.
  double min_sharpness = 1.25;
};

/// Local maxima outside the DC neighbourhood (omega < 2 bins), filtered by
/// height and sharpness, merged, and refined by a parabola through the log
/// magnitudes of the three surrounding bins. Sorted by omega. A tone weaker
/// than the window leakage of a strong neighbour is not resolved (at the
/// default window this happens for alpha = pi/12 once n >= 5).
std::vector<Peak> detect_peaks(const SpectrumResult& spectrum, const PeakOptions& options = {});

struct Tone {
  double omega = 0.0;
  /// Cosine amplitude of the tone in the whole-system discord signal.
  double amplitude = 0.0;
};

/// Frequencies present in the whole-system discord. Writing
/// P(t) = cos^2(a) cos^2(W+ t) + sin^2(a) sin^2(W0 t) with W+ = g sqrt(n+1),
/// W0 = g sqrt(n), the signal is 4 P (1 - P) = 1 - (c^2 cos 2W+t - s^2 cos 2W0t)^2,
/// which contains cos terms at 4 W+ (c^4/2), 4 W0 (s^4/2) and 2 (W+ -/+ W0)
/// (c^2 s^2 each). Zero-amplitude and zero-frequency tones are dropped and
/// coincident ones merged.
std::vector<Tone> predicted_tones(const SystemParams& p);
std::vector<double> predicted_frequencies(const SystemParams& p);

void write_spectrum_csv(std::ostream& out, const SpectrumResult& spectrum);
void write_peaks_json(std::ostream& out, const SystemParams& p, double t_max, std::size_t n_samples,
                      const std::vector<Peak>& peaks);

template <class F>
TimeSeries TimeSeries::sample(F&& f, double t_max, std::size_t n_samples) {
  if (!(t_max > 0.0)) throw std::invalid_argument("time series: t_max must be positive");
  if (n_samples < 2) throw std::invalid_argument("time series: need at least 2 samples");
  TimeSeries s;
  s.t_values.resize(n_samples);
  s.values.resize(n_samples);
  const double step = t_max / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = i + 1 == n_samples ? t_max : step * static_cast<double>(i);
    s.t_values[i] = t;
    s.values[i] = f(t);
  }
  return s;
}

}  // namespace jcd
