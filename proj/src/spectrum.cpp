#include "jcdiscord/spectrum.hpp"

#include "jcdiscord/gqd.hpp"
#include "jcdiscord/table.hpp"

#include <fftw3.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>

namespace jcd {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

struct PlanDestroy {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

void validate(const TimeSeries& s) {
  if (s.values.size() < 2 || s.t_values.size() != s.values.size()) {
    throw std::invalid_argument("time series needs at least two (t, value) samples");
  }
  const double dt = s.dt();
  if (!(dt > 0.0)) throw std::invalid_argument("time series must be strictly increasing");
  if (s.t_values.front() != 0.0) throw std::invalid_argument("time series must start at t = 0");
  const double tol = 1e-12 * s.t_max();
  for (std::size_t i = 0; i < s.t_values.size(); ++i) {
    if (std::abs(s.t_values[i] - dt * static_cast<double>(i)) > tol) {
      throw std::invalid_argument("time series is not uniformly spaced");
    }
  }
}

}  // namespace

TimeSeries sample_series(const SystemParams& p, double t_max, std::size_t n_samples) {
  auto s = TimeSeries::sample([&p](double t) { return gqd_abc_closed(p, t).value; }, t_max, n_samples);
  s.params = p;
  return s;
}

SpectrumResult fourier(const TimeSeries& series) {
  validate(series);
  const std::size_t n = series.size();
  // omega_k t_j = 2 pi k j / (n - 1): a length-(n-1) DFT plus the endpoint
  // sample, whose phase e^{i 2 pi k} is 1.
  const std::size_t m = n - 1;
  const std::size_t bins = m / 2 + 1;

  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * std::max<std::size_t>(m, 1))));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  std::unique_ptr<fftw_plan_s, PlanDestroy> plan;
  {
    std::lock_guard lock(planner_mutex());
    // FFTW_ESTIMATE keeps the chosen algorithm, and so the rounding, fixed
    // from run to run.
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(m), in.get(), out.get(), FFTW_ESTIMATE));
  }
  if (!plan) throw std::runtime_error("fftw: could not create plan");

  for (std::size_t j = 0; j < m; ++j) in.get()[j] = series.values[j];
  in.get()[0] *= 0.5;
  fftw_execute(plan.get());

  const double endpoint = 0.5 * series.values.back();
  const double scale = series.dt() / std::sqrt(2.0 * std::numbers::pi);
  const double t_max = series.t_max();

  SpectrumResult r;
  r.window = t_max;
  r.omega_grid.resize(bins);
  r.magnitudes.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    r.omega_grid[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / t_max;
    const std::complex<double> rk(out.get()[k][0] + endpoint, out.get()[k][1]);
    r.magnitudes[k] = scale * std::abs(rk);
  }
  return r;
}

std::vector<Peak> detect_peaks(const SpectrumResult& spectrum, const PeakOptions& options) {
  if (!(options.threshold_fraction > 0.0 && options.threshold_fraction < 1.0)) {
    throw std::invalid_argument("threshold_fraction must lie in (0, 1)");
  }
  const auto& mag = spectrum.magnitudes;
  const std::size_t bins = mag.size();
  constexpr std::size_t first_bin = 2;  // omega < 2 * (2 pi / T) is DC
  if (bins < first_bin + 2) return {};

  const double global = *std::max_element(mag.begin() + first_bin, mag.end());
  if (!(global > 0.0)) return {};
  const double floor = options.threshold_fraction * global;
  const std::size_t sep = std::max<std::size_t>(options.min_separation_bins, 1);

  std::vector<std::size_t> candidates;
  for (std::size_t k = first_bin; k + 1 < bins; ++k) {
    if (!(mag[k] > mag[k - 1] && mag[k] >= mag[k + 1] && mag[k] >= floor)) continue;
    double side = 0.0;
    if (k >= sep) side = std::max(side, mag[k - sep]);
    if (k + sep < bins) side = std::max(side, mag[k + sep]);
    if (mag[k] < options.min_sharpness * side) continue;
    candidates.push_back(k);
  }

  // Tallest first; later candidates within `sep` bins of an accepted one merge into it.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&mag](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  std::vector<std::size_t> accepted;
  for (auto k : candidates) {
    const bool near = std::any_of(accepted.begin(), accepted.end(), [&](std::size_t a) {
      return (a > k ? a - k : k - a) < sep;
    });
    if (!near) accepted.push_back(k);
  }
  std::sort(accepted.begin(), accepted.end());

  const double width = spectrum.bin_width();
  std::vector<Peak> peaks;
  for (auto k : accepted) {
    Peak pk{spectrum.omega_grid[k], mag[k]};
    if (mag[k - 1] > 0.0 && mag[k + 1] > 0.0) {
      const double l = std::log(mag[k - 1]), c = std::log(mag[k]), r = std::log(mag[k + 1]);
      const double curvature = l - 2.0 * c + r;
      if (curvature < 0.0) {
        const double delta = 0.5 * (l - r) / curvature;
        pk.omega += delta * width;
        pk.height = std::exp(c - 0.25 * (l - r) * delta);
      }
    }
    peaks.push_back(pk);
  }
  return peaks;
}

std::vector<Tone> predicted_tones(const SystemParams& p) {
  const double c2 = std::cos(p.alpha()) * std::cos(p.alpha());
  const double s2 = std::sin(p.alpha()) * std::sin(p.alpha());
  const double upper = p.rabi_upper();
  const double lower = p.rabi_lower();
  const std::vector<Tone> raw{
      {2.0 * (upper - lower), c2 * s2},
      {4.0 * lower, 0.5 * s2 * s2},
      {4.0 * upper, 0.5 * c2 * c2},
      {2.0 * (upper + lower), c2 * s2},
  };
  // cos^2 / sin^2 of the boundary angles are not exactly 0 in floating point.
  constexpr double negligible = 1e-20;
  constexpr double coincident = 1e-12;

  std::vector<Tone> tones;
  for (const auto& tone : raw) {
    if (tone.amplitude <= negligible || tone.omega <= coincident) continue;
    auto same = std::find_if(tones.begin(), tones.end(),
                             [&](const Tone& t) { return std::abs(t.omega - tone.omega) <= coincident; });
    if (same != tones.end()) {
      same->amplitude += tone.amplitude;
    } else {
      tones.push_back(tone);
    }
  }
  std::sort(tones.begin(), tones.end(), [](const Tone& a, const Tone& b) { return a.omega < b.omega; });
  return tones;
}

std::vector<double> predicted_frequencies(const SystemParams& p) {
  std::vector<double> out;
  for (const auto& tone : predicted_tones(p)) out.push_back(tone.omega);
  return out;
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& spectrum) {
  Table table;
  table.columns = {"omega", "magnitude"};
  for (std::size_t k = 0; k < spectrum.omega_grid.size(); ++k) {
    table.add_row({spectrum.omega_grid[k], spectrum.magnitudes[k]});
  }
  table.write_csv(out);
}

void write_peaks_json(std::ostream& out, const SystemParams& p, double t_max, std::size_t n_samples,
                      const std::vector<Peak>& peaks) {
  nlohmann::ordered_json doc;
  doc["params"] = {{"alpha", p.alpha()}, {"n", p.n()},       {"g", p.g()},
                   {"nu", p.nu()},       {"omega", p.omega()}, {"t_max", t_max},
                   {"samples", n_samples}};
  doc["peaks"] = nlohmann::ordered_json::array();
  for (const auto& pk : peaks) doc["peaks"].push_back({{"omega", pk.omega}, {"height", pk.height}});
  out << doc.dump(2) << '\n';
}

}  // namespace jcd
