// Acceptance criteria 1-10. One PASS/FAIL line per criterion; exit status is
// nonzero if any criterion fails.

#include "cli.hpp"

#include "jcdiscord/gqd.hpp"
#include "jcdiscord/jc_model.hpp"
#include "jcdiscord/monogamy.hpp"
#include "jcdiscord/spectrum.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace jcd;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0 && elapsed > budget_seconds) {
    o.pass = false;
    char buf[96];
    std::snprintf(buf, sizeof buf, "; over the %.0f s budget", budget_seconds);
    o.detail += buf;
  }
  if (!o.pass) ++failures;
  std::printf("criterion %2d %-28s %s  (%s; %.2f s)\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), elapsed);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Point {
  SystemParams p;
  double t;
};

// alpha in {0, pi/12, pi/6, pi/4}, the given photon numbers, `times` points on [0, 25/g].
std::vector<Point> grid(std::initializer_list<int> ns, std::size_t times) {
  std::vector<Point> out;
  for (double alpha : {0.0, pi / 12, pi / 6, pi / 4}) {
    for (int n : ns) {
      const SystemParams p(alpha, n);
      for (double t : cli::time_grid(25.0 / p.g(), times)) out.push_back({p, t});
    }
  }
  return out;
}

std::vector<Point> standard_grid() { return grid({0, 1, 3}, 500); }

struct Capture {
  int code;
  std::string out;
};

Capture run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, {out, err});
  return {code, out.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);
  while (std::getline(ss, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

Outcome normalization() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> alpha(0.0, pi / 2), g(0.1, 5.0), nu(0.0, 5.0), t(0.0, 100.0);
  std::uniform_int_distribution<int> n(0, 10);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double nu_v = nu(rng);
    const SystemParams p(alpha(rng), n(rng), g(rng), nu_v);
    const auto pop = amplitudes(p, t(rng)).populations();
    worst = std::max(worst, std::abs(pop[0] + pop[1] + pop[2] + pop[3] - 1.0));
  }
  return {worst < 1e-12, fmt("max |sum p - 1| = %.3g over 1e5 draws", worst)};
}

Outcome two_qubit_paths() {
  double worst_bloch = 0.0, worst_vs = 0.0;
  for (const auto& [p, t] : standard_grid()) {
    const double closed = gqd_ab_closed(p, t).value;
    const auto rho = rho_ab(p, t);
    worst_bloch = std::max(worst_bloch, std::abs(closed - gqd_two_qubit(rho).value));
    worst_vs = std::max(worst_vs, std::abs(closed - gqd_qubit_qudit(rho).value));
  }
  return {worst_bloch < 1e-10 && worst_vs < 1e-10,
          fmt("max |closed - Bloch| = %.3g", worst_bloch) + fmt(", max |closed - v/S| = %.3g", worst_vs)};
}

Outcome qubit_qudit_paths() {
  double worst_ac = 0.0, worst_bc = 0.0;
  std::size_t reduced = 0;
  for (const auto& [p, t] : standard_grid()) {
    const auto ac = rho_ac(p, t);
    if (ac.dims[1] == 2) ++reduced;
    worst_ac = std::max(worst_ac, std::abs(gqd_ac_closed(p, t).value - gqd_qubit_qudit(ac).value));
    worst_bc = std::max(worst_bc, std::abs(gqd_bc_closed(p, t).value - gqd_qubit_qudit(rho_bc(p, t)).value));
  }
  return {worst_ac < 1e-10 && worst_bc < 1e-10 && reduced > 0,
          fmt("max |AC| = %.3g", worst_ac) + fmt(", max |BC| = %.3g", worst_bc) +
              fmt(", %.0f points with a 2-level cavity", static_cast<double>(reduced))};
}

Outcome minimization() {
  const auto all = standard_grid();
  double worst_a = 0.0, worst_b = 0.0, min_uz = 1.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < all.size(); i += 30) {
    const auto& [p, t] = all[i];
    const auto rho = rho_abc(p, t);
    const auto a = gqd_measurement_min(rho, kAtomA);
    const auto b = gqd_measurement_min(rho, kAtomB);
    worst_a = std::max(worst_a, std::abs(a.value - gqd_abc_closed(p, t).value));
    worst_b = std::max(worst_b, std::abs(b.value - gqd_b_ac_closed(p, t).value));
    min_uz = std::min({min_uz, std::abs(a.direction->uz()), std::abs(b.direction->uz())});
    ++count;
  }
  return {count == 200 && worst_a < 1e-6 && worst_b < 1e-6 && min_uz > 1 - 1e-6,
          fmt("%.0f points", static_cast<double>(count)) + fmt(", max |A| = %.3g", worst_a) +
              fmt(", max |B| = %.3g", worst_b) + fmt(", min |u_z| = %.15g", min_uz)};
}

Outcome equivalent_two_qubit_method() {
  double worst = 0.0;
  for (const auto& [p, t] : standard_grid()) {
    worst = std::max(worst, std::abs(gqd_two_qubit(equivalent_two_qubit(p, t)).value - gqd_abc_closed(p, t).value));
  }
  return {worst < 1e-10, fmt("max |AX - closed| = %.3g", worst)};
}

Outcome monogamy_check() {
  std::vector<SystemParams> params;
  for (double alpha : {0.0, pi / 12, pi / 6, pi / 4}) {
    for (int n : {0, 1, 3, 5}) params.emplace_back(alpha, n);
  }
  const auto times = cli::time_grid(25.0, 2000);
  const auto result = sweep(params, times);

  double worst_identity = 0.0;
  std::size_t matched = 0;
  for (const auto& r : result.reports) {
    const bool exact = (r.side == MeasuredSide::A && r.branch == MonogamyBranch::branch2) ||
                       (r.side == MeasuredSide::B && r.branch == MonogamyBranch::branch1);
    if (!exact) continue;
    const auto a = amplitudes(r.params, r.t);
    worst_identity = std::max(worst_identity, std::abs(r.residual - 4.0 * a.population(3) * a.population(4)));
    ++matched;
  }
  const auto& s = result.summary;
  return {s.min_residual >= -1e-10 && s.violations == 0 && worst_identity < 1e-12 && matched > 0 &&
              s.max_pipeline_discrepancy < 1e-9,
          fmt("min residual = %.3g", s.min_residual) + fmt(" over %.0f reports", static_cast<double>(s.points)) +
              fmt(", branch identity max err = %.3g", worst_identity) +
              fmt(" on %.0f points", static_cast<double>(matched)) +
              fmt(", pipeline spot checks max diff = %.3g", s.max_pipeline_discrepancy)};
}

Outcome spectrum_peaks() {
  struct Case {
    double alpha;
    int n;
    std::size_t expected;
  };
  std::vector<Case> cases;
  for (int n : {0, 1, 3, 5}) cases.push_back({0.0, n, 1});
  for (double alpha : {pi / 12, pi / 6, pi / 4}) cases.push_back({alpha, 0, 2});
  for (int n : {1, 3}) {
    for (double alpha : {pi / 12, pi / 6, pi / 4}) cases.push_back({alpha, n, 4});
  }

  std::string bad;
  double worst_offset = 0.0;
  for (const auto& c : cases) {
    const SystemParams p(c.alpha, c.n);
    const auto spectrum = fourier(sample_series(p, 200.0, 16384));
    const auto peaks = detect_peaks(spectrum);
    const auto predicted = predicted_frequencies(p);
    bool ok = peaks.size() == c.expected && predicted.size() == c.expected;
    for (std::size_t i = 0; ok && i < peaks.size(); ++i) {
      const double offset = std::abs(peaks[i].omega - predicted[i]) / spectrum.bin_width();
      worst_offset = std::max(worst_offset, offset);
      ok = offset < 1.0;
    }
    if (!ok) {
      bad += fmt(" [alpha=%.4f", c.alpha) + fmt(" n=%.0f", c.n) + fmt(" peaks=%.0f]", static_cast<double>(peaks.size()));
    }
  }
  std::string n3;
  for (const auto& pk : detect_peaks(fourier(sample_series(SystemParams(pi / 4, 3), 200.0, 16384)))) {
    n3 += fmt(" %.3f", pk.omega);
  }
  return {bad.empty(), fmt("%.0f cases, 1/2/4 peaks as required", static_cast<double>(cases.size())) +
                           ", n=3 alpha=pi/4 peaks at" + n3 +
                           fmt(", worst location offset %.3f bins", worst_offset) + (bad.empty() ? "" : "; failing:" + bad)};
}

Outcome figures() {
  std::string problems;
  double worst_sin = 0.0;
  double lo = 1e300, hi = -1e300;
  for (const char* variant : {"n0", "n3"}) {
    const double rate = variant[1] == '3' ? 2.0 : 1.0;  // g sqrt(n+1)
    for (const char* figure : {"F1", "F2", "F3", "F4"}) {
      const auto run = run_cli({"figure", "--figure", figure, "--variant", variant});
      if (run.code != 0) problems += std::string(" ") + figure + variant + " exit";
      const auto rows = csv_rows(run.out);
      const bool zero_curve = figure[1] == '1' || figure[1] == '3';
      for (const auto& row : rows) {
        for (std::size_t c = 1; c < row.size(); ++c) {
          lo = std::min(lo, row[c]);
          hi = std::max(hi, row[c]);
        }
        const double alpha0 = row[4];
        if (zero_curve && alpha0 != 0.0) problems += std::string(" ") + figure + variant + " alpha=0 nonzero";
        if (!zero_curve) worst_sin = std::max(worst_sin, std::abs(alpha0 - std::pow(std::sin(2 * rate * row[0]), 2)));
        if (!problems.empty()) break;
      }
    }
  }

  // Zero-concurrence intervals of the alpha = pi/12, n = 3 two-atom state.
  // For this X state C = 2 max(0, |x1 x2| - |x3 x4|).
  const SystemParams p(pi / 12, 3);
  std::size_t intervals = 0, weak = 0;
  double smallest_peak = 1e300;
  bool inside = false;
  double interval_max = 0.0;
  for (double t : cli::time_grid(25.0, 2000)) {
    const auto a = amplitudes(p, t);
    const double c = 2.0 * std::max(0.0, std::abs(a.x[0] * a.x[1]) - std::abs(a.x[2] * a.x[3]));
    if (c == 0.0) {
      if (!inside) interval_max = 0.0;
      inside = true;
      interval_max = std::max(interval_max, gqd_ab_closed(p, t).value);
    } else if (inside) {
      inside = false;
      ++intervals;
      smallest_peak = std::min(smallest_peak, interval_max);
      if (interval_max <= 1e-3) ++weak;
    }
  }
  if (inside) {
    ++intervals;
    smallest_peak = std::min(smallest_peak, interval_max);
    if (interval_max <= 1e-3) ++weak;
  }

  const bool pass = problems.empty() && worst_sin < 1e-12 && lo >= 0.0 && hi <= 1.0 + 1e-12 && intervals > 0 && weak == 0;
  return {pass, fmt("alpha=0 sin^2 max err = %.3g", worst_sin) + fmt(", range [%.3g", lo) + fmt(", %.15g]", hi) +
                    fmt(", %.0f zero-concurrence intervals", static_cast<double>(intervals)) +
                    fmt(", smallest max D_AB in them = %.3g", smallest_peak) + problems};
}

Outcome amplitude_oracle() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> alpha(0.0, pi / 2), g(0.5, 2.0), nu(0.0, 2.0), t(0.0, 10.0);
  std::uniform_int_distribution<int> n(0, 10);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double nu_v = nu(rng);
    const SystemParams p(alpha(rng), n(rng), g(rng), nu_v);
    const double time = t(rng) / p.g();
    const auto h = oracle::truncated_hamiltonian(p.n(), p.g(), p.nu(), p.omega());
    const auto psi = oracle::integrate_schrodinger(h, {std::cos(p.alpha()), std::sin(p.alpha()), 0.0, 0.0}, time, 2e-4);
    const auto a = amplitudes(p, time);
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a.x[k] - psi[k]));
  }
  return {worst < 1e-8, fmt("max |closed - RK4| = %.3g over 20 parameter sets", worst)};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("gqdjc_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  std::vector<std::vector<std::string>> commands{
      {"evolve", "--alpha", "pi/6", "--n", "3"},
      {"discord", "--path", "all", "--alpha", "pi/12", "--n", "3"},
      {"monogamy"},
      {"spectrum", "--alpha", "pi/4", "--n", "3"},
  };
  for (const char* f : {"F1", "F2", "F3", "F4", "F5"}) {
    for (const char* v : {"n0", "n3"}) commands.push_back({"figure", "--figure", f, "--variant", v});
  }

  std::string mismatches;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("c" + std::to_string(i) + "_" + std::to_string(rep) + ".csv");
      auto args = commands[i];
      args.insert(args.end(), {"--output", out.string()});
      const auto r = run_cli(args);
      std::string bytes = slurp(out) + r.out;
      if (commands[i][0] == "spectrum") bytes += slurp(fs::path(out).replace_extension(".peaks.json"));
      if (r.code != 0 || bytes.empty()) mismatches += " " + commands[i][0] + "(exit)";
      if (rep == 0) {
        first = std::move(bytes);
      } else if (bytes != first) {
        mismatches += " " + commands[i][0];
      }
    }
  }
  fs::remove_all(dir);
  return {mismatches.empty(), fmt("%.0f commands run twice, outputs byte-identical", static_cast<double>(commands.size())) +
                                  (mismatches.empty() ? "" : "; mismatched:" + mismatches)};
}

}  // namespace

int main() {
  criterion(1, "normalization", 1.0, normalization);
  criterion(2, "two-qubit path agreement", 5.0, two_qubit_paths);
  criterion(3, "qubit-qudit path agreement", 0.0, qubit_qudit_paths);
  criterion(4, "measurement minimization", 60.0, minimization);
  criterion(5, "equivalent two-qubit AX", 0.0, equivalent_two_qubit_method);
  criterion(6, "monogamy", 0.0, monogamy_check);
  criterion(7, "spectrum peaks", 10.0, spectrum_peaks);
  criterion(8, "figure sanity", 0.0, figures);
  criterion(9, "amplitude oracle", 0.0, amplitude_oracle);
  criterion(10, "determinism", 0.0, determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
