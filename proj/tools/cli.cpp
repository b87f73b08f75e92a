#include "cli.hpp"

#include "jcdiscord/gqd.hpp"
#include "jcdiscord/spectrum.hpp"
#include "jcdiscord/table.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace jcd::cli {

namespace {

using std::numbers::pi;

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Either the named file or the fallback stream.
class Output {
public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw OutputError("cannot open output file '" + path + "'");
    stream_ = &file_;
    path_ = path;
  }

  std::ostream& stream() { return *stream_; }

  void close() {
    stream_->flush();
    if (!*stream_) throw OutputError("write failed" + (path_.empty() ? std::string() : " for '" + path_ + "'"));
    if (file_.is_open()) file_.close();
  }

private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
  std::string path_;
};

void write_table(const Table& table, const RunConfig& config, std::ostream& fallback) {
  Output out(config.output, fallback);
  if (config.format == Format::json) {
    table.write_json(out.stream());
  } else {
    table.write_csv(out.stream());
  }
  out.close();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::string_view whole) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("cannot parse angle '" + std::string(whole) + "'");
  }
  return v;
}

// The four mixing angles drawn in every figure, in column order.
struct Curve {
  const char* column;
  double alpha;
};
constexpr Curve kCurves[] = {
    {"alpha_pi_4", pi / 4}, {"alpha_pi_6", pi / 6}, {"alpha_pi_12", pi / 12}, {"alpha_0", 0.0}};

struct Quantity {
  std::string_view name;
  GqdResult (*closed)(const Amplitudes&);
  std::vector<std::size_t> keep;  // empty: the whole system
  std::size_t measured;
};

const std::vector<Quantity>& quantities() {
  static const std::vector<Quantity> all{
      {"AB", gqd_ab_closed, {kAtomA, kAtomB}, 0},        {"AC", gqd_ac_closed, {kAtomA, kCavity}, 0},
      {"BC", gqd_bc_closed, {kAtomB, kCavity}, 0},       {"ABC", gqd_abc_closed, {}, kAtomA},
      {"B_AC", gqd_b_ac_closed, {}, kAtomB},             {"BA", gqd_ba_closed, {kAtomA, kAtomB}, 1},
  };
  return all;
}

std::string stem_with(const std::string& output, std::string_view suffix) {
  std::filesystem::path p(output);
  p.replace_extension();
  return p.string() + std::string(suffix);
}

// Plot script for gnuplot: every column after `x_column` against it.
void write_gnuplot(const RunConfig& config, const Table& table, std::size_t x_column, std::string_view title) {
  if (config.output.empty()) throw std::invalid_argument("--gnuplot needs --output");
  Output gp(stem_with(config.output, ".gp"), std::cerr);
  auto& os = gp.stream();
  os << "set datafile separator ','\n"
     << "set title '" << title << "'\n"
     << "set xlabel '" << table.columns[x_column] << "'\n"
     << "plot ";
  bool first = true;
  for (std::size_t c = x_column + 1; c < table.columns.size(); ++c) {
    os << (first ? "" : ", ") << "'" << config.output << "' using " << x_column + 1 << ":" << c + 1
       << " skip 1 with lines title '" << table.columns[c] << "'";
    first = false;
  }
  os << '\n';
  gp.close();
}

}  // namespace

SystemParams RunConfig::params() const { return SystemParams(alpha, n, g, nu, omega.value_or(nu)); }

double parse_angle(std::string_view text) {
  const std::string_view s = trim(text);
  const auto at = s.find("pi");
  if (at == std::string_view::npos) return parse_number(s, text);

  std::string_view coefficient = trim(s.substr(0, at));
  if (!coefficient.empty() && coefficient.back() == '*') coefficient = trim(coefficient.substr(0, coefficient.size() - 1));
  double value = pi;
  if (coefficient == "-") {
    value = -pi;
  } else if (!coefficient.empty()) {
    value *= parse_number(coefficient, text);
  }

  const std::string_view rest = trim(s.substr(at + 2));
  if (!rest.empty()) {
    if (rest.front() != '/') throw std::invalid_argument("cannot parse angle '" + std::string(text) + "'");
    const double divisor = parse_number(rest.substr(1), text);
    if (divisor == 0.0) throw std::invalid_argument("angle divides by zero: '" + std::string(text) + "'");
    value /= divisor;
  }
  return value;
}

std::vector<double> time_grid(double t_max, std::size_t samples) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t-max must be positive");
  if (samples < 2) throw std::invalid_argument("samples must be at least 2");
  std::vector<double> t(samples);
  const double step = t_max / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) t[i] = i + 1 == samples ? t_max : step * static_cast<double>(i);
  return t;
}

int run_evolve(const RunConfig& config, Streams io) {
  const auto p = config.params();
  Table table;
  table.columns = {"t", "p1", "p2", "p3", "p4"};
  for (double t : time_grid(config.t_max_or(25.0), config.samples_or(2000))) {
    const auto pop = amplitudes(p, t).populations();
    table.add_row({t, pop[0], pop[1], pop[2], pop[3]});
  }
  write_table(table, config, io.out);
  return kSuccess;
}

int run_discord(const RunConfig& config, Streams io) {
  const auto p = config.params();

  std::vector<const Quantity*> selected;
  for (const auto& q : quantities()) {
    if (config.which == "all" || config.which == q.name) selected.push_back(&q);
  }
  if (selected.empty()) throw std::invalid_argument("unknown --which '" + config.which + "'");

  const bool all_paths = config.path == "all";
  const bool want_closed = all_paths || config.path == "closed";
  const bool want_pipeline = all_paths || config.path == "pipeline";
  const bool want_minimize = all_paths || config.path == "minimize";
  if (!want_closed && !want_pipeline && !want_minimize) {
    throw std::invalid_argument("unknown --path '" + config.path + "'");
  }

  Table table;
  table.columns = {"t"};
  for (const auto* q : selected) {
    const std::string name(q->name);
    if (!all_paths) {
      table.columns.push_back(name);
      continue;
    }
    table.columns.push_back(name + "_closed");
    table.columns.push_back(name + "_pipeline");
    table.columns.push_back(name + "_minimize");
  }
  if (all_paths) table.columns.push_back("max_discrepancy");

  double worst = 0.0;
  for (double t : time_grid(config.t_max_or(25.0), config.samples_or(2000))) {
    const auto amp = amplitudes(p, t);
    const auto full = rho_abc(p, t);
    std::vector<Cell> row{t};
    double row_worst = 0.0;
    for (const auto* q : selected) {
      const DensityMatrix state = q->keep.empty() ? full : partial_trace(full, q->keep);
      std::vector<double> values;
      if (want_closed) values.push_back(q->closed(amp).value);
      if (want_pipeline) values.push_back(gqd_qubit_qudit(state, q->measured).value);
      if (want_minimize) values.push_back(gqd_measurement_min(state, q->measured).value);
      for (std::size_t i = 0; i < values.size(); ++i) {
        row.emplace_back(values[i]);
        for (std::size_t j = i + 1; j < values.size(); ++j) {
          row_worst = std::max(row_worst, std::abs(values[i] - values[j]));
        }
      }
    }
    if (all_paths) row.emplace_back(row_worst);
    worst = std::max(worst, row_worst);
    table.add_row(std::move(row));
  }
  write_table(table, config, io.out);

  if (all_paths && worst >= kDiscrepancyLimit) {
    io.err << "discord: cross-path discrepancy " << format_double(worst) << " exceeds "
           << format_double(kDiscrepancyLimit) << '\n';
    return kViolation;
  }
  return kSuccess;
}

int emit_monogamy(std::span<const MonogamyReport> reports, const RunConfig& config, Streams io) {
  if (config.format == Format::json) {
    Table table;
    table.columns = {"alpha", "n", "g", "t", "side", "d_total", "d_pair1", "d_pair2", "residual", "branch"};
    for (const auto& r : reports) {
      table.add_row({r.params.alpha(), static_cast<long long>(r.params.n()), r.params.g(), r.t,
                     std::string(to_string(r.side)), r.d_total, r.d_pair1, r.d_pair2, r.residual,
                     std::string(to_string(r.branch))});
    }
    write_table(table, config, io.out);
  } else {
    Output out(config.output, io.out);
    write_csv(out.stream(), reports);
    out.close();
  }

  const auto s = summarize(reports);
  io.err << "monogamy: " << s.points << " points, " << s.violations << " violations";
  if (!reports.empty()) {
    const auto& m = reports[s.argmin];
    io.err << ", min residual " << format_double(s.min_residual) << " at alpha=" << format_double(m.params.alpha())
           << " n=" << m.params.n() << " t=" << format_double(m.t) << " side=" << to_string(m.side);
  }
  io.err << '\n';
  return s.violations > 0 ? kViolation : kSuccess;
}

int run_monogamy(const RunConfig& config, Streams io) {
  const std::vector<double> alphas =
      config.alphas.empty() ? std::vector<double>{0.0, pi / 12, pi / 6, pi / 4} : config.alphas;
  const std::vector<int> ns = config.ns.empty() ? std::vector<int>{0, 1, 3, 5} : config.ns;

  std::vector<SystemParams> params;
  for (double a : alphas) {
    for (int n : ns) params.emplace_back(a, n, config.g, config.nu, config.omega.value_or(config.nu));
  }
  const auto times = time_grid(config.t_max_or(25.0), config.samples_or(2000));

  SweepOptions options;
  if (config.side == "A") {
    options.sides = {MeasuredSide::A};
  } else if (config.side == "B") {
    options.sides = {MeasuredSide::B};
  } else if (config.side != "both") {
    throw std::invalid_argument("unknown --side '" + config.side + "'");
  }

  const auto result = sweep(params, times, options);
  int code = emit_monogamy(result.reports, config, io);
  io.err << "monogamy: " << result.summary.pipeline_checks << " pipeline checks, max discrepancy "
         << format_double(result.summary.max_pipeline_discrepancy) << '\n';
  if (result.summary.max_pipeline_discrepancy > 1e-9) code = kViolation;
  return code;
}

int run_spectrum(const RunConfig& config, Streams io) {
  if (config.output.empty()) throw std::invalid_argument("spectrum needs --output (the peaks go next to it)");
  const auto p = config.params();
  const double t_max = config.t_max_or(200.0);
  const std::size_t samples = config.samples_or(16384);

  auto spectrum = fourier(sample_series(p, t_max, samples));
  PeakOptions options;
  options.threshold_fraction = config.threshold;
  spectrum.peaks = detect_peaks(spectrum, options);

  Table table;
  table.columns = {"omega", "magnitude"};
  for (std::size_t k = 0; k < spectrum.omega_grid.size(); ++k) {
    table.add_row({spectrum.omega_grid[k], spectrum.magnitudes[k]});
  }
  write_table(table, config, io.out);

  const std::string peaks_path = stem_with(config.output, ".peaks.json");
  Output peaks(peaks_path, io.out);
  write_peaks_json(peaks.stream(), p, t_max, samples, spectrum.peaks);
  peaks.close();

  io.out << "peaks: " << spectrum.peaks.size() << '\n';
  for (const auto& pk : spectrum.peaks) {
    io.out << "  omega " << format_double(pk.omega) << " height " << format_double(pk.height) << '\n';
  }
  return kSuccess;
}

int run_figure(const RunConfig& config, Streams io) {
  int n = 0;
  if (config.variant == "n3") {
    n = 3;
  } else if (config.variant != "n0") {
    throw std::invalid_argument("unknown --variant '" + config.variant + "' (n0 or n3)");
  }

  Table table;
  if (config.figure == "F5") {
    const double t_max = config.t_max_or(200.0);
    const std::size_t samples = config.samples_or(16384);
    std::vector<SpectrumResult> spectra;
    table.columns = {"omega", "log10_omega"};
    for (const auto& c : kCurves) {
      spectra.push_back(fourier(sample_series(SystemParams(c.alpha, n, config.g, config.nu), t_max, samples)));
      table.columns.push_back(std::string("log10_") + c.column);
    }
    for (std::size_t k = 1; k < spectra.front().omega_grid.size(); ++k) {
      const double w = spectra.front().omega_grid[k];
      std::vector<Cell> row{w, std::log10(w)};
      for (const auto& s : spectra) row.emplace_back(std::log10(s.magnitudes[k]));
      table.add_row(std::move(row));
    }
    write_table(table, config, io.out);
    if (config.gnuplot) write_gnuplot(config, table, 1, "F5 " + config.variant);
    return kSuccess;
  }

  GqdResult (*curve)(const Amplitudes&) = nullptr;
  if (config.figure == "F1") curve = gqd_ab_closed;
  if (config.figure == "F2") curve = gqd_ac_closed;
  if (config.figure == "F3") curve = gqd_bc_closed;
  if (config.figure == "F4") curve = gqd_abc_closed;
  if (curve == nullptr) throw std::invalid_argument("unknown --figure '" + config.figure + "' (F1..F5)");

  table.columns = {"t"};
  std::vector<SystemParams> params;
  for (const auto& c : kCurves) {
    table.columns.emplace_back(c.column);
    params.emplace_back(c.alpha, n, config.g, config.nu);
  }
  for (double t : time_grid(config.t_max_or(25.0), config.samples_or(2000))) {
    std::vector<Cell> row{t};
    for (const auto& p : params) row.emplace_back(curve(amplitudes(p, t)).value);
    table.add_row(std::move(row));
  }
  write_table(table, config, io.out);
  if (config.gnuplot) write_gnuplot(config, table, 0, config.figure + " " + config.variant);
  return kSuccess;
}

int run(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Geometric quantum discord of a Jaynes-Cummings atom, a spectator atom and a cavity", "gqdjc"};
  app.set_config("--config", "", "key=value file ('#' comments); flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::string alpha_text = "0";
  std::vector<std::string> alpha_list;
  double t_max = 0.0, omega = 0.0;
  std::size_t samples = 0;
  std::string format = "csv";

  app.add_option("--alpha", alpha_text, "mixing angle, radians or e.g. pi/6");
  app.add_option("--n", config.n, "initial photon number")->check(CLI::NonNegativeNumber);
  app.add_option("--g", config.g, "atom-cavity coupling");
  app.add_option("--nu", config.nu, "cavity frequency");
  auto* omega_opt = app.add_option("--omega", omega, "atomic frequency (must equal nu)");
  auto* t_max_opt = app.add_option("--t-max", t_max, "end of the time window, units of 1/g");
  auto* samples_opt = app.add_option("--samples", samples, "number of time samples");
  app.add_option("--which", config.which, "AB, AC, BC, ABC, B_AC, BA or all")
      ->check(CLI::IsMember({"AB", "AC", "BC", "ABC", "B_AC", "BA", "all"}));
  app.add_option("--path", config.path, "closed, pipeline, minimize or all")
      ->check(CLI::IsMember({"closed", "pipeline", "minimize", "all"}));
  app.add_option("--side", config.side, "A, B or both")->check(CLI::IsMember({"A", "B", "both"}));
  app.add_option("--threshold", config.threshold, "peak threshold as a fraction of the largest peak");
  app.add_option("--output", config.output, "output file (default: standard output)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--alphas", alpha_list, "monogamy grid angles")->delimiter(',');
  app.add_option("--ns", config.ns, "monogamy grid photon numbers")->delimiter(',');
  app.add_option("--figure", config.figure, "F1..F5")->check(CLI::IsMember({"F1", "F2", "F3", "F4", "F5"}));
  app.add_option("--variant", config.variant, "n0 or n3")->check(CLI::IsMember({"n0", "n3"}));
  app.add_flag("--gnuplot", config.gnuplot, "also write a gnuplot script next to the output");

  auto* evolve = app.add_subcommand("evolve", "populations |x1|^2..|x4|^2 over time");
  auto* discord = app.add_subcommand("discord", "discord of the chosen bipartitions over time");
  auto* monogamy = app.add_subcommand("monogamy", "monogamy residual sweep");
  auto* spectrum = app.add_subcommand("spectrum", "Fourier spectrum and peaks of the whole-system discord");
  auto* figure = app.add_subcommand("figure", "figure datasets");
  for (auto* sub : {evolve, discord, monogamy, spectrum, figure}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    config.alpha = parse_angle(alpha_text);
    for (const auto& a : alpha_list) config.alphas.push_back(parse_angle(a));
    if (*omega_opt) config.omega = omega;
    if (*t_max_opt) config.t_max = t_max;
    if (*samples_opt) config.samples = samples;
    config.format = format == "json" ? Format::json : Format::csv;

    if (evolve->parsed()) return run_evolve(config, io);
    if (discord->parsed()) return run_discord(config, io);
    if (monogamy->parsed()) return run_monogamy(config, io);
    if (spectrum->parsed()) return run_spectrum(config, io);
    return run_figure(config, io);
  } catch (const std::invalid_argument& e) {
    io.err << "error: " << e.what() << '\n';
  } catch (const OutputError& e) {
    io.err << "error: " << e.what() << '\n';
  }
  return kUsageError;
}

}  // namespace jcd::cli
