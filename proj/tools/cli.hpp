#pragma once

#include "jcdiscord/jc_model.hpp"
#include "jcdiscord/monogamy.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jcd::cli {

enum ExitCode : int { kSuccess = 0, kViolation = 1, kUsageError = 2 };

enum class Format { csv, json };

/// Cross-path discrepancy at or above this makes `discord --path all` exit 1.
inline constexpr double kDiscrepancyLimit = 1e-6;

struct RunConfig {
  double alpha = 0.0;
  int n = 0;
  double g = 1.0;
  double nu = 1.0;
  std::optional<double> omega;  // defaults to nu
  std::optional<double> t_max;
  std::optional<std::size_t> samples;
  Format format = Format::csv;
  std::string output;  // empty: standard output

  std::string which = "all";
  std::string path = "closed";
  std::string side = "both";
  double threshold = 1e-3;

  // monogamy grid; empty lists fall back to the standard grid
  std::vector<double> alphas;
  std::vector<int> ns;

  std::string figure = "F1";
  std::string variant = "n3";
  bool gnuplot = false;

  SystemParams params() const;
  double t_max_or(double fallback) const { return t_max.value_or(fallback); }
  std::size_t samples_or(std::size_t fallback) const { return samples.value_or(fallback); }
};

/// Radians, or multiples/fractions of pi: "0.3", "pi", "pi/6", "3pi/4", "2*pi/3".
/// Throws std::invalid_argument on anything else.
double parse_angle(std::string_view text);

/// Uniform grid on [0, t_max] with the last point exactly t_max.
std::vector<double> time_grid(double t_max, std::size_t samples);

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

int run_evolve(const RunConfig& config, Streams io);
int run_discord(const RunConfig& config, Streams io);
int run_monogamy(const RunConfig& config, Streams io);
int run_spectrum(const RunConfig& config, Streams io);
int run_figure(const RunConfig& config, Streams io);

/// Writes the report file for `reports`, prints the summary line and returns
/// kViolation if any residual is below the violation threshold.
int emit_monogamy(std::span<const MonogamyReport> reports, const RunConfig& config, Streams io);

/// Full command line, without the program name.
int run(const std::vector<std::string>& args, Streams io);

}  // namespace jcd::cli
