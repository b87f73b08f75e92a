#pragma once

#include "jcdiscord/jc_model.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace jcd {

/// Residuals below this are reported as monogamy violations.
inline constexpr double kViolationThreshold = -1e-10;

enum class MeasuredSide { A, B };
std::string_view to_string(MeasuredSide side);

/// Case split used by the closed-form residual.
///
/// Side A: branch1 when 2 p1 p2 >= (p1 - p3)^2 + (p2 - p4)^2.
/// Side B: branch1 when sum p_k^2 >= 2 (p2 p3 + p1 p2 + p1 p4).
/// In side-A branch2 and side-B branch1 the residual is exactly 4 p3 p4.
enum class MonogamyBranch { branch1, branch2 };
std::string_view to_string(MonogamyBranch branch);

/// CKW residual D(total) - D(pair1) - D(pair2) at one (params, t) point.
///
/// Side A: total = A|BC, pair1 = AB, pair2 = AC.
/// Side B: total = B|AC, pair1 = BA, pair2 = BC.
struct MonogamyReport {
  SystemParams params;
  double t = 0.0;
  MeasuredSide side = MeasuredSide::A;
  double d_total = 0.0;
  double d_pair1 = 0.0;
  double d_pair2 = 0.0;
  double residual = 0.0;
  MonogamyBranch branch = MonogamyBranch::branch1;

  bool is_violation() const { return residual < kViolationThreshold; }
};

MonogamyReport residual_a(const SystemParams& p, double t);
MonogamyReport residual_b(const SystemParams& p, double t);
MonogamyReport residual(const SystemParams& p, double t, MeasuredSide side);

/// Same residual assembled from the generic v/S pipeline on the actual
/// density matrices instead of the closed forms.
double residual_from_pipeline(const SystemParams& p, double t, MeasuredSide side);

struct SweepSummary {
  std::size_t points = 0;
  double min_residual = 0.0;
  /// Index into the report list of the smallest residual.
  std::size_t argmin = 0;
  std::size_t violations = 0;
  /// Largest |closed - pipeline| residual difference over the spot checks.
  double max_pipeline_discrepancy = 0.0;
  std::size_t pipeline_checks = 0;
};

struct SweepResult {
  std::vector<MonogamyReport> reports;
  SweepSummary summary;
};

struct SweepOptions {
  std::vector<MeasuredSide> sides{MeasuredSide::A, MeasuredSide::B};
  /// Recheck every k-th report through the generic pipeline; 0 disables.
  std::size_t pipeline_stride = 100;
};

/// Evaluates every (params, t, side) combination in order params, t, side.
/// Throws std::invalid_argument on an empty grid.
SweepResult sweep(std::span<const SystemParams> params, std::span<const double> times,
                  const SweepOptions& options = {});

/// Recomputes min/argmin/violation count for an arbitrary report list.
SweepSummary summarize(std::span<const MonogamyReport> reports);

void write_csv(std::ostream& out, std::span<const MonogamyReport> reports);

}  // namespace jcd
