#include "jcdiscord/monogamy.hpp"

#include "jcdiscord/gqd.hpp"
#include "jcdiscord/table.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace jcd {

std::string_view to_string(MeasuredSide side) { return side == MeasuredSide::A ? "A" : "B"; }

std::string_view to_string(MonogamyBranch branch) {
  return branch == MonogamyBranch::branch1 ? "branch1" : "branch2";
}

MonogamyReport residual_a(const SystemParams& p, double t) {
  const auto amp = amplitudes(p, t);
  const auto pair1 = gqd_ab_closed(amp);
  MonogamyReport r{.params = p, .t = t, .side = MeasuredSide::A};
  r.d_total = gqd_abc_closed(amp).value;
  r.d_pair1 = pair1.value;
  r.d_pair2 = gqd_ac_closed(amp).value;
  r.residual = r.d_total - r.d_pair1 - r.d_pair2;
  // The AB closed form's Max picks the coherence term exactly in branch1.
  r.branch = pair1.branch == MaxBranch::first ? MonogamyBranch::branch1 : MonogamyBranch::branch2;
  return r;
}

MonogamyReport residual_b(const SystemParams& p, double t) {
  const auto amp = amplitudes(p, t);
  const auto pair1 = gqd_ba_closed(amp);
  MonogamyReport r{.params = p, .t = t, .side = MeasuredSide::B};
  r.d_total = gqd_b_ac_closed(amp).value;
  r.d_pair1 = pair1.value;
  r.d_pair2 = gqd_bc_closed(amp).value;
  r.residual = r.d_total - r.d_pair1 - r.d_pair2;
  // Side-B branch1 is the quartic term winning the BA closed form's Max.
  const auto [p1, p2, p3, p4] = amp.populations();
  const double quartic = p1 * p1 + p2 * p2 + p3 * p3 + p4 * p4;
  r.branch = quartic >= 2.0 * (p2 * p3 + p1 * p2 + p1 * p4) ? MonogamyBranch::branch1
                                                             : MonogamyBranch::branch2;
  return r;
}

MonogamyReport residual(const SystemParams& p, double t, MeasuredSide side) {
  return side == MeasuredSide::A ? residual_a(p, t) : residual_b(p, t);
}

double residual_from_pipeline(const SystemParams& p, double t, MeasuredSide side) {
  const auto full = rho_abc(p, t);
  if (side == MeasuredSide::A) {
    return gqd_qubit_qudit(full, kAtomA).value -
           gqd_qubit_qudit(partial_trace(full, {kAtomA, kAtomB}), 0).value -
           gqd_qubit_qudit(partial_trace(full, {kAtomA, kCavity}), 0).value;
  }
  return gqd_qubit_qudit(full, kAtomB).value -
         gqd_qubit_qudit(partial_trace(full, {kAtomA, kAtomB}), 1).value -
         gqd_qubit_qudit(partial_trace(full, {kAtomB, kCavity}), 0).value;
}

SweepSummary summarize(std::span<const MonogamyReport> reports) {
  SweepSummary s;
  s.points = reports.size();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i == 0 || reports[i].residual < s.min_residual) {
      s.min_residual = reports[i].residual;
      s.argmin = i;
    }
    if (reports[i].is_violation()) ++s.violations;
  }
  return s;
}

SweepResult sweep(std::span<const SystemParams> params, std::span<const double> times,
                  const SweepOptions& options) {
  if (params.empty()) throw std::invalid_argument("monogamy sweep: empty parameter grid");
  if (times.empty()) throw std::invalid_argument("monogamy sweep: empty time grid");
  if (options.sides.empty()) throw std::invalid_argument("monogamy sweep: no side selected");

  SweepResult result;
  result.reports.reserve(params.size() * times.size() * options.sides.size());
  for (const auto& p : params) {
    for (double t : times) {
      for (auto side : options.sides) result.reports.push_back(residual(p, t, side));
    }
  }
  result.summary = summarize(result.reports);

  if (options.pipeline_stride > 0) {
    for (std::size_t i = 0; i < result.reports.size(); i += options.pipeline_stride) {
      const auto& r = result.reports[i];
      const double diff = std::abs(residual_from_pipeline(r.params, r.t, r.side) - r.residual);
      result.summary.max_pipeline_discrepancy = std::max(result.summary.max_pipeline_discrepancy, diff);
      ++result.summary.pipeline_checks;
    }
  }
  return result;
}

void write_csv(std::ostream& out, std::span<const MonogamyReport> reports) {
  Table table;
  table.columns = {"alpha", "n", "g", "t", "side", "d_total", "d_pair1", "d_pair2", "residual", "branch"};
  for (const auto& r : reports) {
    table.add_row({r.params.alpha(), static_cast<long long>(r.params.n()), r.params.g(), r.t,
                   std::string(to_string(r.side)), r.d_total, r.d_pair1, r.d_pair2, r.residual,
                   std::string(to_string(r.branch))});
  }
  table.write_csv(out);
}

}  // namespace jcd
