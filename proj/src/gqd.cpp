#include "jcdiscord/gqd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace jcd {

namespace {

double clamp_small_negative(double v) {
  return (v < 0.0 && v >= -kNegativeClamp) ? 0.0 : v;
}

// Moves the measured factor to the front and flattens the rest, giving a
// 2 x d layout. Throws if the measured factor is not a qubit.
DensityMatrix as_qubit_first(const DensityMatrix& rho, std::size_t measured) {
  if (measured >= rho.dims.count()) {
    throw DimensionError("measured subsystem index out of range");
  }
  if (rho.dims[measured] != 2) {
    throw DimensionError("measured subsystem must be a qubit, it has dimension " +
                         std::to_string(rho.dims[measured]));
  }
  std::vector<std::size_t> order{measured};
  for (std::size_t k = 0; k < rho.dims.count(); ++k) {
    if (k != measured) order.push_back(k);
  }
  auto moved = measured == 0 ? rho : permute_subsystems(rho, order);
  const std::size_t rest = moved.matrix.rows() / 2;
  return {std::move(moved.matrix), SubsystemDims{2, rest}};
}

// Operator acting as `op` on factor `site` and identity elsewhere.
ComplexMatrix embed(const ComplexMatrix& op, const SubsystemDims& dims, std::size_t site) {
  std::size_t left = 1, right = 1;
  for (std::size_t k = 0; k < site; ++k) left *= dims[k];
  for (std::size_t k = site + 1; k < dims.count(); ++k) right *= dims[k];
  return kron(kron(ComplexMatrix::identity(left), op), ComplexMatrix::identity(right));
}

ComplexMatrix u_dot_sigma(const Vec3& u) {
  return pauli::x() * u[0] + pauli::y() * u[1] + pauli::z() * u[2];
}

ComplexMatrix real_symmetric(const Mat3& m) {
  ComplexMatrix out(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) out(i, j) = 0.5 * (m[i][j] + m[j][i]);
  }
  return out;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// tr(S) - lambda_max(S) for closed forms whose S has eigenvalues
// {first, second, second} (or a permutation of them).
GqdResult closed_max_form(double first, double second, double trace, std::vector<double> eig) {
  GqdResult r;
  r.path = GqdPath::closed_form;
  r.branch = first >= second ? MaxBranch::first : MaxBranch::second;
  r.value = clamp_small_negative(trace - std::max(first, second));
  std::sort(eig.begin(), eig.end(), std::greater<>());
  r.eigenvalues = std::move(eig);
  return r;
}

template <class F>
double golden_section(F&& f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(GqdPath path) {
  switch (path) {
    case GqdPath::closed_form: return "closed_form";
    case GqdPath::bloch_two_qubit: return "bloch_two_qubit";
    case GqdPath::v_s_pipeline: return "v_s_pipeline";
    case GqdPath::measurement_min: return "measurement_min";
  }
  return "unknown";
}

ComplexMatrix BlochDecomposition::reconstruct() const {
  const auto& id = pauli::identity();
  ComplexMatrix rho = kron(id, id);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& si = pauli::by_index(i);
    rho += kron(si, id) * x[i];
    rho += kron(id, si) * y[i];
    for (std::size_t j = 0; j < 3; ++j) rho += kron(si, pauli::by_index(j)) * t[i][j];
  }
  return rho * 0.25;
}

MeasurementDirection::MeasurementDirection(const Vec3& u) {
  const double norm = std::sqrt(dot(u, u));
  if (!(norm > 1e-300)) throw std::invalid_argument("measurement direction must be non-zero");
  u_ = {u[0] / norm, u[1] / norm, u[2] / norm};
}

MeasurementDirection MeasurementDirection::from_angles(double theta, double phi) {
  return MeasurementDirection(
      Vec3{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
}

BlochDecomposition bloch_decompose(const DensityMatrix& rho) {
  if (rho.dims != SubsystemDims{2, 2}) throw DimensionError("bloch_decompose expects a two-qubit state");
  const auto& id = pauli::identity();
  BlochDecomposition b;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& si = pauli::by_index(i);
    b.x[i] = real_trace_of_product(rho.matrix, kron(si, id));
    b.y[i] = real_trace_of_product(rho.matrix, kron(id, si));
    for (std::size_t j = 0; j < 3; ++j) {
      b.t[i][j] = real_trace_of_product(rho.matrix, kron(si, pauli::by_index(j)));
    }
  }
  return b;
}

GqdResult gqd_two_qubit(const DensityMatrix& rho) {
  const auto b = bloch_decompose(rho);
  Mat3 k{};
  double t_norm_sq = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      k[i][j] = b.x[i] * b.x[j];
      for (std::size_t l = 0; l < 3; ++l) k[i][j] += b.t[i][l] * b.t[j][l];
      t_norm_sq += b.t[i][j] * b.t[i][j];
    }
  }
  GqdResult r;
  r.path = GqdPath::bloch_two_qubit;
  r.eigenvalues = hermitian_eigenvalues(real_symmetric(k));
  r.value = clamp_small_negative(0.5 * (dot(b.x, b.x) + t_norm_sq - r.eigenvalues.front()));
  return r;
}

Mat3 correlation_matrix_s(const DensityMatrix& rho, std::size_t measured) {
  const auto flat = as_qubit_first(rho, measured);
  const std::size_t d = flat.dims[1];
  const auto& m = flat.matrix;

  std::array<ComplexMatrix, 3> v;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& s = pauli::by_index(i);
    ComplexMatrix vi(d, d);
    // v_i = tr_A((sigma_i (x) I) rho)
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        const Complex sba = s(b, a);
        if (sba == Complex{}) continue;
        for (std::size_t j = 0; j < d; ++j) {
          for (std::size_t k = 0; k < d; ++k) vi(j, k) += sba * m(a * d + j, b * d + k);
        }
      }
    }
    v[i] = std::move(vi);
  }

  Mat3 s{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i; j < 3; ++j) s[i][j] = s[j][i] = real_trace_of_product(v[i], v[j]);
  }
  return s;
}

GqdResult gqd_qubit_qudit(const DensityMatrix& rho, std::size_t measured) {
  const Mat3 s = correlation_matrix_s(rho, measured);
  GqdResult r;
  r.path = GqdPath::v_s_pipeline;
  r.eigenvalues = hermitian_eigenvalues(real_symmetric(s));
  r.value = clamp_small_negative(s[0][0] + s[1][1] + s[2][2] - r.eigenvalues.front());
  return r;
}

double measurement_residual(const DensityMatrix& rho, const MeasurementDirection& u,
                            std::size_t measured) {
  if (measured >= rho.dims.count() || rho.dims[measured] != 2) {
    throw DimensionError("measured subsystem must be a qubit");
  }
  const ComplexMatrix n = u_dot_sigma(u.u());
  const ComplexMatrix& id = pauli::identity();
  const ComplexMatrix plus = embed((id + n) * 0.5, rho.dims, measured);
  const ComplexMatrix minus = embed((id - n) * 0.5, rho.dims, measured);
  const ComplexMatrix measured_state = plus * rho.matrix * plus + minus * rho.matrix * minus;
  return frobenius_norm_sq(rho.matrix - measured_state);
}

ResidualForm::ResidualForm(const DensityMatrix& rho, std::size_t measured) {
  if (measured >= rho.dims.count() || rho.dims[measured] != 2) {
    throw DimensionError("measured subsystem must be a qubit");
  }
  std::array<ComplexMatrix, 3> rho_sigma;
  for (std::size_t i = 0; i < 3; ++i) {
    rho_sigma[i] = rho.matrix * embed(pauli::by_index(i), rho.dims, measured);
  }
  purity_ = real_trace_of_product(rho.matrix, rho.matrix);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i; j < 3; ++j) m_[i][j] = m_[j][i] = real_trace_of_product(rho_sigma[i], rho_sigma[j]);
  }
}

double ResidualForm::operator()(const Vec3& u) const {
  double quad = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) quad += u[i] * m_[i][j] * u[j];
  }
  return 0.5 * (purity_ - quad);
}

GqdResult gqd_measurement_min(const DensityMatrix& rho, std::size_t measured,
                              const MinimizerOptions& options) {
  if (options.theta_points < 2 || options.phi_points < 1) {
    throw std::invalid_argument("minimizer grid needs at least 2 x 1 points");
  }
  const ResidualForm form(rho, measured);
  auto objective = [&form](double theta, double phi) {
    return form(MeasurementDirection::from_angles(theta, phi).u());
  };

  const double pi = std::numbers::pi;
  const double theta_step = pi / static_cast<double>(options.theta_points - 1);
  const double phi_step = 2.0 * pi / static_cast<double>(options.phi_points);

  // Ordered scan; a point must beat the incumbent by more than rounding noise
  // to replace it, so on flat objectives the pole (scanned first) is kept and
  // the result never depends on evaluation order.
  const double resolution = 32.0 * std::numeric_limits<double>::epsilon() * form.purity();
  double best_theta = 0.0, best_phi = 0.0;
  double best = objective(0.0, 0.0);
  for (std::size_t i = 0; i < options.theta_points; ++i) {
    const double theta = theta_step * static_cast<double>(i);
    for (std::size_t j = 0; j < options.phi_points; ++j) {
      const double phi = phi_step * static_cast<double>(j);
      const double v = objective(theta, phi);
      if (v < best - resolution) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  const double golden_tol = 0.01 * options.angle_tolerance;
  for (std::size_t round = 0; round < options.max_rounds; ++round) {
    const double prev_theta = best_theta, prev_phi = best_phi;

    const double lo = std::max(0.0, best_theta - theta_step);
    const double hi = std::min(pi, best_theta + theta_step);
    const double theta = golden_section([&](double th) { return objective(th, best_phi); }, lo, hi, golden_tol);
    if (const double v = objective(theta, best_phi); v < best - resolution) {
      best = v;
      best_theta = theta;
    }

    const double phi = golden_section([&](double ph) { return objective(best_theta, ph); },
                                      best_phi - phi_step, best_phi + phi_step, golden_tol);
    if (const double v = objective(best_theta, phi); v < best - resolution) {
      best = v;
      best_phi = phi;
    }

    const double theta_move = std::abs(best_theta - prev_theta);
    const double phi_move = std::abs(best_phi - prev_phi) * std::sin(best_theta);
    if (theta_move < options.angle_tolerance && phi_move < options.angle_tolerance) break;
  }

  GqdResult r;
  r.path = GqdPath::measurement_min;
  r.value = clamp_small_negative(2.0 * best);
  r.direction = MeasurementDirection::from_angles(best_theta, best_phi);
  return r;
}

GqdResult gqd_ab_closed(const Amplitudes& a) {
  const auto [p1, p2, p3, p4] = a.populations();
  const double coherence = 2.0 * p1 * p2;
  const double polarisation = (p1 - p3) * (p1 - p3) + (p2 - p4) * (p2 - p4);
  return closed_max_form(coherence, polarisation, 2.0 * coherence + polarisation,
                         {coherence, coherence, polarisation});
}

GqdResult gqd_ac_closed(const Amplitudes& a) {
  const auto [p1, p2, p3, p4] = a.populations();
  const double quartic = p1 * p1 + p2 * p2 + p3 * p3 + p4 * p4 - 2.0 * p1 * p2;
  const double exchange = 2.0 * (p1 * p3 + p2 * p4);
  return closed_max_form(quartic, exchange, quartic + 2.0 * exchange, {quartic, exchange, exchange});
}

GqdResult gqd_bc_closed(const Amplitudes& a) {
  const auto [p1, p2, p3, p4] = a.populations();
  const double quartic = p1 * p1 + p2 * p2 + p3 * p3 + p4 * p4 - 2.0 * p1 * p2;
  const double exchange = 2.0 * (p2 * p3 + p1 * p4);
  return closed_max_form(quartic, exchange, quartic + 2.0 * exchange, {quartic, exchange, exchange});
}

GqdResult gqd_abc_closed(const Amplitudes& a) {
  const auto [p1, p2, p3, p4] = a.populations();
  GqdResult r;
  r.value = clamp_small_negative(4.0 * (p1 + p4) * (p2 + p3));
  return r;
}

GqdResult gqd_b_ac_closed(const Amplitudes& a) {
  const auto [p1, p2, p3, p4] = a.populations();
  GqdResult r;
  r.value = clamp_small_negative(4.0 * (p1 + p3) * (p2 + p4));
  return r;
}

GqdResult gqd_ba_closed(const Amplitudes& a) {
  const auto [p1, p2, p3, p4] = a.populations();
  const double coherence = 2.0 * p1 * p2;
  const double quartic = p1 * p1 + p2 * p2 + p3 * p3 + p4 * p4 - 2.0 * p2 * p3 - 2.0 * p1 * p4;
  return closed_max_form(coherence, quartic, 2.0 * coherence + quartic, {coherence, coherence, quartic});
}

GqdResult gqd_ab_closed(const SystemParams& p, double t) { return gqd_ab_closed(amplitudes(p, t)); }
GqdResult gqd_ac_closed(const SystemParams& p, double t) { return gqd_ac_closed(amplitudes(p, t)); }
GqdResult gqd_bc_closed(const SystemParams& p, double t) { return gqd_bc_closed(amplitudes(p, t)); }
GqdResult gqd_abc_closed(const SystemParams& p, double t) { return gqd_abc_closed(amplitudes(p, t)); }
GqdResult gqd_b_ac_closed(const SystemParams& p, double t) { return gqd_b_ac_closed(amplitudes(p, t)); }
GqdResult gqd_ba_closed(const SystemParams& p, double t) { return gqd_ba_closed(amplitudes(p, t)); }

}  // namespace jcd
