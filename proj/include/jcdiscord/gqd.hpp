#pragma once

#include "jcdiscord/jc_model.hpp"
#include "jcdiscord/matrix.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace jcd {

// Geometric quantum discord, normalised so that Bell states score 1:
//
//   D_G(rho) = 2 min_{chi zero-discord} || rho - chi ||_2^2
//
// Every routine below uses this normalisation and measures the first
// factor of the bipartition unless told otherwise.

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// Values in [-kNegativeClamp, 0) are reported as exactly 0.
inline constexpr double kNegativeClamp = 1e-12;

/// rho = 1/4 (I + x.sigma (x) I + I (x) y.sigma + sum t_ij sigma_i (x) sigma_j)
struct BlochDecomposition {
  Vec3 x{};
  Vec3 y{};
  Mat3 t{};

  ComplexMatrix reconstruct() const;
};

/// Unit vector u on the Bloch sphere labelling the projectors (I +/- u.sigma)/2.
class MeasurementDirection {
public:
  /// Normalises `u`; throws if it is (numerically) zero.
  explicit MeasurementDirection(const Vec3& u);
  static MeasurementDirection from_angles(double theta, double phi);

  const Vec3& u() const { return u_; }
  double ux() const { return u_[0]; }
  double uy() const { return u_[1]; }
  double uz() const { return u_[2]; }

private:
  Vec3 u_;
};

enum class GqdPath { closed_form, bloch_two_qubit, v_s_pipeline, measurement_min };

std::string_view to_string(GqdPath path);

/// Which argument of a closed form's Max[first, second] was active.
/// Ties count as `first`.
enum class MaxBranch { first, second };

struct GqdResult {
  double value = 0.0;
  GqdPath path = GqdPath::closed_form;
  /// Eigenvalues of the matrix whose largest eigenvalue is subtracted
  /// (x x^T + T T^T, or S), descending.
  std::vector<double> eigenvalues;
  std::optional<MeasurementDirection> direction;
  std::optional<MaxBranch> branch;
};

BlochDecomposition bloch_decompose(const DensityMatrix& rho);

/// 1/2 (|x|^2 + |T|^2 - k_max), k_max the top eigenvalue of x x^T + T T^T.
GqdResult gqd_two_qubit(const DensityMatrix& rho);

/// The real symmetric matrix S_ij = Re tr(v_i v_j), v_i = tr_A(rho (sigma_i (x) I)),
/// where A is subsystem `measured` (a qubit) and the rest is flattened.
Mat3 correlation_matrix_s(const DensityMatrix& rho, std::size_t measured = 0);

/// tr(S) - lambda_max(S). Valid for qubit (x) anything.
GqdResult gqd_qubit_qudit(const DensityMatrix& rho, std::size_t measured = 0);

/// || rho - Pi(rho) ||^2 for the von Neumann measurement along `u` on
/// subsystem `measured`, computed by sandwiching rho with both projectors.
double measurement_residual(const DensityMatrix& rho, const MeasurementDirection& u,
                            std::size_t measured = 0);

/// The residual as a quadratic form in u:
///   || rho - Pi_u(rho) ||^2 = 1/2 (tr rho^2 - u^T M u),
/// M_ij = Re tr(rho Sigma_i rho Sigma_j), Sigma_i = sigma_i on the measured
/// qubit. Used to make the sphere search cheap for large matrices.
class ResidualForm {
public:
  ResidualForm(const DensityMatrix& rho, std::size_t measured = 0);
  double operator()(const Vec3& u) const;
  double purity() const { return purity_; }
  const Mat3& matrix() const { return m_; }

private:
  double purity_ = 0.0;
  Mat3 m_{};
};

struct MinimizerOptions {
  std::size_t theta_points = 64;
  std::size_t phi_points = 128;
  /// Stop refining once both angles move by less than this.
  double angle_tolerance = 1e-8;
  std::size_t max_rounds = 200;
};

/// 2 min_u || rho - Pi_u(rho) ||^2 by a (theta, phi) grid followed by
/// alternating golden-section refinement of the two angles.
GqdResult gqd_measurement_min(const DensityMatrix& rho, std::size_t measured = 0,
                              const MinimizerOptions& options = {});

// Closed forms for the Jaynes-Cummings + spectator model, in terms of the
// populations p_k = |x_k|^2.

/// Two atoms, A measured.
GqdResult gqd_ab_closed(const Amplitudes& a);
/// Atom A with the cavity, A measured.
GqdResult gqd_ac_closed(const Amplitudes& a);
/// Atom B with the cavity, B measured.
GqdResult gqd_bc_closed(const Amplitudes& a);
/// Whole system, A measured: 4 (p1 + p4)(p2 + p3).
GqdResult gqd_abc_closed(const Amplitudes& a);
/// Whole system, B measured: 4 (p1 + p3)(p2 + p4).
GqdResult gqd_b_ac_closed(const Amplitudes& a);
/// Two atoms, B measured.
GqdResult gqd_ba_closed(const Amplitudes& a);

GqdResult gqd_ab_closed(const SystemParams& p, double t);
GqdResult gqd_ac_closed(const SystemParams& p, double t);
GqdResult gqd_bc_closed(const SystemParams& p, double t);
GqdResult gqd_abc_closed(const SystemParams& p, double t);
GqdResult gqd_b_ac_closed(const SystemParams& p, double t);
GqdResult gqd_ba_closed(const SystemParams& p, double t);

}  // namespace jcd
