#pragma once

#include "jcdiscord/matrix.hpp"

#include <array>
#include <vector>

namespace jcd {

/// Resonant Jaynes-Cummings atom A in cavity C plus a spectator atom B.
///
/// Atom A couples to the cavity with rate g; atom B is isolated. The atoms
/// start in cos(alpha)|e_A g_B> + sin(alpha)|g_A e_B> and the cavity in the
/// Fock state |n>. Only zero detuning (omega == nu) is supported; any other
/// value is rejected at construction.
class SystemParams {
public:
  SystemParams(double alpha, int n, double g = 1.0, double nu = 1.0);
  SystemParams(double alpha, int n, double g, double nu, double omega);

  double alpha() const { return alpha_; }
  int n() const { return n_; }
  double g() const { return g_; }
  double nu() const { return nu_; }
  double omega() const { return omega_; }
  double detuning() const { return omega_ - nu_; }

  /// Rabi rate of the branch exchanging with |n+1>: g sqrt(n+1).
  double rabi_upper() const;
  /// Rabi rate of the branch exchanging with |n-1>: g sqrt(n).
  double rabi_lower() const;

private:
  double alpha_;
  int n_;
  double g_;
  double nu_;
  double omega_;
};

/// Amplitudes of the four kets spanned by the evolution, at time t.
///
///   x1 on |e_A g_B n>,  x2 on |g_A e_B n>,
///   x3 on |g_A g_B n+1>, x4 on |e_A e_B n-1>.
struct Amplitudes {
  std::array<Complex, 4> x{};
  double t = 0.0;

  /// |x_k|^2 for k = 1..4.
  double population(int k) const { return std::norm(x.at(static_cast<std::size_t>(k - 1))); }
  std::array<double, 4> populations() const;
};

/// Atomic basis order used by every matrix in this library: index 0 is the
/// excited level (sigma_z = +1), index 1 the ground level.
enum class AtomLevel : std::size_t { excited = 0, ground = 1 };

/// Fock levels kept for the cavity: {n-1, n, n+1}, or {n, n+1} when n == 0.
struct CavityBasis {
  std::vector<int> levels;

  static CavityBasis for_params(const SystemParams& p);
  std::size_t size() const { return levels.size(); }
  /// Position of Fock level `fock` in `levels`; throws if it is not kept.
  std::size_t index_of(int fock) const;
};

/// Subsystem indices of the A (x) B (x) C layout.
inline constexpr std::size_t kAtomA = 0;
inline constexpr std::size_t kAtomB = 1;
inline constexpr std::size_t kCavity = 2;

Amplitudes amplitudes(const SystemParams& p, double t);

/// Flat index of |a, b, fock> in the A (x) B (x) C vector.
std::size_t basis_index(const CavityBasis& basis, AtomLevel a, AtomLevel b, int fock);

std::vector<Complex> state_vector(const SystemParams& p, double t);

DensityMatrix rho_abc(const SystemParams& p, double t);
DensityMatrix rho_ab(const SystemParams& p, double t);
DensityMatrix rho_ac(const SystemParams& p, double t);
DensityMatrix rho_bc(const SystemParams& p, double t);
DensityMatrix rho_a(const SystemParams& p, double t);
DensityMatrix rho_b(const SystemParams& p, double t);
DensityMatrix rho_c(const SystemParams& p, double t);

/// Two-atom state written directly from the amplitudes (X-shaped, only the
/// |e g>, |g e> coherence survives the cavity trace).
DensityMatrix rho_ab_explicit(const Amplitudes& a);

/// The pure state A (x) BC compressed to two qubits A (x) X, where |0_X> and
/// |1_X> are the normalised BC states paired with A excited and A ground.
/// In the (00, 01, 10, 11) basis only the central block is populated:
/// diagonal (|x2|^2+|x3|^2, |x1|^2+|x4|^2) with real coherence
/// sqrt((|x1|^2+|x4|^2)(|x2|^2+|x3|^2)). A vanishing branch leaves the
/// rank-1 projector onto the other one.
DensityMatrix equivalent_two_qubit(const Amplitudes& a);
DensityMatrix equivalent_two_qubit(const SystemParams& p, double t);

}  // namespace jcd
