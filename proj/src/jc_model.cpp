#include "jcdiscord/jc_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace jcd {

namespace {

void require_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative, got " + std::to_string(t));
}

}  // namespace

SystemParams::SystemParams(double alpha, int n, double g, double nu)
    : SystemParams(alpha, n, g, nu, nu) {}

SystemParams::SystemParams(double alpha, int n, double g, double nu, double omega)
    : alpha_(alpha), n_(n), g_(g), nu_(nu), omega_(omega) {
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > std::numbers::pi / 2 + 1e-12) {
    throw std::invalid_argument("alpha must lie in [0, pi/2]");
  }
  if (n < 0) throw std::invalid_argument("cavity Fock number n must be non-negative");
  if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("coupling g must be positive");
  if (!std::isfinite(nu) || !std::isfinite(omega)) {
    throw std::invalid_argument("frequencies must be finite");
  }
  if (omega != nu) {
    throw std::invalid_argument("only resonant dynamics are supported: detuning omega - nu = " +
                                std::to_string(omega - nu) + " must be 0");
  }
}

double SystemParams::rabi_upper() const { return g_ * std::sqrt(static_cast<double>(n_) + 1.0); }
double SystemParams::rabi_lower() const { return g_ * std::sqrt(static_cast<double>(n_)); }

std::array<double, 4> Amplitudes::populations() const {
  return {std::norm(x[0]), std::norm(x[1]), std::norm(x[2]), std::norm(x[3])};
}

CavityBasis CavityBasis::for_params(const SystemParams& p) {
  if (p.n() == 0) return {{0, 1}};
  return {{p.n() - 1, p.n(), p.n() + 1}};
}

std::size_t CavityBasis::index_of(int fock) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == fock) return i;
  }
  throw std::out_of_range("Fock level " + std::to_string(fock) + " is outside the cavity basis");
}

Amplitudes amplitudes(const SystemParams& p, double t) {
  require_time(t);
  const Complex phase = std::polar(1.0, -static_cast<double>(p.n()) * p.nu() * t);
  const Complex minus_i(0.0, -1.0);
  const double upper = p.rabi_upper() * t;
  const double lower = p.rabi_lower() * t;
  const double c = std::cos(p.alpha());
  const double s = std::sin(p.alpha());

  Amplitudes a;
  a.t = t;
  a.x[0] = phase * (std::cos(upper) * c);
  a.x[1] = phase * (std::cos(lower) * s);
  a.x[2] = minus_i * phase * (std::sin(upper) * c);
  // sin(0) is exactly 0, so x4 vanishes identically for n == 0.
  a.x[3] = minus_i * phase * (std::sin(lower) * s);
  return a;
}

std::size_t basis_index(const CavityBasis& basis, AtomLevel a, AtomLevel b, int fock) {
  const std::size_t dc = basis.size();
  return (static_cast<std::size_t>(a) * 2 + static_cast<std::size_t>(b)) * dc + basis.index_of(fock);
}

std::vector<Complex> state_vector(const SystemParams& p, double t) {
  const auto amp = amplitudes(p, t);
  const auto basis = CavityBasis::for_params(p);
  const int n = p.n();
  using enum AtomLevel;

  std::vector<Complex> psi(4 * basis.size(), Complex{});
  psi[basis_index(basis, excited, ground, n)] = amp.x[0];
  psi[basis_index(basis, ground, excited, n)] = amp.x[1];
  psi[basis_index(basis, ground, ground, n + 1)] = amp.x[2];
  if (n > 0) psi[basis_index(basis, excited, excited, n - 1)] = amp.x[3];
  return psi;
}

DensityMatrix rho_abc(const SystemParams& p, double t) {
  const auto psi = state_vector(p, t);
  const auto basis = CavityBasis::for_params(p);
  return {ComplexMatrix::outer(psi), SubsystemDims{2, 2, basis.size()}};
}

DensityMatrix rho_ab(const SystemParams& p, double t) { return partial_trace(rho_abc(p, t), {kAtomA, kAtomB}); }
DensityMatrix rho_ac(const SystemParams& p, double t) { return partial_trace(rho_abc(p, t), {kAtomA, kCavity}); }
DensityMatrix rho_bc(const SystemParams& p, double t) { return partial_trace(rho_abc(p, t), {kAtomB, kCavity}); }
DensityMatrix rho_a(const SystemParams& p, double t) { return partial_trace(rho_abc(p, t), {kAtomA}); }
DensityMatrix rho_b(const SystemParams& p, double t) { return partial_trace(rho_abc(p, t), {kAtomB}); }
DensityMatrix rho_c(const SystemParams& p, double t) { return partial_trace(rho_abc(p, t), {kCavity}); }

DensityMatrix rho_ab_explicit(const Amplitudes& a) {
  const auto pop = a.populations();
  ComplexMatrix m(4, 4);
  // Order (ee, eg, ge, gg).
  m(0, 0) = pop[3];
  m(1, 1) = pop[0];
  m(2, 2) = pop[1];
  m(3, 3) = pop[2];
  m(1, 2) = a.x[0] * std::conj(a.x[1]);
  m(2, 1) = a.x[1] * std::conj(a.x[0]);
  return {std::move(m), SubsystemDims{2, 2}};
}

DensityMatrix equivalent_two_qubit(const Amplitudes& a) {
  const auto pop = a.populations();
  const double excited_branch = pop[0] + pop[3];
  const double ground_branch = pop[1] + pop[2];
  ComplexMatrix m(4, 4);
  m(1, 1) = ground_branch;
  m(2, 2) = excited_branch;
  m(1, 2) = m(2, 1) = std::sqrt(excited_branch * ground_branch);
  return {std::move(m), SubsystemDims{2, 2}};
}

DensityMatrix equivalent_two_qubit(const SystemParams& p, double t) {
  return equivalent_two_qubit(amplitudes(p, t));
}

}  // namespace jcd
