// propagator.hpp -- closed-form time evolution of the reduced density
// matrix, equilibrium states, and relaxation-time extraction.

#pragma once

#include <optional>
#include <vector>

#include "relaxometer/bath.hpp"
#include "relaxometer/system.hpp"

namespace relaxometer {

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;  // eigenbasis
};

/// 4x4 stochastic kernel K(t) with p(t) = K(t) p(0) for the two-bath
/// population equations. Columns sum to one.
Matrix4 population_kernel_two_bath(const RateTable& rates, double t);

Vector4 populations_two_bath(const Vector4& p0, const RateTable& rates, double t);

/// Laplace partial-fraction solution over the cubic denominator
/// lambda [W12 (lambda + W24) + (lambda + W21)(lambda + W24 + W42)];
/// rho33 is constant. Near-degenerate quadratic roots fall back to RK4.
Vector4 populations_single_bath(const Vector4& p0, const RateTable& rates, double t);

Vector4 populations(const Vector4& p0, const RateTable& rates, double t);

/// rho_ij(t) = rho_ij(0) exp[-(gamma_ij + i omega_ij) t] applied to all
/// off-diagonal entries of a state in the eigenbasis.
Matrix4c apply_coherence_decay(const Matrix4c& rho0, const RateTable& rates,
                               const SpectralDecomposition& spec, double t);

/// Full secular propagation of an eigenbasis state.
DensityMatrix propagate(const DensityMatrix& rho0, const SpectralDecomposition& spec,
                        const RateTable& rates, double t);

Trajectory evolve(const DensityMatrix& rho0, const SpectralDecomposition& spec,
                  const RateTable& rates, const std::vector<double>& times);

struct EquilibriumState {
    DensityMatrix rho;  // diagonal, eigenbasis
    // Moduli of initial singlet coherences whose decay rate is exactly zero
    // (strict T = 0, single bath); they survive and are reported instead of
    // being folded into rho.
    std::vector<std::pair<int, double>> residual_coherences;
};

/// Two baths: Gibbs. Single bath: the irreducible-subspace equilibrium with
/// singlet weight |B|^2 = rho33(0).
EquilibriumState equilibrium_state(const DensityMatrix& rho0, const SpectralDecomposition& spec,
                                   const BathConfig& cfg, const RateTable& rates);

struct RelaxationResult {
    bool converged{false};
    double time{0.0};               // first time the distance stays below threshold
    double analytic_estimate{0.0};  // 1 / (slowest excited nonzero decay rate)
};

/// Sup-norm distance of the propagated state to its equilibrium.
double distance_to_equilibrium(const DensityMatrix& rho0, const SpectralDecomposition& spec,
                               const RateTable& rates, const EquilibriumState& eq, double t);

RelaxationResult relaxation_time(const DensityMatrix& rho0, const SpectralDecomposition& spec,
                                 const BathConfig& cfg, const RateTable& rates,
                                 double threshold = 0.01, double t_max = 1e7);

/// Log-spaced default grid covering both the t ~ 4e2 and t ~ 4e5 regimes.
std::vector<double> default_time_grid(double t_start = 1e-1, double t_end = 1e6,
                                      std::size_t count = 400);

}  // namespace relaxometer
