// numerics.hpp -- independent numerical machinery used to validate the
// closed forms: a cyclic Jacobi eigensolver for small Hermitian matrices,
// a PSD matrix square root, a fixed-step RK4 integrator for the secular
// master equation, and quadrature routes for the rate integrals.

#pragma once

#include "relaxometer/bath.hpp"
#include "relaxometer/system.hpp"

namespace relaxometer {

struct EighResult {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXcd vectors;  // orthonormal columns
};

/// Cyclic Jacobi iteration for Hermitian complex matrices, n <= 8.
/// Off-diagonal norm threshold 1e-14, at most 100 sweeps.
EighResult eigh(const Eigen::MatrixXcd& h);

/// Hermitian PSD square root via eigh; eigenvalues in [-1e-9, 0) are
/// clipped to zero, larger negatives are an error.
Eigen::MatrixXcd sqrtm_psd(const Eigen::MatrixXcd& rho);

/// Fixed-step RK4 for the population equations
/// dp_m/dt = sum_n p_n W_mn - p_m sum_n W_nm.
Vector4 integrate_populations(const Vector4& p0, const Matrix4& w, double t_end, double dt);

/// Fixed-step RK4 for the full secular master equation (populations plus
/// decoupled coherences). dt must satisfy dt <= 0.01 / max(|omega|, rates).
Matrix4c integrate_secular(const Matrix4c& rho0_eigen, const RateTable& rates,
                           const SpectralDecomposition& spec, double t_end, double dt);

/// Largest admissible RK4 step for the given problem.
double secular_step_bound(const RateTable& rates, const SpectralDecomposition& spec);

/// Re I^+(omega) from the analytic half-line form. Same formula as the
/// production rate path but evaluated here so tests can call it by name.
double rate_quadrature_formula(double omega, const BathConfig& cfg);

/// Re I^+(omega) = Re \int_0^inf dt e^{-i omega t} <X(t)X>_beta by numerical
/// time quadrature of the ohmic correlation function (independent route).
double rate_quadrature_time_domain(double omega, const BathConfig& cfg);

}  // namespace relaxometer
