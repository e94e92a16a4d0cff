// system.hpp -- two-qubit Hamiltonian, spectral decomposition, density
// matrices and the named initial states.

#pragma once

#include <array>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace relaxometer {

using complex_t = std::complex<double>;
using Matrix4 = Eigen::Matrix4d;
using Matrix4c = Eigen::Matrix4cd;
using Vector4 = Eigen::Vector4d;

/// Tunneling and Ising couplings of H = -Delta/2 (sx + tx) - v/2 sz tz.
struct SystemParams {
    double delta{1.0};  // tunneling coupling, same for both spins
    double v{0.0};      // Ising coupling strength

    void validate() const {
        if (!(delta >= 0.0)) throw std::invalid_argument("SystemParams: delta must be >= 0");
        if (!(v >= 0.0)) throw std::invalid_argument("SystemParams: v must be >= 0");
        if (delta == 0.0 && v == 0.0)
            throw std::invalid_argument("SystemParams: delta and v cannot both vanish");
    }
};

/// Exact eigensystem of the two-qubit Hamiltonian. Indices follow the fixed
/// order E1 <= E2 <= E3 <= E4 with |3> always the singlet, so that the rate
/// formulas stay index-tied for every parameter choice.
struct SpectralDecomposition {
    std::array<double, 4> energies{};  // E1..E4
    double r_plus{}, r_minus{}, s_plus{}, s_minus{};
    Matrix4 vectors;  // columns |1>..|4> in the computational basis
    Matrix4 omega;    // omega(m,n) = E_m - E_n

    double energy_splitting() const { return energies[3] - energies[0]; }
};

enum class Basis { Computational, EigenBasis };

/// 4x4 Hermitian, PSD, trace-one matrix with a tagged basis.
struct DensityMatrix {
    Matrix4c m{Matrix4c::Zero()};
    Basis basis{Basis::Computational};

    double trace_error() const { return std::abs(m.trace() - complex_t{1.0, 0.0}); }
    double hermiticity_error() const { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

    // Hermitian to 1e-10, trace 1 to 1e-10, eigenvalues >= -1e-9.
    void validate() const;
};

enum class StatePreset { PsiA, PsiB, PsiC, PsiD, Mix1, Mix2, Gibbs };

StatePreset parse_preset(const std::string& name);
std::string preset_name(StatePreset preset);

/// H_S in the sigma_z tau_z product basis |++>, |+->, |-+>, |-->.
Matrix4 build_hamiltonian(const SystemParams& params);

/// Closed-form eigensystem; phases fixed to the real conventions
/// (r_pm, s_pm real, |2> = [-1,0,0,1]/sqrt(2), |3> = [0,-1,1,0]/sqrt(2)).
SpectralDecomposition diagonalize(const SystemParams& params);

DensityMatrix to_eigenbasis(const DensityMatrix& rho, const SpectralDecomposition& spec);
DensityMatrix from_eigenbasis(const DensityMatrix& rho, const SpectralDecomposition& spec);

/// Named initial states, returned in the eigenbasis. `beta` is only read for
/// the Gibbs preset (+inf allowed, giving the ground-state projector).
DensityMatrix make_state(StatePreset preset, const SpectralDecomposition& spec,
                         double beta = std::numeric_limits<double>::infinity());

/// Pure state |psi><psi| from computational-basis amplitudes.
DensityMatrix pure_state_computational(const Eigen::Vector4cd& amplitudes);

}  // namespace relaxometer
