// observables.hpp -- Wootters concurrence, von Neumann entropy and purity.

#pragma once

#include "relaxometer/system.hpp"

namespace relaxometer {

struct ObservableSample {
    double t{0.0};
    double concurrence{0.0};  // in [0, 1]
    double entropy{0.0};      // bits, in [0, 2]
    double purity{1.0};       // in [1/4, 1]
};

/// Wootters concurrence. The spin-flipped matrix is a computational-basis
/// object, so eigenbasis inputs are transformed first; the eigenvalues are
/// taken from the Hermitian form sqrt(rho) rho~ sqrt(rho).
double concurrence(const DensityMatrix& rho, const SpectralDecomposition& spec);

/// -Tr rho log2 rho, basis independent.
double von_neumann_entropy(const DensityMatrix& rho);

/// Tr rho^2.
double purity(const DensityMatrix& rho);

ObservableSample sample_observables(double t, const DensityMatrix& rho,
                                    const SpectralDecomposition& spec);

}  // namespace relaxometer
