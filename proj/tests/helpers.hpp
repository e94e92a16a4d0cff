// shared fixtures for the test suite: deterministic random matrices and the
// default case-study parameters.

#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "relaxometer/bath.hpp"
#include "relaxometer/system.hpp"

namespace testutil {

using relaxometer::Matrix4c;
using complex_t = std::complex<double>;

inline std::mt19937& rng() {
    static std::mt19937 gen(20260825u);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Eigen::MatrixXcd random_complex(int n) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = complex_t(g(rng()), g(rng()));
    return a;
}

inline Eigen::MatrixXcd random_hermitian(int n) {
    const Eigen::MatrixXcd a = random_complex(n);
    return 0.5 * (a + a.adjoint());
}

/// Normalized Wishart matrix: Hermitian, PSD, trace one.
inline Eigen::MatrixXcd random_density(int n) {
    const Eigen::MatrixXcd a = random_complex(n);
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace().real();
}

inline Eigen::MatrixXcd random_unitary(int n) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_complex(n));
    Eigen::MatrixXcd q = qr.householderQ();
    // fix the phase convention so Q is deterministic given the input
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const complex_t d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

/// Default case study: delta = 1, v = 0.7, kappa = 0.01, beta = 10.
inline relaxometer::SystemParams case_params() { return {1.0, 0.7}; }

inline relaxometer::BathConfig case_bath(relaxometer::Topology topo,
                                         double beta = 10.0, double kappa = 0.01) {
    relaxometer::BathConfig cfg;
    cfg.topology = topo;
    cfg.kappa = kappa;
    cfg.beta = beta;
    return cfg.resolved(case_params());
}

}  // namespace testutil
