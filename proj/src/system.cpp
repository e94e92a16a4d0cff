#include "relaxometer/system.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace relaxometer {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

void DensityMatrix::validate() const {
    if (hermiticity_error() > 1e-10)
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (trace_error() > 1e-10)
        throw std::invalid_argument("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("DensityMatrix: not positive semidefinite");
}

StatePreset parse_preset(const std::string& name) {
    if (name == "psi_a") return StatePreset::PsiA;
    if (name == "psi_b") return StatePreset::PsiB;
    if (name == "psi_c") return StatePreset::PsiC;
    if (name == "psi_d") return StatePreset::PsiD;
    if (name == "mix1") return StatePreset::Mix1;
    if (name == "mix2") return StatePreset::Mix2;
    if (name == "gibbs") return StatePreset::Gibbs;
    throw std::invalid_argument("unknown state preset: " + name);
}

std::string preset_name(StatePreset preset) {
    switch (preset) {
        case StatePreset::PsiA: return "psi_a";
        case StatePreset::PsiB: return "psi_b";
        case StatePreset::PsiC: return "psi_c";
        case StatePreset::PsiD: return "psi_d";
        case StatePreset::Mix1: return "mix1";
        case StatePreset::Mix2: return "mix2";
        case StatePreset::Gibbs: return "gibbs";
    }
    throw std::invalid_argument("unknown state preset");
}

Matrix4 build_hamiltonian(const SystemParams& params) {
    params.validate();
    const double d = params.delta, v = params.v;
    Matrix4 h;
    h << v, d, d, 0,
         d, -v, 0, d,
         d, 0, -v, d,
         0, d, d, v;
    return -0.5 * h;
}

SpectralDecomposition diagonalize(const SystemParams& params) {
    params.validate();
    const double d = params.delta, v = params.v;
    const double w = std::sqrt(v * v + 4.0 * d * d);

    SpectralDecomposition spec;
    spec.energies = {-0.5 * w, -0.5 * v, 0.5 * v, 0.5 * w};
    // 4d^2 + v(v +- w) = w(w +- v); w - v computed as 4d^2/(w+v) so the
    // d -> 0 limit stays finite instead of hitting 0/0.
    const double wp = w + v, wm = 4.0 * d * d / wp;
    spec.r_plus = 0.5 * std::sqrt(wp / w);
    spec.r_minus = 0.5 * std::sqrt(wm / w);
    spec.s_plus = 0.5 * std::sqrt(wm / w);
    spec.s_minus = -0.5 * std::sqrt(wp / w);

    const double rp = spec.r_plus, rm = spec.r_minus;
    const double sp = spec.s_plus, sm = spec.s_minus;
    spec.vectors << rp, -kInvSqrt2, 0.0, rm,
                    sp, 0.0, -kInvSqrt2, sm,
                    sp, 0.0, kInvSqrt2, sm,
                    rp, kInvSqrt2, 0.0, rm;

    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            spec.omega(m, n) = spec.energies[m] - spec.energies[n];
    return spec;
}

DensityMatrix to_eigenbasis(const DensityMatrix& rho, const SpectralDecomposition& spec) {
    if (rho.basis != Basis::Computational)
        throw std::invalid_argument("to_eigenbasis: input already in eigenbasis");
    DensityMatrix out;
    out.basis = Basis::EigenBasis;
    out.m = spec.vectors.transpose() * rho.m * spec.vectors;
    return out;
}

DensityMatrix from_eigenbasis(const DensityMatrix& rho, const SpectralDecomposition& spec) {
    if (rho.basis != Basis::EigenBasis)
        throw std::invalid_argument("from_eigenbasis: input not in eigenbasis");
    DensityMatrix out;
    out.basis = Basis::Computational;
    out.m = spec.vectors * rho.m * spec.vectors.transpose();
    return out;
}

DensityMatrix pure_state_computational(const Eigen::Vector4cd& amplitudes) {
    const double norm = amplitudes.norm();
    if (norm < 1e-12)
        throw std::invalid_argument("pure_state_computational: zero vector");
    Eigen::Vector4cd a = amplitudes / norm;
    DensityMatrix rho;
    rho.basis = Basis::Computational;
    rho.m = a * a.adjoint();
    return rho;
}

namespace {

DensityMatrix pure_in_eigenbasis(const Eigen::Vector4cd& comp_amplitudes,
                                 const SpectralDecomposition& spec) {
    return to_eigenbasis(pure_state_computational(comp_amplitudes), spec);
}

}  // namespace

DensityMatrix make_state(StatePreset preset, const SpectralDecomposition& spec, double beta) {
    // computational basis order: |up,up>, |up,down>, |down,up>, |down,down>
    Eigen::Vector4cd a = Eigen::Vector4cd::Zero();
    switch (preset) {
        case StatePreset::PsiA:  // (|ud> + |du>)/sqrt(2)
            a(1) = a(2) = kInvSqrt2;
            return pure_in_eigenbasis(a, spec);
        case StatePreset::PsiB:  // |uu>
            a(0) = 1.0;
            return pure_in_eigenbasis(a, spec);
        case StatePreset::PsiC: {  // singlet = |3>
            DensityMatrix rho;
            rho.basis = Basis::EigenBasis;
            rho.m(2, 2) = 1.0;
            return rho;
        }
        case StatePreset::PsiD:  // |ud>
            a(1) = 1.0;
            return pure_in_eigenbasis(a, spec);
        case StatePreset::Mix1: {
            DensityMatrix rho;
            rho.basis = Basis::EigenBasis;
            rho.m = 0.5 * (make_state(StatePreset::PsiA, spec).m +
                           make_state(StatePreset::PsiC, spec).m);
            return rho;
        }
        case StatePreset::Mix2: {
            DensityMatrix rho;
            rho.basis = Basis::EigenBasis;
            rho.m = 0.5 * (make_state(StatePreset::PsiA, spec).m +
                           make_state(StatePreset::PsiB, spec).m);
            return rho;
        }
        case StatePreset::Gibbs: {
            if (!(beta > 0.0) && !std::isinf(beta))
                throw std::invalid_argument("make_state: gibbs preset needs beta > 0");
            DensityMatrix rho;
            rho.basis = Basis::EigenBasis;
            if (std::isinf(beta)) {
                rho.m(0, 0) = 1.0;
                return rho;
            }
            const double e1 = spec.energies[0];
            double z = 0.0;
            for (int i = 0; i < 4; ++i) z += std::exp(-beta * (spec.energies[i] - e1));
            for (int i = 0; i < 4; ++i)
                rho.m(i, i) = std::exp(-beta * (spec.energies[i] - e1)) / z;
            return rho;
        }
    }
    throw std::invalid_argument("make_state: unknown preset");
}

}  // namespace relaxometer
