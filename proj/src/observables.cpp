#include "relaxometer/observables.hpp"

#include <algorithm>
#include <cmath>

#include "relaxometer/numerics.hpp"

namespace relaxometer {

namespace {

// sigma_y (x) sigma_y is real and antidiagonal in the computational basis.
Matrix4 spin_flip_matrix() {
    Matrix4 yy = Matrix4::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    return yy;
}

double clip_eigenvalue(double x) {
    if (x < -1e-9) throw std::invalid_argument("negative eigenvalue beyond PSD tolerance");
    return std::max(0.0, x);
}

}  // namespace

double concurrence(const DensityMatrix& rho, const SpectralDecomposition& spec) {
    const Matrix4c rc =
        rho.basis == Basis::Computational ? rho.m : from_eigenbasis(rho, spec).m;
    const Matrix4 yy = spin_flip_matrix();
    const Matrix4c flipped = yy * rc.conjugate() * yy;
    const Eigen::MatrixXcd root = sqrtm_psd(rc);
    const EighResult es = eigh(root * flipped * root);
    // eigh returns ascending order; Wootters wants descending square roots
    double c = 0.0;
    for (int i = 3; i >= 0; --i) {
        const double sq = std::sqrt(clip_eigenvalue(es.values(i)));
        c += (i == 3 ? sq : -sq);
    }
    return std::clamp(c, 0.0, 1.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const EighResult es = eigh(rho.m);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double p = clip_eigenvalue(es.values(i));
        if (p > 0.0) s -= p * std::log2(p);
    }
    return std::max(0.0, s);
}

double purity(const DensityMatrix& rho) {
    return (rho.m * rho.m).trace().real();
}

ObservableSample sample_observables(double t, const DensityMatrix& rho,
                                    const SpectralDecomposition& spec) {
    ObservableSample s;
    s.t = t;
    s.concurrence = concurrence(rho, spec);
    s.entropy = von_neumann_entropy(rho);
    s.purity = purity(rho);
    return s;
}

}  // namespace relaxometer
