#include "relaxometer/propagator.hpp"

#include <cmath>

#include "relaxometer/numerics.hpp"

namespace relaxometer {

namespace {

// 2x2 relaxation kernel for one transition pair: `up` is the excitation
// rate out of the lower level, `down` the decay rate into it.
struct PairKernel {
    double k[2][2];

    PairKernel(double up, double down, double t) {
        const double g = up + down;
        if (g <= 0.0) {
            k[0][0] = k[1][1] = 1.0;
            k[0][1] = k[1][0] = 0.0;
            return;
        }
        const double p = down / g;  // equilibrium weight of the lower level
        const double n = up / g;
        const double e = std::exp(-g * t);
        k[0][0] = p + n * e;
        k[0][1] = p * (1.0 - e);
        k[1][0] = n * (1.0 - e);
        k[1][1] = n + p * e;
    }
};

void check_time(double t) {
    if (t < 0.0) throw std::invalid_argument("propagation time must be >= 0");
}

}  // namespace

Matrix4 population_kernel_two_bath(const RateTable& rates, double t) {
    check_time(t);
    // The two-bath zero pattern W41 = W32 = 0, W43 = W21, W42 = W31 factorizes
    // the four levels into two independent transition pairs (1,2) and (1,3):
    // state index -> pair bits 1:(0,0) 2:(1,0) 3:(0,1) 4:(1,1).
    const PairKernel ka(rates.w(1, 0), rates.w(0, 1), t);
    const PairKernel kb(rates.w(2, 0), rates.w(0, 2), t);
    const int abit[4] = {0, 1, 0, 1};
    const int bbit[4] = {0, 0, 1, 1};
    Matrix4 k;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            k(i, j) = ka.k[abit[i]][abit[j]] * kb.k[bbit[i]][bbit[j]];
    return k;
}

Vector4 populations_two_bath(const Vector4& p0, const RateTable& rates, double t) {
    return population_kernel_two_bath(rates, t) * p0;
}

namespace {

// Cramer numerator of the Laplace-transformed 1-2-4 chain, evaluated at lam.
// Unknowns ordered (rho1, rho2, rho4), right-hand side b = initial values.
double chain_numerator(int i, double lam, const Matrix4& w, const Eigen::Vector3d& b) {
    const double w21 = w(1, 0), w12 = w(0, 1), w42 = w(3, 1), w24 = w(1, 3);
    Eigen::Matrix3d m;
    m << lam + w21, -w12, 0.0,
         -w21, lam + w12 + w42, -w24,
         0.0, -w42, lam + w24;
    m.col(i) = b;
    return m.determinant();
}

}  // namespace

Vector4 populations_single_bath(const Vector4& p0, const RateTable& rates, double t) {
    check_time(t);
    const Matrix4& w = rates.w;
    const double w21 = w(1, 0), w12 = w(0, 1), w42 = w(3, 1), w24 = w(1, 3);
    const double s = w12 + w21 + w24 + w42;
    const double p = w12 * w24 + w21 * w24 + w21 * w42;

    Vector4 out;
    out(2) = p0(2);  // DFS: singlet population is conserved
    if (s <= 0.0) {
        return p0;  // no dissipation at all
    }

    const double disc = s * s - 4.0 * p;
    const double sq = disc > 0.0 ? std::sqrt(disc) : 0.0;
    const double lam_slow = 0.5 * (-s + sq);
    const double lam_fast = 0.5 * (-s - sq);
    // Partial fractions need three distinct real poles {0, lam_slow, lam_fast};
    // otherwise integrate the chain directly.
    if (sq < 1e-9 * s || -lam_slow < 1e-9 * s) {
        const Vector4 pt = integrate_populations(p0, w, t, 0.005 / s);
        out(0) = pt(0);
        out(1) = pt(1);
        out(3) = 1.0 - out(0) - out(1) - out(2);
        return out;
    }

    const Eigen::Vector3d b(p0(0), p0(1), p0(3));
    const double poles[3] = {0.0, lam_slow, lam_fast};
    double rho1 = 0.0, rho2 = 0.0;
    for (double lam : poles) {
        const double dprime = 3.0 * lam * lam + 2.0 * s * lam + p;
        const double e = std::exp(lam * t);
        rho1 += e * chain_numerator(0, lam, w, b) / dprime;
        rho2 += e * chain_numerator(1, lam, w, b) / dprime;
    }
    out(0) = rho1;
    out(1) = rho2;
    out(3) = 1.0 - out(0) - out(1) - out(2);
    return out;
}

Vector4 populations(const Vector4& p0, const RateTable& rates, double t) {
    return rates.topology == Topology::TwoBath ? populations_two_bath(p0, rates, t)
                                               : populations_single_bath(p0, rates, t);
}

Matrix4c apply_coherence_decay(const Matrix4c& rho0, const RateTable& rates,
                               const SpectralDecomposition& spec, double t) {
    check_time(t);
    Matrix4c r = rho0;
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            if (m != n)
                r(m, n) = rho0(m, n) *
                          std::exp(complex_t(-rates.gamma(m, n) * t, -spec.omega(m, n) * t));
    return r;
}

DensityMatrix propagate(const DensityMatrix& rho0, const SpectralDecomposition& spec,
                        const RateTable& rates, double t) {
    if (rho0.basis != Basis::EigenBasis)
        throw std::invalid_argument("propagate: state must be in the eigenbasis");
    check_time(t);
    DensityMatrix out;
    out.basis = Basis::EigenBasis;
    out.m = apply_coherence_decay(rho0.m, rates, spec, t);
    const Vector4 pt = populations(rho0.m.diagonal().real(), rates, t);
    for (int i = 0; i < 4; ++i) out.m(i, i) = pt(i);
    return out;
}

Trajectory evolve(const DensityMatrix& rho0, const SpectralDecomposition& spec,
                  const RateTable& rates, const std::vector<double>& times) {
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("evolve: time grid must be strictly increasing");
    Trajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    for (double t : times) traj.states.push_back(propagate(rho0, spec, rates, t));
    return traj;
}

EquilibriumState equilibrium_state(const DensityMatrix& rho0, const SpectralDecomposition& spec,
                                   const BathConfig& cfg, const RateTable& rates) {
    if (rho0.basis != Basis::EigenBasis)
        throw std::invalid_argument("equilibrium_state: state must be in the eigenbasis");
    EquilibriumState eq;
    eq.rho.basis = Basis::EigenBasis;
    if (cfg.topology == Topology::TwoBath) {
        eq.rho = make_state(StatePreset::Gibbs, spec, cfg.beta);
    } else {
        const double singlet_weight = rho0.m(2, 2).real();
        Eigen::Vector3d w3;  // levels 1, 2, 4 of the irreducible subspace
        if (std::isinf(cfg.beta)) {
            w3 << 1.0, 0.0, 0.0;
        } else {
            const double e1 = spec.energies[0];
            w3 << 1.0, std::exp(-cfg.beta * (spec.energies[1] - e1)),
                  std::exp(-cfg.beta * (spec.energies[3] - e1));
            w3 /= w3.sum();
        }
        eq.rho.m.setZero();
        eq.rho.m(0, 0) = (1.0 - singlet_weight) * w3(0);
        eq.rho.m(1, 1) = (1.0 - singlet_weight) * w3(1);
        eq.rho.m(2, 2) = singlet_weight;
        eq.rho.m(3, 3) = (1.0 - singlet_weight) * w3(2);
    }
    for (int m = 0; m < 4; ++m)
        for (int n = m + 1; n < 4; ++n)
            if (rates.gamma(m, n) == 0.0 && std::abs(rho0.m(m, n)) > 1e-15)
                eq.residual_coherences.emplace_back(m * 4 + n, std::abs(rho0.m(m, n)));
    return eq;
}

double distance_to_equilibrium(const DensityMatrix& rho0, const SpectralDecomposition& spec,
                               const RateTable& rates, const EquilibriumState& eq, double t) {
    return (propagate(rho0, spec, rates, t).m - eq.rho.m).cwiseAbs().maxCoeff();
}

namespace {

double slowest_excited_rate(const DensityMatrix& rho0, const RateTable& rates,
                            const EquilibriumState& eq) {
    double slowest = std::numeric_limits<double>::infinity();
    for (int m = 0; m < 4; ++m)
        for (int n = m + 1; n < 4; ++n)
            if (std::abs(rho0.m(m, n)) > 1e-12 && rates.gamma(m, n) > 0.0)
                slowest = std::min(slowest, rates.gamma(m, n));
    bool populations_excited = false;
    for (int i = 0; i < 4; ++i)
        if (std::abs(rho0.m(i, i).real() - eq.rho.m(i, i).real()) > 1e-12)
            populations_excited = true;
    if (populations_excited) {
        if (rates.topology == Topology::TwoBath) {
            const double g1 = rates.w(1, 0) + rates.w(0, 1);
            const double g2 = rates.w(2, 0) + rates.w(0, 2);
            if (g1 > 0.0) slowest = std::min(slowest, g1);
            if (g2 > 0.0) slowest = std::min(slowest, g2);
        } else {
            const double s = rates.w(0, 1) + rates.w(1, 0) + rates.w(1, 3) + rates.w(3, 1);
            const double p = rates.w(0, 1) * rates.w(1, 3) +
                             rates.w(1, 0) * rates.w(1, 3) + rates.w(1, 0) * rates.w(3, 1);
            const double disc = std::max(0.0, s * s - 4.0 * p);
            const double slow = 0.5 * (s - std::sqrt(disc));
            if (slow > 0.0) slowest = std::min(slowest, slow);
        }
    }
    return slowest;
}

}  // namespace

RelaxationResult relaxation_time(const DensityMatrix& rho0, const SpectralDecomposition& spec,
                                 const BathConfig& cfg, const RateTable& rates,
                                 double threshold, double t_max) {
    const EquilibriumState eq = equilibrium_state(rho0, spec, cfg, rates);
    RelaxationResult res;
    const double slowest = slowest_excited_rate(rho0, rates, eq);
    res.analytic_estimate = std::isfinite(slowest) && slowest > 0.0 ? 1.0 / slowest : 0.0;

    auto dist = [&](double t) { return distance_to_equilibrium(rho0, spec, rates, eq, t); };
    if (dist(0.0) < threshold) {
        res.converged = true;
        res.time = 0.0;
        return res;
    }
    for (const auto& [idx, modulus] : eq.residual_coherences) {
        (void)idx;
        if (modulus >= threshold) return res;  // undamped coherence, never converges
    }

    const double t_min = 1e-2;
    const int per_decade = 60;
    const auto count =
        static_cast<int>(std::ceil(per_decade * std::log10(t_max / t_min))) + 1;
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] =
            t_min * std::pow(t_max / t_min, static_cast<double>(i) / (count - 1));

    int last_above = -1;
    for (int i = 0; i < count; ++i)
        if (dist(grid[static_cast<std::size_t>(i)]) >= threshold) last_above = i;
    if (last_above == count - 1) return res;  // not converged within t_max

    double lo = last_above >= 0 ? grid[static_cast<std::size_t>(last_above)] : 0.0;
    double hi = grid[static_cast<std::size_t>(last_above + 1)];
    for (int it = 0; it < 100 && (hi - lo) > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dist(mid) >= threshold ? lo : hi) = mid;
    }
    res.converged = true;
    res.time = hi;
    return res;
}

std::vector<double> default_time_grid(double t_start, double t_end, std::size_t count) {
    if (!(t_start > 0.0) || !(t_end > t_start) || count < 2)
        throw std::invalid_argument("default_time_grid: bad range");
    std::vector<double> ts(count);
    for (std::size_t i = 0; i < count; ++i)
        ts[i] = t_start * std::pow(t_end / t_start,
                                   static_cast<double>(i) / static_cast<double>(count - 1));
    return ts;
}

}  // namespace relaxometer
