// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line so the run log doubles as a checklist.

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>

#include "helpers.hpp"
#include "relaxometer/numerics.hpp"
#include "relaxometer/observables.hpp"
#include "relaxometer/propagator.hpp"

using namespace relaxometer;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Setup {
    SystemParams params{1.0, 0.7};
    SpectralDecomposition spec = diagonalize(params);

    BathConfig bath(Topology topo, double beta = 10.0, double kappa = 0.01) const {
        return testutil::case_bath(topo, beta, kappa);
    }
    RateTable rates(Topology topo, double beta = 10.0, double kappa = 0.01) const {
        return make_rate_table(spec, bath(topo, beta, kappa), params);
    }
};

void verdict(int criterion, bool ok, const char* what) {
    std::printf("criterion %2d: %s - %s\n", criterion, ok ? "PASS" : "FAIL", what);
    CHECK(ok);
}

}  // namespace

TEST_CASE("criterion 1: two baths thermalize every preset into Gibbs") {
    const Setup s;
    const RateTable rt = s.rates(Topology::TwoBath);
    const DensityMatrix gibbs = make_state(StatePreset::Gibbs, s.spec, 10.0);
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (StatePreset p : {StatePreset::PsiA, StatePreset::PsiB, StatePreset::PsiC,
                          StatePreset::PsiD, StatePreset::Mix1, StatePreset::Mix2,
                          StatePreset::Gibbs}) {
        const DensityMatrix rho0 = make_state(p, s.spec, 10.0);
        const Matrix4c late = propagate(rho0, s.spec, rt, 5000.0).m;
        worst = std::max(worst, (late - gibbs.m).cwiseAbs().maxCoeff());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    verdict(1, worst <= 1e-6 && elapsed < 1.0,
            "all presets within 1e-6 of Gibbs by t = 5000, under one second");
}

TEST_CASE("criterion 2: single bath conserves the singlet population") {
    const Setup s;
    const RateTable rt = s.rates(Topology::SingleBath);
    const DensityMatrix rho0 = make_state(StatePreset::Mix1, s.spec);  // rho33(0) = 0.5
    const double p33 = rho0.m(2, 2).real();

    double closed_dev = 0.0;
    for (double t : default_time_grid(1e-1, 1e6, 60))
        closed_dev = std::max(closed_dev,
                              std::abs(propagate(rho0, s.spec, rt, t).m(2, 2).real() - p33));

    const Vector4 ode = integrate_populations(rho0.m.diagonal().real(), rt.w, 1e6, 0.3);
    const double ode_dev = std::abs(ode(2) - p33);
    verdict(2, closed_dev <= 1e-12 && ode_dev <= 1e-9,
            "rho33 drift <= 1e-12 closed form, <= 1e-9 RK4, over t in [0, 1e6]");
}

TEST_CASE("criterion 3: single-bath equilibrium keeps the singlet weight") {
    const Setup s;
    const DensityMatrix rho0 = make_state(StatePreset::PsiD, s.spec);

    // beta = 10: half the weight Boltzmann-distributed over levels 1, 2, 4
    const RateTable warm = s.rates(Topology::SingleBath);
    const Matrix4c late = propagate(rho0, s.spec, warm, 5e6).m;
    Eigen::Vector3d w3;
    w3 << 1.0, std::exp(-10.0 * (s.spec.energies[1] - s.spec.energies[0])),
        std::exp(-10.0 * (s.spec.energies[3] - s.spec.energies[0]));
    w3 /= w3.sum();
    double warm_dev = std::abs(late(2, 2).real() - 0.5);
    warm_dev = std::max(warm_dev, std::abs(late(0, 0).real() - 0.5 * w3(0)));
    warm_dev = std::max(warm_dev, std::abs(late(1, 1).real() - 0.5 * w3(1)));
    warm_dev = std::max(warm_dev, std::abs(late(3, 3).real() - 0.5 * w3(2)));

    // beta = inf: all non-singlet weight condenses into the ground state
    const RateTable cold = s.rates(Topology::SingleBath, kInf);
    const Matrix4c frozen = propagate(rho0, s.spec, cold, 5e6).m;
    double cold_dev = 0.0;
    const double want[4] = {0.5, 0.0, 0.5, 0.0};
    for (int i = 0; i < 4; ++i)
        cold_dev = std::max(cold_dev, std::abs(frozen(i, i).real() - want[i]));

    verdict(3, warm_dev <= 1e-6 && cold_dev <= 1e-6,
            "psi_d diagonal reaches the restricted Boltzmann form at beta = 10 and inf");
}

TEST_CASE("criterion 4: equilibrium entropy of psi_d at T = 0 is one bit") {
    const Setup s;
    const DensityMatrix rho0 = make_state(StatePreset::PsiD, s.spec);
    const EquilibriumState eq = equilibrium_state(rho0, s.spec, s.bath(Topology::SingleBath, kInf),
                                                  s.rates(Topology::SingleBath, kInf));
    const double entropy = von_neumann_entropy(eq.rho);
    verdict(4, std::abs(entropy - 1.0) <= 1e-3, "S_eq = 1.000 +- 0.001 bits");
}

TEST_CASE("criterion 5: equilibrium concurrence of psi_d at T = 0") {
    const Setup s;
    const DensityMatrix rho0 = make_state(StatePreset::PsiD, s.spec);
    const EquilibriumState eq = equilibrium_state(rho0, s.spec, s.bath(Topology::SingleBath, kInf),
                                                  s.rates(Topology::SingleBath, kInf));
    const double c = concurrence(eq.rho, s.spec);
    verdict(5, std::abs(c - 0.33) <= 0.02, "C_eq = 0.33 +- 0.02");
}

TEST_CASE("criterion 6: semi-protected rate hierarchy") {
    const Setup s;
    const RateTable rt = s.rates(Topology::SingleBath);
    const double ratio = rt.gamma(0, 1) / rt.gamma(0, 2);
    verdict(6, ratio >= 3e2 && ratio <= 3e3, "gamma_12 / gamma_13 in [3e2, 3e3]");
}

TEST_CASE("criterion 7: relaxation-time separation") {
    const Setup s;
    const BathConfig cfg = s.bath(Topology::SingleBath);
    const RateTable rt = s.rates(Topology::SingleBath);
    double fast_max = 0.0;
    bool ok = true;
    for (StatePreset p :
         {StatePreset::PsiA, StatePreset::PsiB, StatePreset::Mix1, StatePreset::Mix2}) {
        const RelaxationResult r = relaxation_time(make_state(p, s.spec), s.spec, cfg, rt);
        ok = ok && r.converged && r.time >= 1e2 && r.time < 1e3;
        fast_max = std::max(fast_max, r.time);
    }
    const RelaxationResult slow =
        relaxation_time(make_state(StatePreset::PsiD, s.spec), s.spec, cfg, rt);
    ok = ok && slow.converged && slow.time >= 1e5 && slow.time < 1e6;
    ok = ok && slow.time / fast_max > 1e2;
    verdict(7, ok, "psi_a/b, mixes at 1e2-1e3; psi_d at 1e5-1e6; ratio above 1e2");
}

TEST_CASE("criterion 8: mixtures evolve as mixtures") {
    const Setup s;
    const BathConfig cfg = s.bath(Topology::SingleBath);
    const RateTable rt = s.rates(Topology::SingleBath);
    const DensityMatrix mix1 = make_state(StatePreset::Mix1, s.spec);
    const DensityMatrix a = make_state(StatePreset::PsiA, s.spec);
    const DensityMatrix c = make_state(StatePreset::PsiC, s.spec);

    double dev = 0.0;
    for (double t : default_time_grid(1e-1, 1e6, 80)) {
        const Matrix4c lhs = propagate(mix1, s.spec, rt, t).m;
        const Matrix4c rhs =
            0.5 * (propagate(a, s.spec, rt, t).m + propagate(c, s.spec, rt, t).m);
        dev = std::max(dev, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    const RelaxationResult r1 = relaxation_time(mix1, s.spec, cfg, rt);
    const RelaxationResult r2 =
        relaxation_time(make_state(StatePreset::Mix2, s.spec), s.spec, cfg, rt);
    const double ratio = r1.time / r2.time;
    verdict(8,
            dev <= 1e-12 && r1.converged && r2.converged && ratio < 3.0 && ratio > 1.0 / 3.0,
            "mix1 = (E_t rho_a + E_t rho_c)/2 to 1e-12; times within a factor 3 of mix2");
}

TEST_CASE("criterion 9: closed form against the RK4 oracle") {
    const Setup s;
    bool ok = true;
    double worst = 0.0;
    for (Topology topo : {Topology::TwoBath, Topology::SingleBath}) {
        const RateTable rt = s.rates(topo);
        const double dt = 0.5 * secular_step_bound(rt, s.spec);
        const double ts[3] = {5.0, 37.0, 100.0};
        for (int trial = 0; trial < 20; ++trial) {
            DensityMatrix rho0;
            rho0.basis = Basis::EigenBasis;
            rho0.m = testutil::random_density(4);
            const double t = ts[trial % 3];
            const Matrix4c ode = integrate_secular(rho0.m, rt, s.spec, t, dt);
            const Matrix4c closed = propagate(rho0, s.spec, rt, t).m;
            worst = std::max(worst, (ode - closed).cwiseAbs().maxCoeff());
        }
    }
    ok = worst <= 1e-8;

    // fourth-order convergence: halving the step divides the error by ~16
    const RateTable rt = s.rates(Topology::TwoBath);
    const Vector4 p0(0.1, 0.4, 0.2, 0.3);
    const double t = 60.0;
    const Vector4 exact = populations_two_bath(p0, rt, t);
    const double e1 = (integrate_populations(p0, rt.w, t, 6.0) - exact).cwiseAbs().maxCoeff();
    const double e2 = (integrate_populations(p0, rt.w, t, 3.0) - exact).cwiseAbs().maxCoeff();
    const double ratio = e1 / e2;
    ok = ok && ratio >= 12.0 && ratio <= 20.0;
    verdict(9, ok, "sup deviation <= 1e-8 over 20 random states per topology; halving ratio in [12, 20]");
}

TEST_CASE("criterion 10: structural invariant suite") {
    const Setup s;
    bool ok = true;

    // detailed balance to 1e-10 across random parameters
    for (int trial = 0; trial < 40 && ok; ++trial) {
        const SystemParams params{testutil::uniform(0.2, 2.0), testutil::uniform(0.05, 2.0)};
        BathConfig cfg;
        cfg.topology = trial % 2 == 0 ? Topology::TwoBath : Topology::SingleBath;
        cfg.kappa = testutil::uniform(0.001, 0.2);
        cfg.beta = testutil::uniform(0.5, 12.0);
        const SpectralDecomposition spec = diagonalize(params);
        const Matrix4 w = transition_rates_first_principles(spec, cfg, params);
        for (int m = 0; m < 4; ++m)
            for (int n = m + 1; n < 4; ++n) {
                if (w(m, n) < 1e-200 || w(n, m) < 1e-200) continue;
                const double resid =
                    std::log(w(n, m) / w(m, n)) + cfg.beta * spec.omega(n, m);
                if (std::abs(resid) > 1e-10) ok = false;
            }
    }

    // exact topology zero patterns
    const Matrix4 ws = s.rates(Topology::SingleBath).w;
    for (int i = 0; i < 4; ++i)
        if (ws(i, 2) != 0.0 || ws(2, i) != 0.0) ok = false;
    const Matrix4 wt = s.rates(Topology::TwoBath).w;
    if (wt(2, 1) != 0.0 || wt(1, 2) != 0.0) ok = false;
    if (std::abs(ws(3, 0)) > 1e-14 || std::abs(wt(3, 0)) > 1e-14) ok = false;

    // every trajectory sample is a valid state
    const RateTable rt = s.rates(Topology::SingleBath);
    for (StatePreset p : {StatePreset::PsiA, StatePreset::PsiD}) {
        const DensityMatrix rho0 = make_state(p, s.spec);
        for (double t : default_time_grid(1e-1, 1e6, 40)) {
            const DensityMatrix rho = propagate(rho0, s.spec, rt, t);
            try {
                rho.validate();
            } catch (const std::exception&) {
                ok = false;
            }
        }
    }

    // concurrence invariances
    for (int trial = 0; trial < 10 && ok; ++trial) {
        DensityMatrix rho;
        rho.basis = Basis::Computational;
        rho.m = testutil::random_density(4);
        const Eigen::MatrixXcd u = testutil::random_unitary(2);
        const Eigen::MatrixXcd w2 = testutil::random_unitary(2);
        Matrix4c uw = Matrix4c::Zero();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) uw.block<2, 2>(2 * i, 2 * j) = u(i, j) * w2;
        DensityMatrix rotated;
        rotated.basis = Basis::Computational;
        rotated.m = uw * rho.m * uw.adjoint();
        if (std::abs(concurrence(rho, s.spec) - concurrence(rotated, s.spec)) > 1e-8) ok = false;
    }
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.75, 1.0}) {
        Eigen::Vector4cd sv;
        sv << 0.0, 1.0, -1.0, 0.0;
        sv /= std::sqrt(2.0);
        DensityMatrix wstate;
        wstate.basis = Basis::Computational;
        wstate.m = p * (sv * sv.adjoint()) + (1.0 - p) * 0.25 * Matrix4c::Identity();
        const double want = std::max(0.0, (3.0 * p - 1.0) / 2.0);
        if (std::abs(concurrence(wstate, s.spec) - want) > 1e-9) ok = false;
    }

    verdict(10, ok,
            "detailed balance, zero patterns, state validity, concurrence invariances");
}

TEST_CASE("criterion 11: entanglement revival at beta = 20") {
    const Setup s;
    const RateTable rt = s.rates(Topology::SingleBath, 20.0);
    const EquilibriumState eq =
        equilibrium_state(make_state(StatePreset::PsiA, s.spec), s.spec,
                          s.bath(Topology::SingleBath, 20.0), rt);
    const DensityMatrix rho0 = make_state(StatePreset::PsiA, s.spec);

    bool died = false, revived_before_eq = false;
    for (double t : default_time_grid(1.0, 2e3, 800)) {
        const DensityMatrix rho = propagate(rho0, s.spec, rt, t);
        const double c = concurrence(rho, s.spec);
        const double dist = (rho.m - eq.rho.m).cwiseAbs().maxCoeff();
        if (!died && c <= 1e-3) died = true;
        if (died && c > 0.01 && dist > 0.01) revived_before_eq = true;
    }
    verdict(11, died && revived_before_eq,
            "concurrence hits <= 1e-3, then exceeds 0.01 before reaching equilibrium");
}

TEST_CASE("criterion 12: rates scale linearly in the coupling") {
    const Setup s;
    const DensityMatrix rho0 = make_state(StatePreset::PsiA, s.spec);
    const RelaxationResult r1 = relaxation_time(
        rho0, s.spec, s.bath(Topology::SingleBath, 10.0, 0.01), s.rates(Topology::SingleBath, 10.0, 0.01));
    const RelaxationResult r2 = relaxation_time(
        rho0, s.spec, s.bath(Topology::SingleBath, 10.0, 0.02), s.rates(Topology::SingleBath, 10.0, 0.02));
    const double ratio = r1.converged && r2.converged ? r1.time / r2.time : 0.0;
    verdict(12, std::abs(ratio - 2.0) <= 0.1, "doubling kappa halves the timescale within 5%");
}
