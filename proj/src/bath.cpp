#include "relaxometer/bath.hpp"

#include <cmath>
#include <vector>

namespace relaxometer {

Topology parse_topology(const std::string& name) {
    if (name == "two_bath") return Topology::TwoBath;
    if (name == "single_bath") return Topology::SingleBath;
    throw std::invalid_argument("unknown topology: " + name);
}

std::string topology_name(Topology t) {
    return t == Topology::TwoBath ? "two_bath" : "single_bath";
}

double spectral_density(double omega, const BathConfig& cfg) {
    cfg.validate();
    if (omega < 0.0) throw std::invalid_argument("spectral_density: omega must be >= 0");
    if (!(cfg.omega_c > 0.0))
        throw std::invalid_argument("spectral_density: cutoff not resolved");
    return cfg.kappa * omega * std::exp(-omega / cfg.omega_c);
}

double halfline_rate(double omega, const BathConfig& cfg) {
    const double aw = std::abs(omega);
    // omega -> 0: J(|w|) coth(beta |w|/2) -> 2 kappa / beta, the sign term drops.
    if (aw < 1e-12) {
        return std::isinf(cfg.beta) ? 0.0 : M_PI * cfg.kappa / cfg.beta;
    }
    double bracket;  // coth(beta |w|/2) - sign(w), evaluated without overflow
    if (std::isinf(cfg.beta)) {
        bracket = omega > 0.0 ? 0.0 : 2.0;
    } else if (omega > 0.0) {
        bracket = 2.0 / std::expm1(cfg.beta * aw);  // 2 n(w)
    } else {
        bracket = 2.0 / (-std::expm1(-cfg.beta * aw));  // 2 (n(w) + 1)
    }
    return 0.5 * M_PI * spectral_density(aw, cfg) * bracket;
}

namespace {

// Coupling operators in the eigenbasis. sigma_z = diag(1,1,-1,-1) and
// tau_z = diag(1,-1,1,-1) in the product basis.
std::vector<Matrix4> coupling_operators_eigen(const SpectralDecomposition& spec,
                                              Topology topology) {
    Matrix4 sz = Eigen::Vector4d(1, 1, -1, -1).asDiagonal();
    Matrix4 tz = Eigen::Vector4d(1, -1, 1, -1).asDiagonal();
    const Matrix4& v = spec.vectors;
    if (topology == Topology::SingleBath)
        return {v.transpose() * (sz + tz) * v};
    return {v.transpose() * sz * v, v.transpose() * tz * v};
}

}  // namespace

Matrix4 transition_rates_first_principles(const SpectralDecomposition& spec,
                                          const BathConfig& cfg,
                                          const SystemParams& params) {
    const BathConfig rc = cfg.resolved(params);
    rc.validate();
    const auto ops = coupling_operators_eigen(spec, rc.topology);
    Matrix4 w = Matrix4::Zero();
    for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
            if (m == n) continue;
            double me2 = 0.0;
            for (const auto& a : ops) me2 += a(m, n) * a(m, n);
            w(m, n) = 0.5 * me2 * halfline_rate(spec.omega(m, n), rc);
        }
    }
    return w;
}

Matrix4 transition_rates_closed_form(const SpectralDecomposition& spec,
                                     const BathConfig& cfg,
                                     const SystemParams& params) {
    const BathConfig rc = cfg.resolved(params);
    rc.validate();
    const double d = params.delta, v = params.v;
    const double pref = (rc.topology == Topology::SingleBath ? 2.0 : 1.0) * M_PI * d * d *
                        rc.kappa / std::sqrt(v * v + d * d);

    // coth(beta w/2) -+ 1 without overflow; beta = inf handled symbolically.
    auto uphill = [&](double w_) {
        if (std::isinf(rc.beta)) return 0.0;
        return 2.0 / std::expm1(rc.beta * w_);
    };
    auto downhill = [&](double w_) {
        if (std::isinf(rc.beta)) return 2.0;
        return 2.0 / (-std::expm1(-rc.beta * w_));
    };

    const double w21 = spec.omega(1, 0), w31 = spec.omega(2, 0), w42 = spec.omega(3, 1);
    Matrix4 w = Matrix4::Zero();
    if (rc.topology == Topology::TwoBath) {
        // only W21 and W31 are printed; the rest follow from the symmetries
        // W43 = W21, W42 = W31 and detailed balance.
        w(1, 0) = pref * uphill(w21);
        w(0, 1) = pref * downhill(w21);
        w(2, 0) = pref * uphill(w31);
        w(0, 2) = pref * downhill(w31);
        w(3, 2) = w(1, 0);
        w(2, 3) = w(0, 1);
        w(3, 1) = w(2, 0);
        w(1, 3) = w(0, 2);
    } else {
        w(1, 0) = pref * uphill(w21);
        w(0, 1) = pref * downhill(w21);
        w(3, 1) = pref * uphill(w42);
        w(1, 3) = pref * downhill(w42);
    }
    return w;
}

Matrix4 dephasing_rates(const Matrix4& w) {
    Matrix4 g = Matrix4::Zero();
    const Vector4 column_sums = w.colwise().sum().transpose();
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            if (m != n) g(m, n) = 0.5 * (column_sums(m) + column_sums(n));
    return g;
}

RateTable make_rate_table(const SpectralDecomposition& spec, const BathConfig& cfg,
                          const SystemParams& params) {
    RateTable rt;
    rt.topology = cfg.topology;
    rt.w = transition_rates_first_principles(spec, cfg, params);
    rt.gamma = dephasing_rates(rt.w);
    return rt;
}

}  // namespace relaxometer
