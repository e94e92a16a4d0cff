// bath.hpp -- ohmic spectral density, golden-rule transition rates for the
// two bath topologies, and the dephasing rates derived from them.

#pragma once

#include <limits>

#include "relaxometer/system.hpp"

namespace relaxometer {

enum class Topology { TwoBath, SingleBath };

Topology parse_topology(const std::string& name);
std::string topology_name(Topology t);

struct BathConfig {
    Topology topology{Topology::TwoBath};
    double kappa{0.01};  // dimensionless coupling; K1 = K2 = kappa/2pi for two baths
    double beta{10.0};   // inverse temperature, +inf means T = 0
    double omega_c{0.0}; // cutoff frequency; 0 requests the default 100*max(delta, v)

    void validate() const {
        if (!(kappa > 0.0)) throw std::invalid_argument("BathConfig: kappa must be > 0");
        if (!(beta > 0.0)) throw std::invalid_argument("BathConfig: beta must be > 0");
        if (omega_c < 0.0) throw std::invalid_argument("BathConfig: omega_c must be >= 0");
    }

    double cutoff(const SystemParams& params) const {
        return omega_c > 0.0 ? omega_c : 100.0 * std::max(params.delta, params.v);
    }

    /// Copy with the cutoff default resolved against `params`.
    BathConfig resolved(const SystemParams& params) const {
        BathConfig cfg = *this;
        cfg.omega_c = cutoff(params);
        return cfg;
    }
};

/// Golden-rule rates W(m,n) = rate n -> m and coherence decay rates gamma(m,n).
struct RateTable {
    Matrix4 w{Matrix4::Zero()};
    Matrix4 gamma{Matrix4::Zero()};
    Topology topology{Topology::TwoBath};
};

/// Per-bath ohmic spectral density J(omega) = kappa * omega * exp(-omega/omega_c).
/// The cutoff must already be resolved (cfg.omega_c > 0).
double spectral_density(double omega, const BathConfig& cfg);

/// Real part of the half-line integral of the bath correlation function,
/// Re I^+(omega) = (pi/2) J(|omega|) [coth(beta |omega|/2) - sign(omega)],
/// with beta = inf handled as coth -> 1 and the omega -> 0 limit taken
/// through J's linear slope.
double halfline_rate(double omega, const BathConfig& cfg);

/// Rates from the eigenstate matrix elements of the coupling operators,
/// W_mn = 2 Re Gamma^+_{nmmn}. Authoritative route.
Matrix4 transition_rates_first_principles(const SpectralDecomposition& spec,
                                          const BathConfig& cfg,
                                          const SystemParams& params);

/// Rates as printed in closed form (denominator sqrt(v^2 + Delta^2), no
/// cutoff factor), completed by symmetry and detailed balance. Kept as a
/// cross-check route only.
Matrix4 transition_rates_closed_form(const SpectralDecomposition& spec,
                                     const BathConfig& cfg,
                                     const SystemParams& params);

/// gamma_mm' = 1/2 sum_k (W_km' + W_km), Lamb shift dropped.
Matrix4 dephasing_rates(const Matrix4& w);

/// First-principles W plus the matching gamma table.
RateTable make_rate_table(const SpectralDecomposition& spec, const BathConfig& cfg,
                          const SystemParams& params);

}  // namespace relaxometer
