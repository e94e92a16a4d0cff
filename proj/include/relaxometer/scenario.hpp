// scenario.hpp -- figure-style scenario runner: single trajectories,
// parameter sweeps and machine-readable reports.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "relaxometer/bath.hpp"
#include "relaxometer/propagator.hpp"
#include "relaxometer/system.hpp"

namespace relaxometer {

struct TimeGridSpec {
    double start{1e-1};
    double end{1e6};
    std::size_t count{400};
    enum class Spacing { Linear, Log } spacing{Spacing::Log};

    std::vector<double> build() const;
};

struct ScenarioConfig {
    SystemParams system{1.0, 0.7};
    BathConfig bath{};
    std::string state{"psi_a"};  // preset name, or "custom" with amplitudes
    std::optional<Eigen::Vector4cd> custom_amplitudes;
    TimeGridSpec grid{};

    void validate() const;
    DensityMatrix initial_state(const SpectralDecomposition& spec) const;
};

/// Named parameter sets for the paper-style figures (fig1a..fig1d, fig2,
/// fig3, fig4, fig5, fig6, fig7a, fig7b).
ScenarioConfig preset_scenario(const std::string& name);
std::vector<std::string> scenario_preset_names();

/// `key = value` assignment applied to a config; used by both the flat
/// config-file parser and CLI overrides. Throws on unknown keys/bad values.
void apply_config_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Flat key-value config document, one `key = value` per line, `#` comments.
ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {});

/// Time-series CSV with header
/// t,S_bits,concurrence,purity,rho33,re_rho12,im_rho12,re_rho13,im_rho13,dist_to_eq.
/// 17 significant digits, LF line endings, deterministic.
void run_scenario(const ScenarioConfig& cfg, std::ostream& out);

/// One trajectory per swept value; columns as run_scenario plus the value.
/// Sweep points run concurrently up to `jobs`; output order is fixed.
void run_sweep(const ScenarioConfig& cfg, const std::string& axis,
               const std::vector<double>& values, std::ostream& out, unsigned jobs = 0);

/// Machine-readable summary: both rate routes, gamma ratio, equilibrium
/// state and observables, relaxation time, and the RK4-vs-closed-form
/// deviation. `converged` is false when a relaxation time was not reached.
nlohmann::json report(const ScenarioConfig& cfg, bool& converged);

/// Default worker count: RELAXOMETER_JOBS, else hardware concurrency.
unsigned default_jobs();

}  // namespace relaxometer
