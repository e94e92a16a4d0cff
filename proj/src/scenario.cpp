#include "relaxometer/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "relaxometer/numerics.hpp"
#include "relaxometer/observables.hpp"

namespace relaxometer {

std::vector<double> TimeGridSpec::build() const {
    if (count < 2) throw std::invalid_argument("time grid: count must be >= 2");
    if (!(end > start)) throw std::invalid_argument("time grid: end must exceed start");
    if (spacing == Spacing::Log && !(start > 0.0))
        throw std::invalid_argument("time grid: log spacing needs start > 0");
    std::vector<double> ts(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        ts[i] = spacing == Spacing::Log ? start * std::pow(end / start, f)
                                        : start + f * (end - start);
    }
    return ts;
}

void ScenarioConfig::validate() const {
    system.validate();
    bath.validate();
    if (state != "custom") parse_preset(state);
    if (state == "custom" && !custom_amplitudes)
        throw std::invalid_argument("config: custom state needs amplitudes");
    (void)grid.build();
}

DensityMatrix ScenarioConfig::initial_state(const SpectralDecomposition& spec) const {
    if (state == "custom")
        return to_eigenbasis(pure_state_computational(*custom_amplitudes), spec);
    return make_state(parse_preset(state), spec, bath.beta);
}

std::vector<std::string> scenario_preset_names() {
    return {"fig1a", "fig1b", "fig1c", "fig1d", "fig2", "fig3",
            "fig4",  "fig5",  "fig6",  "fig7a", "fig7b"};
}

ScenarioConfig preset_scenario(const std::string& name) {
    ScenarioConfig cfg;  // v = 0.7, Delta = 1 case study
    cfg.bath.kappa = 0.01;
    cfg.bath.beta = 10.0;
    cfg.grid = {1e-1, 2e3, 400, TimeGridSpec::Spacing::Log};
    auto two = [&](const char* s) { cfg.bath.topology = Topology::TwoBath; cfg.state = s; };
    auto one = [&](const char* s) { cfg.bath.topology = Topology::SingleBath; cfg.state = s; };
    if (name == "fig1a") two("psi_a");
    else if (name == "fig1b") two("psi_b");
    else if (name == "fig1c") two("psi_c");
    else if (name == "fig1d") two("psi_d");
    else if (name == "fig2") one("psi_a");
    else if (name == "fig3") one("psi_b");
    else if (name == "fig4") { one("psi_d"); cfg.grid.end = 1e6; }
    else if (name == "fig5") { one("psi_a"); cfg.bath.kappa = 0.1; }
    else if (name == "fig6") { one("psi_a"); cfg.bath.beta = 20.0; }
    else if (name == "fig7a") { one("mix1"); cfg.bath.beta = 20.0; }
    else if (name == "fig7b") { one("mix2"); cfg.bath.beta = 20.0; }
    else throw std::invalid_argument("unknown scenario preset: " + name);
    return cfg;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    if (value == "inf" || value == "+inf" || value == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
    if (pos != value.size())
        throw std::invalid_argument("config: trailing junk in value for '" + key + "'");
    return x;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "delta") cfg.system.delta = parse_double(key, value);
    else if (key == "v") cfg.system.v = parse_double(key, value);
    else if (key == "topology") cfg.bath.topology = parse_topology(value);
    else if (key == "kappa") cfg.bath.kappa = parse_double(key, value);
    else if (key == "beta") cfg.bath.beta = parse_double(key, value);
    else if (key == "omega_c") cfg.bath.omega_c = parse_double(key, value);
    else if (key == "state") cfg.state = value;
    else if (key == "t_start") cfg.grid.start = parse_double(key, value);
    else if (key == "t_end") cfg.grid.end = parse_double(key, value);
    else if (key == "t_count")
        cfg.grid.count = static_cast<std::size_t>(parse_double(key, value));
    else if (key == "spacing") {
        if (value == "linear") cfg.grid.spacing = TimeGridSpec::Spacing::Linear;
        else if (value == "log") cfg.grid.spacing = TimeGridSpec::Spacing::Log;
        else throw std::invalid_argument("config: spacing must be linear or log");
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        apply_config_entry(base, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return base;
}

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

constexpr const char* kCsvHeader =
    "t,S_bits,concurrence,purity,rho33,re_rho12,im_rho12,re_rho13,im_rho13,dist_to_eq";

struct ScenarioRun {
    SpectralDecomposition spec;
    RateTable rates;
    DensityMatrix rho0;
    EquilibriumState eq;
    std::vector<double> times;

    explicit ScenarioRun(const ScenarioConfig& cfg) {
        cfg.validate();
        spec = diagonalize(cfg.system);
        const BathConfig bath = cfg.bath.resolved(cfg.system);
        rates = make_rate_table(spec, bath, cfg.system);
        rho0 = cfg.initial_state(spec);
        eq = equilibrium_state(rho0, spec, bath, rates);
        times = cfg.grid.build();
    }

    std::string csv_row(double t) const {
        const DensityMatrix rho = propagate(rho0, spec, rates, t);
        const ObservableSample obs = sample_observables(t, rho, spec);
        const double dist = (rho.m - eq.rho.m).cwiseAbs().maxCoeff();
        std::string row = fmt(t);
        for (double x : {obs.entropy, obs.concurrence, obs.purity, rho.m(2, 2).real(),
                         rho.m(0, 1).real(), rho.m(0, 1).imag(), rho.m(0, 2).real(),
                         rho.m(0, 2).imag(), dist}) {
            row += ',';
            row += fmt(x);
        }
        return row;
    }
};

}  // namespace

void run_scenario(const ScenarioConfig& cfg, std::ostream& out) {
    const ScenarioRun run(cfg);
    out << kCsvHeader << '\n';
    for (double t : run.times) out << run.csv_row(t) << '\n';
}

unsigned default_jobs() {
    if (const char* env = std::getenv("RELAXOMETER_JOBS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void run_sweep(const ScenarioConfig& cfg, const std::string& axis,
               const std::vector<double>& values, std::ostream& out, unsigned jobs) {
    if (values.empty()) throw std::invalid_argument("sweep: empty value list");
    if (axis != "beta" && axis != "kappa" && axis != "delta")
        throw std::invalid_argument("sweep: axis must be beta, kappa or delta");
    if (jobs == 0) jobs = default_jobs();

    std::vector<std::string> blocks(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1)) {
            ScenarioConfig point = cfg;
            apply_config_entry(point, axis, fmt(values[i]));
            const ScenarioRun run(point);
            std::string block;
            for (double t : run.times) {
                block += run.csv_row(t);
                block += ',';
                block += fmt(values[i]);
                block += '\n';
            }
            blocks[i] = std::move(block);
        }
    };
    std::vector<std::thread> pool;
    const auto nworkers = std::min<std::size_t>(jobs, values.size());
    pool.reserve(nworkers);
    for (std::size_t i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    out << kCsvHeader << ',' << axis << '\n';
    for (const auto& block : blocks) out << block;
}

namespace {

nlohmann::json matrix_json(const Matrix4& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

nlohmann::json report(const ScenarioConfig& cfg, bool& converged) {
    const ScenarioRun run(cfg);
    const BathConfig bath = cfg.bath.resolved(cfg.system);
    const Matrix4 w_printed = transition_rates_closed_form(run.spec, bath, cfg.system);

    nlohmann::json j;
    j["config"] = {{"delta", cfg.system.delta},
                   {"v", cfg.system.v},
                   {"topology", topology_name(bath.topology)},
                   {"kappa", bath.kappa},
                   {"beta", std::isinf(bath.beta) ? -1.0 : bath.beta},
                   {"beta_is_infinite", std::isinf(bath.beta)},
                   {"omega_c", bath.omega_c},
                   {"state", cfg.state}};
    j["energies"] = run.spec.energies;
    j["rates"]["first_principles"] = matrix_json(run.rates.w);
    j["rates"]["printed_closed_form"] = matrix_json(w_printed);
    j["rates"]["gamma"] = matrix_json(run.rates.gamma);
    j["gamma_ratio_12_13"] = run.rates.gamma(0, 2) > 0.0
                                 ? run.rates.gamma(0, 1) / run.rates.gamma(0, 2)
                                 : std::numeric_limits<double>::infinity();

    nlohmann::json eqj;
    eqj["diag"] = {run.eq.rho.m(0, 0).real(), run.eq.rho.m(1, 1).real(),
                   run.eq.rho.m(2, 2).real(), run.eq.rho.m(3, 3).real()};
    nlohmann::json residuals = nlohmann::json::array();
    for (const auto& [idx, modulus] : run.eq.residual_coherences)
        residuals.push_back({{"row", idx / 4 + 1}, {"col", idx % 4 + 1}, {"modulus", modulus}});
    eqj["residual_coherences"] = residuals;
    eqj["concurrence"] = concurrence(run.eq.rho, run.spec);
    eqj["entropy_bits"] = von_neumann_entropy(run.eq.rho);
    j["equilibrium"] = eqj;

    const RelaxationResult relax =
        relaxation_time(run.rho0, run.spec, bath, run.rates);
    converged = relax.converged;
    if (relax.converged) j["relaxation_time"] = relax.time;
    else j["relaxation_time"] = "not converged";
    j["relaxation_rate_estimate"] = relax.analytic_estimate;

    // closed form vs RK4 over a short window, the report's oracle deviation
    double max_dev = 0.0;
    const double dt = secular_step_bound(run.rates, run.spec);
    for (double t : {1.0, 5.0, 20.0, 100.0}) {
        const Matrix4c ode = integrate_secular(run.rho0.m, run.rates, run.spec, t, dt);
        const Matrix4c closed = propagate(run.rho0, run.spec, run.rates, t).m;
        max_dev = std::max(max_dev, (ode - closed).cwiseAbs().maxCoeff());
    }
    j["oracle_max_deviation"] = max_dev;
    return j;
}

}  // namespace relaxometer
