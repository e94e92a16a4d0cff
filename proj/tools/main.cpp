// relaxometer -- scenario runner for the two-qubit dissipative dynamics
// library: single trajectories, parameter sweeps and summary reports.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "relaxometer/scenario.hpp"

namespace {

using relaxometer::ScenarioConfig;

struct CommonOpts {
    std::string preset;
    std::string config_file;
    std::string out_path;
    std::string format{"csv"};
    std::vector<std::string> overrides;  // key=value
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--preset", opts.preset, "figure preset (fig1a..fig1d, fig2..fig6, fig7a, fig7b)");
    cmd->add_option("--config", opts.config_file, "flat key=value config file");
    cmd->add_option("--out", opts.out_path, "output file (default stdout)");
    cmd->add_option("--set", opts.overrides,
                    "override config entries, e.g. --set beta=20 --set state=psi_d");
}

ScenarioConfig build_config(const CommonOpts& opts) {
    ScenarioConfig cfg;
    if (!opts.preset.empty()) cfg = relaxometer::preset_scenario(opts.preset);
    if (!opts.config_file.empty()) cfg = relaxometer::load_config_file(opts.config_file, cfg);
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        relaxometer::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

int write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << path << "'\n";
        return 2;
    }
    out << content;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secular Bloch-Redfield dynamics of two Ising-coupled qubits"};
    app.require_subcommand(1);

    CommonOpts run_opts, sweep_opts, report_opts;
    std::string sweep_axis;
    std::vector<double> sweep_values;
    unsigned jobs = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "write a trajectory time series");
    add_common(run_cmd, run_opts);
    run_cmd->add_option("--format", run_opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "one trajectory per swept value");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--sweep", sweep_axis, "axis: beta, kappa or delta")->required();
    sweep_cmd->add_option("--values", sweep_values, "swept values")->required()->delimiter(',');
    sweep_cmd->add_option("--jobs", jobs, "max concurrent sweep points (default: RELAXOMETER_JOBS)");

    CLI::App* report_cmd = app.add_subcommand("report", "machine-readable summary (JSON)");
    add_common(report_cmd, report_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const ScenarioConfig cfg = build_config(run_opts);
            std::ostringstream os;
            if (run_opts.format == "json") {
                std::ostringstream csv;
                relaxometer::run_scenario(cfg, csv);
                // re-emit the CSV rows as an array of objects
                std::istringstream in(csv.str());
                std::string header, line;
                std::getline(in, header);
                std::vector<std::string> cols;
                for (std::istringstream hs(header); std::getline(hs, line, ',');)
                    cols.push_back(line);
                nlohmann::json rows = nlohmann::json::array();
                while (std::getline(in, line)) {
                    nlohmann::json row;
                    std::istringstream ls(line);
                    std::string cell;
                    for (const auto& col : cols) {
                        std::getline(ls, cell, ',');
                        row[col] = std::stod(cell);
                    }
                    rows.push_back(row);
                }
                os << rows.dump(2) << '\n';
            } else {
                relaxometer::run_scenario(cfg, os);
            }
            return write_output(run_opts.out_path, os.str());
        }
        if (sweep_cmd->parsed()) {
            const ScenarioConfig cfg = build_config(sweep_opts);
            std::ostringstream os;
            relaxometer::run_sweep(cfg, sweep_axis, sweep_values, os, jobs);
            return write_output(sweep_opts.out_path, os.str());
        }
        const ScenarioConfig cfg = build_config(report_opts);
        bool converged = true;
        const nlohmann::json j = relaxometer::report(cfg, converged);
        const int rc = write_output(report_opts.out_path, j.dump(2) + "\n");
        if (rc != 0) return rc;
        return converged ? 0 : 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
