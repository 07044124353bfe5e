// sweeps.hpp — experiment runner: named presets, free-form parameter sweeps,
// deterministic parallel execution, CSV/JSON emission

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nmqfi/dynamics.hpp"
#include "nmqfi/qfi.hpp"

namespace nmqfi {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepVariable { time, photon_number, cutoff_frequency };
enum class OutputFormat { csv, json };

std::string to_string(Method m);
std::string to_string(SweepVariable v);

struct ExperimentConfig {
    std::string preset;  // empty for a free-form sweep

    SweepVariable variable{SweepVariable::time};
    double min{1.0};
    double max{10.0};
    int count{10};
    bool log_scale{false};

    // physical parameters (omega0 = 1 fixes the units)
    double s{1.0};
    double eta{0.02};
    double eta_rule_factor{0.0};  // > 0: eta = factor * (omega0+gamma) / (omega_c * Gamma(s))
    double omega_c{100.0};
    double gamma{3.14159265358979323846};
    double omega0{1.0};
    int mu{1};
    double n_avg{10.0};           // fixed N for time / omega_c sweeps
    double t{10.0};               // fixed t for N / omega_c sweeps
    double t_over_omega_c{0.0};   // > 0: per-point t = value / omega_c

    std::vector<Method> methods{Method::exact};

    // solver knobs
    double dt{0.0};  // 0 = default_time_step
    int cutoff_override{0};
    double root_tol{1e-12};

    std::string out_path;
    OutputFormat format{OutputFormat::csv};
    int workers{0};  // 0 = hardware concurrency
};

// Flat key = value file with [sweep] / [params] / [solver] / [output] sections.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Tabular sweep output: numeric columns plus method/status tags per row.
// Row order is the sweep order regardless of worker count.
struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> method;  // per-row method tag
    std::vector<std::string> status;  // ok | no_bound_state | unstable | error
    std::vector<std::pair<std::string, std::string>> provenance;
};

SweepResult run_sweep(const ExperimentConfig& config);

// Presets reproducing the library's reference figures; see README for the
// parameter choices. Valid names: fig1b fig1c fig1d fig2a fig2b fig3a fig3b fig3c.
SweepResult run_preset(const std::string& name, const ExperimentConfig& overrides);
SweepResult run_preset(const std::string& name);
std::vector<std::string> preset_names();

void write_csv(const SweepResult& result, std::ostream& os, bool with_timestamp = true);
void write_json(const SweepResult& result, std::ostream& os, bool with_timestamp = true);
void write_result_file(const SweepResult& result, const std::string& path, OutputFormat format);

} // namespace nmqfi
