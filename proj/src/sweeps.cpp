#include "nmqfi/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <functional>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#ifndef NMQFI_VERSION
#define NMQFI_VERSION "dev"
#endif

namespace nmqfi {

namespace {

constexpr const char* kStatusOk = "ok";

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<double> make_axis(double lo, double hi, int count, bool log_scale) {
    if (count < 1 || !(hi >= lo)) throw config_error("sweep axis: need count >= 1 and max >= min");
    if (log_scale && !(lo > 0.0)) throw config_error("sweep axis: log scale needs min > 0");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i) {
        const double f = double(i) / double(count - 1);
        v[i] = log_scale ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    return v;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    unsigned n_threads = workers > 0 ? static_cast<unsigned>(workers)
                                     : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, count == 0 ? 1 : static_cast<unsigned>(count));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w)
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

SpectralDensity make_density(const ExperimentConfig& cfg, double omega_c) {
    double eta = cfg.eta;
    if (cfg.eta_rule_factor > 0.0)
        eta = cfg.eta_rule_factor * (cfg.omega0 + cfg.gamma) / (omega_c * std::tgamma(cfg.s));
    return SpectralDensity(cfg.s, eta, omega_c);
}

double resolve_dt(const ExperimentConfig& cfg, const SpectralDensity& sd,
                  const ProbeConfig& probe) {
    return cfg.dt > 0.0 ? cfg.dt : default_time_step(sd, probe);
}

// One evaluated pipeline point along any axis.
struct PointRecord {
    double n_avg{}, omega_c{}, eta{}, t{};
    double abs_c{}, z{}, f_q{}, delta_gamma{}, snl{}, weak_hl{}, ideal_delta_gamma{};
    std::string method;
    std::string status{kStatusOk};
};

const std::vector<std::string> kPipelineColumns = {
    "n_avg", "omega_c", "eta",          "t",   "abs_c",  "z",
    "f_q",   "delta_gamma", "snl", "weak_hl", "ideal_delta_gamma"};

void push_record(SweepResult& out, const PointRecord& r) {
    out.rows.push_back({r.n_avg, r.omega_c, r.eta, r.t, r.abs_c, r.z, r.f_q, r.delta_gamma,
                        r.snl, r.weak_hl, r.ideal_delta_gamma});
    out.method.push_back(r.method);
    out.status.push_back(r.status);
}

PointRecord blank_record(double n_avg, const SpectralDensity& sd, double t, Method m) {
    PointRecord r;
    r.n_avg = n_avg;
    r.omega_c = sd.omega_c;
    r.eta = sd.eta;
    r.t = t;
    r.abs_c = r.z = r.f_q = r.delta_gamma = std::nan("");
    r.snl = r.weak_hl = r.ideal_delta_gamma = std::nan("");
    r.method = to_string(m);
    return r;
}

void fill_precision(PointRecord& r, double f_q, double n_avg, double t, int mu) {
    r.f_q = f_q;
    r.delta_gamma = precision(f_q, mu);
    if (n_avg > 0.0 && t > 0.0) {
        const BenchmarkLimits b = benchmark_limits(n_avg, t);
        r.snl = b.snl;
        r.weak_hl = b.weak_hl;
        r.ideal_delta_gamma = precision(qfi_ideal(n_avg, t), mu);
    }
}

// Evaluate one (N, t, method) point given the solved trajectory / bound state.
PointRecord evaluate_point(const ExperimentConfig& cfg, const SpectralDensity& sd,
                           const ProbeConfig& probe, double n_avg, double t, Method m,
                           const AmplitudeTrajectory* traj, const BoundState* bs,
                           bool bs_exists) {
    PointRecord r = blank_record(n_avg, sd, t, m);
    const double alpha = alpha_of_n(n_avg);
    switch (m) {
        case Method::exact: {
            const complexd c = traj->c_at(t);
            const complexd dc = traj->dc_at(t);
            r.abs_c = std::abs(c);
            if (bs_exists && bs) r.z = bs->z;
            fill_precision(r, ecs_qfi(alpha, c, dc), n_avg, t, cfg.mu);
            break;
        }
        case Method::markovian: {
            const MarkovRates rates = markov_rates(sd, probe);
            r.abs_c = std::exp(-rates.kappa * t);
            fill_precision(r, qfi_markovian(n_avg, t, rates.kappa), n_avg, t, cfg.mu);
            break;
        }
        case Method::asymptotic: {
            if (!bs_exists || !bs) {
                r.status = "no_bound_state";
                break;
            }
            r.z = bs->z;
            r.abs_c = bs->z;
            fill_precision(r, qfi_asymptotic(n_avg, alpha, t, bs->z), n_avg, t, cfg.mu);
            break;
        }
    }
    return r;
}

bool needs_method(const ExperimentConfig& cfg, Method m) {
    return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
}

void echo_config(SweepResult& out, const ExperimentConfig& cfg) {
    auto add = [&](const std::string& k, const std::string& v) {
        out.provenance.emplace_back(k, v);
    };
    add("version", NMQFI_VERSION);
    if (!cfg.preset.empty()) add("preset", cfg.preset);
    add("variable", to_string(cfg.variable));
    add("min", format_double(cfg.min));
    add("max", format_double(cfg.max));
    add("count", std::to_string(cfg.count));
    add("scale", cfg.log_scale ? "log" : "linear");
    add("s", format_double(cfg.s));
    add("eta", format_double(cfg.eta));
    add("eta_rule_factor", format_double(cfg.eta_rule_factor));
    add("omega_c", format_double(cfg.omega_c));
    add("gamma", format_double(cfg.gamma));
    add("omega0", format_double(cfg.omega0));
    add("mu", std::to_string(cfg.mu));
    add("n_avg", format_double(cfg.n_avg));
    add("t", format_double(cfg.t));
    add("t_over_omega_c", format_double(cfg.t_over_omega_c));
    std::string methods;
    for (const Method m : cfg.methods) {
        if (!methods.empty()) methods += ",";
        methods += to_string(m);
    }
    add("methods", methods);
    add("dt", format_double(cfg.dt));
}

SweepResult sweep_time(const ExperimentConfig& cfg) {
    SweepResult out;
    out.columns = kPipelineColumns;

    const std::vector<double> axis = make_axis(cfg.min, cfg.max, cfg.count, cfg.log_scale);
    const SpectralDensity sd = make_density(cfg, cfg.omega_c);
    const ProbeConfig probe(cfg.omega0, cfg.gamma);
    const double t_end = axis.back();

    AmplitudeTrajectory traj;
    std::string solve_status = kStatusOk;
    const bool exists = bound_state_exists(sd, probe);
    BoundState bs;
    if (exists) bs = find_bound_state(sd, probe, cfg.root_tol);
    if (needs_method(cfg, Method::exact)) {
        try {
            traj = solve_with_sensitivity(sd, probe, t_end, resolve_dt(cfg, sd, probe));
        } catch (const instability_error&) {
            solve_status = "unstable";
        }
    }

    for (const double t : axis) {
        for (const Method m : cfg.methods) {
            if (m == Method::exact && solve_status != kStatusOk) {
                PointRecord r = blank_record(cfg.n_avg, sd, t, m);
                r.status = solve_status;
                push_record(out, r);
                continue;
            }
            push_record(out, evaluate_point(cfg, sd, probe, cfg.n_avg, t, m, &traj,
                                       exists ? &bs : nullptr, exists));
        }
    }
    return out;
}

SweepResult sweep_photon_number(const ExperimentConfig& cfg) {
    SweepResult out;
    out.columns = kPipelineColumns;

    const std::vector<double> axis = make_axis(cfg.min, cfg.max, cfg.count, cfg.log_scale);
    const SpectralDensity sd = make_density(cfg, cfg.omega_c);
    const ProbeConfig probe(cfg.omega0, cfg.gamma);
    const double t = cfg.t_over_omega_c > 0.0 ? cfg.t_over_omega_c / cfg.omega_c : cfg.t;

    const bool exists = bound_state_exists(sd, probe);
    BoundState bs;
    if (exists) bs = find_bound_state(sd, probe, cfg.root_tol);
    AmplitudeTrajectory traj;
    std::string solve_status = kStatusOk;
    if (needs_method(cfg, Method::exact)) {
        try {
            traj = solve_with_sensitivity(sd, probe, t, resolve_dt(cfg, sd, probe));
        } catch (const instability_error&) {
            solve_status = "unstable";
        }
    }

    for (const double n_avg : axis) {
        for (const Method m : cfg.methods) {
            if (m == Method::exact && solve_status != kStatusOk) {
                PointRecord r = blank_record(n_avg, sd, t, m);
                r.status = solve_status;
                push_record(out, r);
                continue;
            }
            push_record(out, evaluate_point(cfg, sd, probe, n_avg, t, m, &traj,
                                       exists ? &bs : nullptr, exists));
        }
    }
    return out;
}

SweepResult sweep_cutoff(const ExperimentConfig& cfg) {
    SweepResult out;
    out.columns = kPipelineColumns;

    const std::vector<double> axis = make_axis(cfg.min, cfg.max, cfg.count, cfg.log_scale);
    const ProbeConfig probe(cfg.omega0, cfg.gamma);

    struct PointRows {
        std::vector<PointRecord> records;
    };
    std::vector<PointRows> results(axis.size());

    parallel_for(axis.size(), cfg.workers, [&](std::size_t i) {
        const double omega_c = axis[i];
        const SpectralDensity sd = make_density(cfg, omega_c);
        const double t = cfg.t_over_omega_c > 0.0 ? cfg.t_over_omega_c / omega_c : cfg.t;
        const bool exists = bound_state_exists(sd, probe);
        BoundState bs;
        if (exists) bs = find_bound_state(sd, probe, cfg.root_tol);

        AmplitudeTrajectory traj;
        std::string solve_status = kStatusOk;
        if (needs_method(cfg, Method::exact)) {
            try {
                traj = solve_with_sensitivity(sd, probe, t, resolve_dt(cfg, sd, probe));
            } catch (const instability_error&) {
                solve_status = "unstable";
            }
        }
        for (const Method m : cfg.methods) {
            if (m == Method::exact && solve_status != kStatusOk) {
                PointRecord r = blank_record(cfg.n_avg, sd, t, m);
                r.status = solve_status;
                results[i].records.push_back(r);
                continue;
            }
            results[i].records.push_back(evaluate_point(cfg, sd, probe, cfg.n_avg, t, m, &traj,
                                                        exists ? &bs : nullptr, exists));
        }
    });

    for (std::size_t i = 0; i < axis.size(); ++i)
        for (const PointRecord& r : results[i].records) push_record(out, r);
    return out;
}

// ---------------------------------------------------------------------------
// presets

ExperimentConfig paper_base() {
    ExperimentConfig cfg;
    cfg.s = 1.0;
    cfg.eta = 0.02;
    cfg.gamma = M_PI;
    cfg.omega0 = 1.0;
    return cfg;
}

void apply_overrides(ExperimentConfig& cfg, const ExperimentConfig& overrides) {
    if (overrides.dt > 0.0) cfg.dt = overrides.dt;
    if (overrides.workers > 0) cfg.workers = overrides.workers;
    if (!overrides.out_path.empty()) cfg.out_path = overrides.out_path;
    cfg.format = overrides.format;
}

SweepResult preset_fig1b(const ExperimentConfig& overrides) {
    ExperimentConfig cfg = paper_base();
    cfg.preset = "fig1b";
    apply_overrides(cfg, overrides);
    SweepResult out;
    out.columns = {"omega_c", "t", "abs_c"};
    for (const double omega_c : {150.0, 250.0}) {  // below / above the 207.08 threshold
        const SpectralDensity sd(cfg.s, cfg.eta, omega_c);
        const ProbeConfig probe(cfg.omega0, cfg.gamma);
        const double dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(sd, probe);
        const AmplitudeTrajectory traj = solve_c(sd, probe, 50.0, dt);
        for (int i = 0; i <= 500; ++i) {
            const double t = 0.1 * i;
            out.rows.push_back({omega_c, t, std::abs(traj.c_at(t))});
            out.method.push_back(to_string(Method::exact));
            out.status.push_back(kStatusOk);
        }
    }
    echo_config(out, cfg);
    return out;
}

SweepResult preset_fig1c(const ExperimentConfig& overrides) {
    ExperimentConfig cfg = paper_base();
    cfg.preset = "fig1c";
    apply_overrides(cfg, overrides);
    const double t_long = 200.0;
    const std::vector<double> axis = make_axis(120.0, 400.0, 29, false);
    const ProbeConfig probe(cfg.omega0, cfg.gamma);

    SweepResult out;
    out.columns = {"omega_c", "abs_c_long", "z", "bound_state", "converged"};
    std::vector<std::vector<double>> rows(axis.size());
    std::vector<std::string> status(axis.size(), kStatusOk);
    parallel_for(axis.size(), cfg.workers, [&](std::size_t i) {
        const SpectralDensity sd(cfg.s, cfg.eta, axis[i]);
        const double dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(sd, probe);
        const bool exists = bound_state_exists(sd, probe);
        double z = std::nan("");
        if (exists) z = find_bound_state(sd, probe).z;
        try {
            const AmplitudeTrajectory traj = solve_c(sd, probe, t_long, dt);
            const double tail = std::abs(traj.c_at(t_long));
            const double earlier = std::abs(traj.c_at(0.9 * t_long));
            rows[i] = {axis[i], tail, z, exists ? 1.0 : 0.0,
                       std::abs(tail - earlier) < 1e-3 ? 1.0 : 0.0};
            if (!exists) status[i] = "no_bound_state";
        } catch (const instability_error&) {
            rows[i] = {axis[i], std::nan(""), z, exists ? 1.0 : 0.0, 0.0};
            status[i] = "unstable";
        }
    });
    for (std::size_t i = 0; i < axis.size(); ++i) {
        out.rows.push_back(rows[i]);
        out.method.push_back(to_string(Method::exact));
        out.status.push_back(status[i]);
    }
    echo_config(out, cfg);
    return out;
}

SweepResult preset_fig1d(const ExperimentConfig& overrides) {
    ExperimentConfig cfg = paper_base();
    cfg.preset = "fig1d";
    apply_overrides(cfg, overrides);
    const ProbeConfig probe(cfg.omega0, cfg.gamma);
    const int m = 400;

    SweepResult out;
    out.columns = {"omega_c", "index", "eigenfrequency"};
    const std::vector<double> axis = {120, 160, 200, 207, 215, 250, 300, 350, 400};
    std::vector<SpectrumSlice> slices(axis.size());
    parallel_for(axis.size(), cfg.workers, [&](std::size_t i) {
        const SpectralDensity sd(cfg.s, cfg.eta, axis[i]);
        slices[i] = discretized_spectrum(sd, probe, m);
    });
    for (std::size_t i = 0; i < axis.size(); ++i)
        for (std::size_t k = 0; k < slices[i].eigenfrequencies.size(); ++k) {
            out.rows.push_back({axis[i], double(k), slices[i].eigenfrequencies[k]});
            out.method.push_back("spectrum");
            out.status.push_back(kStatusOk);
        }
    echo_config(out, cfg);
    return out;
}

SweepResult concat_over_omega_c(ExperimentConfig cfg, const std::vector<double>& omega_cs) {
    SweepResult out;
    for (const double wc : omega_cs) {
        cfg.omega_c = wc;
        SweepResult part = run_sweep(cfg);
        if (out.columns.empty()) {
            out.columns = part.columns;
            out.provenance = part.provenance;
        }
        out.rows.insert(out.rows.end(), part.rows.begin(), part.rows.end());
        out.method.insert(out.method.end(), part.method.begin(), part.method.end());
        out.status.insert(out.status.end(), part.status.begin(), part.status.end());
    }
    return out;
}

SweepResult concat_over_n(ExperimentConfig cfg, const std::vector<double>& ns) {
    SweepResult out;
    for (const double n : ns) {
        cfg.n_avg = n;
        SweepResult part = run_sweep(cfg);
        if (out.columns.empty()) {
            out.columns = part.columns;
            out.provenance = part.provenance;
        }
        out.rows.insert(out.rows.end(), part.rows.begin(), part.rows.end());
        out.method.insert(out.method.end(), part.method.begin(), part.method.end());
        out.status.insert(out.status.end(), part.status.begin(), part.status.end());
    }
    return out;
}

SweepResult preset_fig2a(const ExperimentConfig& overrides) {
    ExperimentConfig cfg = paper_base();
    cfg.preset = "fig2a";
    cfg.variable = SweepVariable::time;
    cfg.min = 1.0;
    cfg.max = 10.0;
    cfg.count = 19;
    cfg.n_avg = 10.0;
    cfg.methods = {Method::exact};
    apply_overrides(cfg, overrides);
    return concat_over_omega_c(cfg, {20.0, 150.0, 400.0});
}

SweepResult preset_fig2b(const ExperimentConfig& overrides) {
    ExperimentConfig cfg = paper_base();
    cfg.preset = "fig2b";
    cfg.variable = SweepVariable::photon_number;
    cfg.min = 0.5;
    cfg.max = 200.0;
    cfg.count = 25;
    cfg.log_scale = true;
    cfg.t = 10.0;
    cfg.methods = {Method::exact, Method::asymptotic};
    apply_overrides(cfg, overrides);
    return concat_over_omega_c(cfg, {150.0, 250.0, 400.0, 800.0});
}

SweepResult preset_fig3a(const ExperimentConfig& overrides) {
    ExperimentConfig cfg = paper_base();
    cfg.preset = "fig3a";
    cfg.variable = SweepVariable::cutoff_frequency;
    cfg.min = 300.0;
    cfg.max = 3000.0;
    cfg.count = 25;
    cfg.log_scale = true;
    cfg.eta_rule_factor = 3.0;
    cfg.t_over_omega_c = 10.0;
    cfg.methods = {Method::exact, Method::asymptotic};
    apply_overrides(cfg, overrides);
    return concat_over_n(cfg, {1.0, 5.0, 10.0});
}

SweepResult preset_fig3b(const ExperimentConfig& overrides) {
    ExperimentConfig cfg = paper_base();
    cfg.preset = "fig3b";
    apply_overrides(cfg, overrides);
    const std::vector<double> axis = make_axis(220.0, 3000.0, 41, true);
    const ProbeConfig probe(cfg.omega0, cfg.gamma);
    SweepResult out;
    out.columns = {"omega_c", "eta", "varpi_b", "z"};
    std::vector<std::vector<double>> rows(axis.size());
    std::vector<std::string> status(axis.size(), kStatusOk);
    parallel_for(axis.size(), cfg.workers, [&](std::size_t i) {
        const double eta = 3.0 * probe.carrier() / (axis[i] * std::tgamma(cfg.s));
        const SpectralDensity sd(cfg.s, eta, axis[i]);
        if (!bound_state_exists(sd, probe)) {
            rows[i] = {axis[i], eta, std::nan(""), std::nan("")};
            status[i] = "no_bound_state";
            return;
        }
        const BoundState bs = find_bound_state(sd, probe);
        rows[i] = {axis[i], eta, bs.varpi_b, bs.z};
    });
    for (std::size_t i = 0; i < axis.size(); ++i) {
        out.rows.push_back(rows[i]);
        out.method.push_back("boundstate");
        out.status.push_back(status[i]);
    }
    echo_config(out, cfg);
    return out;
}

SweepResult preset_fig3c(const ExperimentConfig& overrides) {
    ExperimentConfig cfg = paper_base();
    cfg.preset = "fig3c";
    cfg.variable = SweepVariable::photon_number;
    cfg.min = 0.5;
    cfg.max = 500.0;
    cfg.count = 41;
    cfg.log_scale = true;
    cfg.eta_rule_factor = 3.0;
    cfg.t_over_omega_c = 10.0;
    cfg.methods = {Method::exact, Method::asymptotic};
    apply_overrides(cfg, overrides);
    return concat_over_omega_c(cfg, {800.0, 1200.0, 2000.0});
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::markovian: return "markovian";
        case Method::asymptotic: return "asymptotic";
    }
    return "?";
}

std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::time: return "t";
        case SweepVariable::photon_number: return "N";
        case SweepVariable::cutoff_frequency: return "omega_c";
    }
    return "?";
}

SweepResult run_sweep(const ExperimentConfig& config) {
    SweepResult out;
    switch (config.variable) {
        case SweepVariable::time: out = sweep_time(config); break;
        case SweepVariable::photon_number: out = sweep_photon_number(config); break;
        case SweepVariable::cutoff_frequency: out = sweep_cutoff(config); break;
    }
    if (out.provenance.empty()) echo_config(out, config);
    return out;
}

std::vector<std::string> preset_names() {
    return {"fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig3a", "fig3b", "fig3c"};
}

SweepResult run_preset(const std::string& name, const ExperimentConfig& overrides) {
    if (name == "fig1b") return preset_fig1b(overrides);
    if (name == "fig1c") return preset_fig1c(overrides);
    if (name == "fig1d") return preset_fig1d(overrides);
    if (name == "fig2a") return preset_fig2a(overrides);
    if (name == "fig2b") return preset_fig2b(overrides);
    if (name == "fig3a") return preset_fig3a(overrides);
    if (name == "fig3b") return preset_fig3b(overrides);
    if (name == "fig3c") return preset_fig3c(overrides);
    throw config_error("unknown preset '" + name + "'");
}

SweepResult run_preset(const std::string& name) { return run_preset(name, ExperimentConfig{}); }

// ---------------------------------------------------------------------------
// config parsing

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw config_error("config: bad numeric value for '" + key + "': '" + value + "'");
    }
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.methods.clear();
    std::string section;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw config_error("config line " + std::to_string(line_no) + ": bad section");
            section = trim(stripped.substr(1, stripped.size() - 2));
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const std::string qualified = section.empty() ? key : section + "." + key;

        if (qualified == "sweep.variable") {
            if (value == "t" || value == "time") cfg.variable = SweepVariable::time;
            else if (value == "N" || value == "n_avg") cfg.variable = SweepVariable::photon_number;
            else if (value == "omega_c") cfg.variable = SweepVariable::cutoff_frequency;
            else throw config_error("config: unknown sweep variable '" + value + "'");
        } else if (qualified == "sweep.min") cfg.min = parse_number(key, value);
        else if (qualified == "sweep.max") cfg.max = parse_number(key, value);
        else if (qualified == "sweep.count") cfg.count = int(parse_number(key, value));
        else if (qualified == "sweep.scale") {
            if (value == "log") cfg.log_scale = true;
            else if (value == "linear") cfg.log_scale = false;
            else throw config_error("config: scale must be linear or log");
        } else if (qualified == "params.s") cfg.s = parse_number(key, value);
        else if (qualified == "params.eta") cfg.eta = parse_number(key, value);
        else if (qualified == "params.eta_rule_factor") cfg.eta_rule_factor = parse_number(key, value);
        else if (qualified == "params.omega_c") cfg.omega_c = parse_number(key, value);
        else if (qualified == "params.gamma") cfg.gamma = parse_number(key, value);
        else if (qualified == "params.omega0") cfg.omega0 = parse_number(key, value);
        else if (qualified == "params.mu") cfg.mu = int(parse_number(key, value));
        else if (qualified == "params.n_avg") cfg.n_avg = parse_number(key, value);
        else if (qualified == "params.t") cfg.t = parse_number(key, value);
        else if (qualified == "params.t_over_omega_c") cfg.t_over_omega_c = parse_number(key, value);
        else if (qualified == "params.methods") {
            std::stringstream ms(value);
            std::string tok;
            while (std::getline(ms, tok, ',')) {
                tok = trim(tok);
                if (tok == "exact") cfg.methods.push_back(Method::exact);
                else if (tok == "markovian") cfg.methods.push_back(Method::markovian);
                else if (tok == "asymptotic") cfg.methods.push_back(Method::asymptotic);
                else throw config_error("config: unknown method '" + tok + "'");
            }
        } else if (qualified == "solver.dt") cfg.dt = parse_number(key, value);
        else if (qualified == "solver.cutoff_override") cfg.cutoff_override = int(parse_number(key, value));
        else if (qualified == "solver.root_tol") cfg.root_tol = parse_number(key, value);
        else if (qualified == "output.path") cfg.out_path = value;
        else if (qualified == "output.format") {
            if (value == "csv") cfg.format = OutputFormat::csv;
            else if (value == "json") cfg.format = OutputFormat::json;
            else throw config_error("config: format must be csv or json");
        } else if (qualified == "output.workers") cfg.workers = int(parse_number(key, value));
        else throw config_error("config line " + std::to_string(line_no) + ": unknown key '" +
                                qualified + "'");
    }
    if (cfg.methods.empty()) cfg.methods = {Method::exact};
    if (cfg.count < 1) throw config_error("config: count must be >= 1");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// output

namespace {

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

} // namespace

void write_csv(const SweepResult& result, std::ostream& os, bool with_timestamp) {
    os << "# nmqfi " << NMQFI_VERSION << "\n";
    for (const auto& [k, v] : result.provenance) os << "# " << k << " = " << v << "\n";
    if (with_timestamp) os << "# timestamp = " << timestamp_utc() << "\n";
    for (std::size_t i = 0; i < result.columns.size(); ++i)
        os << result.columns[i] << ",";
    os << "method,status\n";
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        for (const double x : result.rows[r]) os << format_double(x) << ",";
        os << result.method[r] << "," << result.status[r] << "\n";
    }
}

void write_json(const SweepResult& result, std::ostream& os, bool with_timestamp) {
    nlohmann::ordered_json doc;
    doc["version"] = NMQFI_VERSION;
    for (const auto& [k, v] : result.provenance) doc["config"][k] = v;
    if (with_timestamp) doc["timestamp"] = timestamp_utc();
    doc["columns"] = result.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        nlohmann::ordered_json row;
        for (std::size_t c = 0; c < result.columns.size(); ++c) {
            const double x = result.rows[r][c];
            row[result.columns[c]] =
                std::isnan(x) ? nlohmann::ordered_json() : nlohmann::ordered_json(x);
        }
        row["method"] = result.method[r];
        row["status"] = result.status[r];
        doc["rows"].push_back(row);
    }
    os << doc.dump(2) << "\n";
}

void write_result_file(const SweepResult& result, const std::string& path, OutputFormat format) {
    std::ofstream os(path);
    if (!os) throw config_error("cannot open output file '" + path + "'");
    if (format == OutputFormat::csv) write_csv(result, os);
    else write_json(result, os);
}

} // namespace nmqfi
