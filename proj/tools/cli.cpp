#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <qherald/series_io.hpp>
#include <qherald/trajectories.hpp>

namespace qherald::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

nlohmann::json number_15(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return nlohmann::json::parse(buf);
}

double as_number(const nlohmann::json &v, const std::string &key)
{
    if (!v.is_number()) {
        throw ConfigError("'" + key + "' must be a number");
    }
    return v.get<double>();
}

std::uint64_t as_count(const nlohmann::json &v, const std::string &key)
{
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0 &&
                                    !v.is_number_unsigned())) {
        throw ConfigError("'" + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

Grid grid_from_json(const nlohmann::json &v)
{
    try {
        if (v.is_string()) {
            return Grid::parse(v.get<std::string>());
        }
        if (!v.is_object()) {
            throw ConfigError("'grid' must be an object or \"start:stop:count\"");
        }
        Grid g;
        for (const auto &[key, value] : v.items()) {
            if (key == "start") {
                g.start = as_number(value, "grid.start");
            } else if (key == "stop") {
                g.stop = as_number(value, "grid.stop");
            } else if (key == "count") {
                g.count = as_count(value, "grid.count");
            } else {
                throw ConfigError("unknown key 'grid." + key + "'");
            }
        }
        g.validate();
        return g;
    } catch (const PreconditionError &e) {
        throw ConfigError(e.what());
    }
}

Detector detector_from_name(const std::string &name)
{
    auto d = parse_detector(name);
    if (!d) {
        throw ConfigError("unknown detector '" + name + "' (expected Da_F, Da_S, Db_F or Db_S)");
    }
    return *d;
}

std::vector<std::string> split_commas(const std::string &text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(item);
    }
    return out;
}

double parse_double_strict(const std::string &text, const std::string &what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ConfigError("invalid " + what + " '" + text + "'");
    }
    return v;
}

std::optional<FourTimes> parse_taus_text(const std::string &text)
{
    if (text == "optimal") {
        return std::nullopt;
    }
    const auto parts = split_commas(text);
    FourTimes taus{};
    if (parts.size() == 1) {
        taus.fill(parse_double_strict(parts[0], "tau"));
    } else if (parts.size() == 4) {
        for (std::size_t i = 0; i < 4; ++i) {
            taus[i] = parse_double_strict(parts[i], "tau");
        }
    } else {
        throw ConfigError("--tau takes 'optimal', one time, or four comma-separated times");
    }
    return taus;
}

FourTimes resolve_taus(const RunConfig &cfg)
{
    if (cfg.taus) {
        return *cfg.taus;
    }
    const double tau = optimal_tau(cfg.params);
    return {tau, tau, tau, tau};
}

nlohmann::json derived_rates_json(const SystemParams &p)
{
    const DerivedRates r = derive_rates(p);
    return {{"Omega", r.Omega},
            {"Gamma", r.Gamma},
            {"Delta", r.Delta},
            {"Omega_k", r.Omega_k},
            {"overdamped", r.overdamped()}};
}

std::string label_for_csv(std::string label)
{
    // Labels contain commas; keep the CSV single-field.
    std::replace(label.begin(), label.end(), ',', ' ');
    return label;
}

// ---------------------------------------------------------------- commands

std::string cmd_amplitudes(const RunConfig &cfg)
{
    const Grid grid = cfg.grid.value_or(Grid{0.0, 0.5, 501});
    const auto times = grid.points();
    for (double t : times) {
        if (t < 0.0) {
            throw ConfigError("amplitude grid must be non-negative");
        }
    }
    nlohmann::json echo = {{"config", cfg.to_json()}, {"derived", derived_rates_json(cfg.params)}};

    std::ostringstream os;
    if (cfg.format == OutputFormat::csv) {
        write_echo_comments(os, echo);
        os << "t,abs_x_sq,abs_y_sq,abs_z_sq,P_j\n";
    }
    nlohmann::json rows = nlohmann::json::array();
    for (double t : times) {
        const NoJumpAmplitudes a = no_jump_amplitudes(cfg.params, t);
        const double pj = survival_probability(cfg.params, t);
        const double cols[] = {t, std::norm(a.x), std::norm(a.y), std::norm(a.z), pj};
        if (cfg.format == OutputFormat::csv) {
            for (std::size_t i = 0; i < 5; ++i) {
                os << (i ? "," : "") << format_number(cols[i]);
            }
            os << '\n';
        } else {
            rows.push_back(cols);
        }
    }
    if (cfg.format == OutputFormat::json) {
        echo["columns"] = {"t", "abs_x_sq", "abs_y_sq", "abs_z_sq", "P_j"};
        echo["rows"] = rows;
        os << echo.dump(2) << '\n';
    }
    return os.str();
}

std::string cmd_trajectories(const RunConfig &cfg)
{
    const double t_max = cfg.t_max ? *cfg.t_max : optimal_tau(cfg.params);
    const auto records = simulate_ensemble(cfg.params, t_max, cfg.n_traj, cfg.seed);

    std::size_t survived = 0;
    std::size_t failures = 0;
    for (const auto &r : records) {
        survived += r.events.empty() ? 1 : 0;
        failures += r.protocol_failure() ? 1 : 0;
    }
    const double n = static_cast<double>(records.size());
    const double f = survived / n;
    nlohmann::json derived = {
        {"t_max", t_max},
        {"no_jump_fraction", f},
        {"no_jump_stderr", std::sqrt(f * (1.0 - f) / n)},
        {"survival_probability", survival_probability(cfg.params, t_max)},
        {"spontaneous_failures", failures},
    };
    nlohmann::json echo = {{"config", cfg.to_json()}, {"derived", derived}};

    std::ostringstream os;
    if (cfg.format == OutputFormat::csv) {
        write_echo_comments(os, echo);
        write_trajectory_csv(os, records);
        return os.str();
    }
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        nlohmann::json events = nlohmann::json::array();
        for (const auto &e : r.events) {
            events.push_back({{"time", e.time}, {"channel", std::string(to_string(e.channel))}});
        }
        rows.push_back({{"index", i},
                        {"seed", r.seed},
                        {"events", events},
                        {"final_label", std::string(to_string(r.final_label))},
                        {"survived", r.events.empty()}});
    }
    echo["trajectories"] = rows;
    os << echo.dump(2) << '\n';
    return os.str();
}

std::string cmd_cascade(const RunConfig &cfg)
{
    const SplitterAngle angle = cfg.angle();
    const FourTimes taus = resolve_taus(cfg);
    ClickSequence seq{cfg.sequence, cfg.times};
    const CascadeResult result = run_cascade(cfg.params, angle, seq);

    const double p2 = emission_probability_P2(cfg.params, taus);
    nlohmann::json derived = {
        {"theta_rad", number_15(angle.theta())},
        {"probability", result.probability},
        {"fidelity", result.decoded ? nlohmann::json(fidelity(*result.decoded, target_state()))
                                    : nlohmann::json(nullptr)},
        {"taus", taus},
        {"P1", survival_probability_P1(cfg.params, taus)},
        {"P2", p2},
        {"P_total", result.probability * p2},
        {"P_total_with_eta", std::pow(cfg.eta, 4) * result.probability * p2},
    };
    nlohmann::json echo = {{"config", cfg.to_json()}, {"derived", derived}};

    std::ostringstream os;
    if (cfg.format == OutputFormat::json) {
        echo["cascade"] = to_json(result);
        os << echo.dump(2) << '\n';
        return os.str();
    }
    write_echo_comments(os, echo);
    os << "stage,label,re,im\n";
    for (std::size_t m = 0; m < result.intermediate_states.size(); ++m) {
        const Ket &k = result.intermediate_states[m];
        const std::string stage = "click" + std::to_string(m + 1) + ":" +
                                  std::string(to_string(seq.clicks[m]));
        for (const auto &[label, amp] : k.amplitudes()) {
            os << stage << ',' << label_for_csv(k.label_string(label)) << ','
               << format_number(amp.real()) << ',' << format_number(amp.imag()) << '\n';
        }
    }
    if (result.decoded) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const Complex amp = (*result.decoded)(a, b);
                os << "decoded,|A=" << a << " B=" << b << ">," << format_number(amp.real())
                   << ',' << format_number(amp.imag()) << '\n';
            }
        }
    }
    return os.str();
}

std::string cmd_outcomes(const RunConfig &cfg)
{
    const auto outcomes = enumerate_outcomes(cfg.params, cfg.angle());
    double total = 0.0;
    for (const auto &o : outcomes) {
        total += o.probability;
    }
    nlohmann::json echo = {{"config", cfg.to_json()},
                           {"derived", {{"theta_rad", number_15(cfg.angle().theta())},
                                        {"total_probability", total}}}};
    const QutritPairState target = target_state();
    auto decoded_fidelity = [&](const OutcomePattern &o) -> std::optional<double> {
        if (o.probability <= 0.0) {
            return std::nullopt;
        }
        try {
            return fidelity(encode_qutrits(o.atomic_state), target);
        } catch (const Error &) {
            return std::nullopt;
        }
    };

    std::ostringstream os;
    if (cfg.format == OutputFormat::csv) {
        write_echo_comments(os, echo);
        os << "n_Da_F,n_Da_S,n_Db_F,n_Db_S,probability,fidelity\n";
        for (const auto &o : outcomes) {
            const auto f = decoded_fidelity(o);
            os << o.counts[0] << ',' << o.counts[1] << ',' << o.counts[2] << ',' << o.counts[3]
               << ',' << format_number(o.probability) << ',' << (f ? format_number(*f) : "")
               << '\n';
        }
        return os.str();
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &o : outcomes) {
        const auto f = decoded_fidelity(o);
        rows.push_back({{"counts", o.counts},
                        {"probability", o.probability},
                        {"fidelity", f ? nlohmann::json(*f) : nlohmann::json(nullptr)}});
    }
    echo["outcomes"] = rows;
    os << echo.dump(2) << '\n';
    return os.str();
}

std::string write_series(const RunConfig &cfg, SweepSeries series, nlohmann::json derived)
{
    series.params_echo = {{"config", cfg.to_json()}, {"derived", std::move(derived)}};
    std::ostringstream os;
    if (cfg.format == OutputFormat::csv) {
        write_series_csv(os, series);
    } else {
        os << to_json(series).dump(2) << '\n';
    }
    return os.str();
}

std::string cmd_sweep(const RunConfig &cfg)
{
    const SplitterAngle angle = cfg.angle();
    const Grid grid = cfg.grid.value_or(Grid{0.0, 0.5, 1000});
    Grid tau_grid = grid;
    tau_grid.start = grid.start / cfg.params.kappa;
    tau_grid.stop = grid.stop / cfg.params.kappa;
    const SweepSeries series = sweep_ptotal(cfg.params, angle, tau_grid);

    nlohmann::json derived = {{"theta_rad", number_15(angle.theta())}};
    if (!cfg.taus) {
        // Compares the grid optimum with the closed form; throws when
        // overdamped.
        const double tau_star = optimal_tau(cfg.params);
        const PeakReport peak = peak_report(cfg.params, angle, series);
        derived["tau_star"] = tau_star;
        derived["P_total_at_tau_star"] = *peak.p_at_closed_form;
        derived["grid_argmax_tau"] = peak.tau_grid_argmax;
        derived["grid_max_P_total"] = peak.p_grid_max;
        derived["peak_consistent"] = peak.consistent;
    } else {
        const PeakReport peak = peak_report(cfg.params, angle, series);
        derived["grid_argmax_tau"] = peak.tau_grid_argmax;
        derived["grid_max_P_total"] = peak.p_grid_max;
    }
    return write_series(cfg, series, derived);
}

std::string cmd_fidelity_scan(const RunConfig &cfg)
{
    if (cfg.scan == "theta") {
        const Grid grid = cfg.grid.value_or(Grid{0.0, 1.5, 301});
        return write_series(cfg, fidelity_vs_theta(cfg.params, grid), nlohmann::json::object());
    }
    const Grid grid = cfg.grid.value_or(Grid{0.5, 2.0, 301});
    if (!(grid.start > 0.0)) {
        throw ConfigError("lambda ratio grid must be positive");
    }
    const SplitterAngle angle = cfg.angle();
    return write_series(cfg, fidelity_vs_lambda_ratio(angle, grid, cfg.params),
                        {{"theta_rad", number_15(angle.theta())}});
}

} // namespace

void RunConfig::validate() const
{
    try {
        params.validate();
        if (theta) {
            SplitterAngle check(*theta);
            (void)check;
        }
        if (taus) {
            for (double t : *taus) {
                if (!(t >= 0.0) || !std::isfinite(t)) {
                    throw ConfigError("taus must be finite and non-negative");
                }
            }
        }
        if (grid) {
            grid->validate();
        }
        if (t_max && (!(*t_max > 0.0) || !std::isfinite(*t_max))) {
            throw ConfigError("t_max must be positive");
        }
        if (n_traj == 0) {
            throw ConfigError("n_traj must be positive");
        }
        if (sequence.size() != 4) {
            throw ConfigError("sequence must contain exactly four detectors");
        }
        ClickSequence{sequence, times}.validate();
        if (scan != "theta" && scan != "lambda_ratio") {
            throw ConfigError("scan must be 'theta' or 'lambda_ratio'");
        }
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw ConfigError("eta must lie in [0, 1]");
        }
    } catch (const ConfigError &) {
        throw;
    } catch (const PreconditionError &e) {
        throw ConfigError(e.what());
    }
}

nlohmann::json RunConfig::to_json() const
{
    nlohmann::json seq = nlohmann::json::array();
    for (Detector d : sequence) {
        seq.push_back(std::string(to_string(d)));
    }
    nlohmann::json j = {
        {"params", qherald::to_json(params)},
        {"theta", theta ? nlohmann::json(*theta) : nlohmann::json("canonical")},
        {"taus", taus ? nlohmann::json(*taus) : nlohmann::json("optimal")},
        {"seed", seed},
        {"grid", grid ? nlohmann::json{{"start", grid->start},
                                       {"stop", grid->stop},
                                       {"count", grid->count}}
                      : nlohmann::json(nullptr)},
        {"n_traj", n_traj},
        {"t_max", t_max ? nlohmann::json(*t_max) : nlohmann::json("optimal")},
        {"sequence", seq},
        {"times", times ? nlohmann::json(*times) : nlohmann::json(nullptr)},
        {"scan", scan},
        {"eta", eta},
    };
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json &j)
{
    if (!j.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    RunConfig cfg;
    for (const auto &[key, value] : j.items()) {
        if (key == "params") {
            try {
                cfg.params = params_from_json(value, cfg.params);
            } catch (const PreconditionError &e) {
                throw ConfigError(e.what());
            }
        } else if (key == "theta") {
            if (value.is_string() && value.get<std::string>() == "canonical") {
                cfg.theta.reset();
            } else {
                cfg.theta = as_number(value, "theta");
            }
        } else if (key == "taus") {
            if (value.is_string() && value.get<std::string>() == "optimal") {
                cfg.taus.reset();
            } else if (value.is_array() && value.size() == 4) {
                FourTimes t{};
                for (std::size_t i = 0; i < 4; ++i) {
                    t[i] = as_number(value[i], "taus");
                }
                cfg.taus = t;
            } else if (value.is_number()) {
                FourTimes t{};
                t.fill(value.get<double>());
                cfg.taus = t;
            } else {
                throw ConfigError("'taus' must be \"optimal\", a number or four numbers");
            }
        } else if (key == "seed") {
            cfg.seed = as_count(value, "seed");
        } else if (key == "grid") {
            if (value.is_null()) {
                cfg.grid.reset();
            } else {
                cfg.grid = grid_from_json(value);
            }
        } else if (key == "n_traj") {
            cfg.n_traj = as_count(value, "n_traj");
        } else if (key == "t_max") {
            if (value.is_string() && value.get<std::string>() == "optimal") {
                cfg.t_max.reset();
            } else {
                cfg.t_max = as_number(value, "t_max");
            }
        } else if (key == "sequence") {
            if (!value.is_array()) {
                throw ConfigError("'sequence' must be an array of detector names");
            }
            cfg.sequence.clear();
            for (const auto &d : value) {
                if (!d.is_string()) {
                    throw ConfigError("'sequence' must be an array of detector names");
                }
                cfg.sequence.push_back(detector_from_name(d.get<std::string>()));
            }
        } else if (key == "times") {
            if (value.is_null()) {
                cfg.times.reset();
            } else if (value.is_array()) {
                std::vector<double> t;
                for (const auto &v : value) {
                    t.push_back(as_number(v, "times"));
                }
                cfg.times = t;
            } else {
                throw ConfigError("'times' must be an array of numbers or null");
            }
        } else if (key == "scan") {
            if (!value.is_string()) {
                throw ConfigError("'scan' must be a string");
            }
            cfg.scan = value.get<std::string>();
        } else if (key == "eta") {
            cfg.eta = as_number(value, "eta");
        } else if (key == "format") {
            if (value == "csv") {
                cfg.format = OutputFormat::csv;
            } else if (value == "json") {
                cfg.format = OutputFormat::json;
            } else {
                throw ConfigError("'format' must be \"csv\" or \"json\"");
            }
        } else if (key == "output") {
            if (!value.is_string()) {
                throw ConfigError("'output' must be a path string");
            }
            cfg.output = value.get<std::string>();
        } else {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

SplitterAngle RunConfig::angle() const
{
    return theta ? SplitterAngle(*theta) : SplitterAngle::canonical();
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Heralded entanglement of two distant qutrits: dynamics, "
                 "trajectories, detection cascades and parameter scans."};
    app.name("qherald");
    app.require_subcommand(1, 1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string format;
    std::string output;
    double lambda_l = 0, lambda_r = 0, kappa = 0, gamma_l = 0, gamma_r = 0;
    std::string theta_text;
    std::string tau_text;
    std::size_t n_traj = 0;
    std::string grid_text;
    std::string t_max_text;
    std::string sequence_text;
    std::string scan;
    double eta = 1.0;

    auto *opt_config = app.add_option("--config", config_path, "JSON configuration file");
    auto *opt_seed = app.add_option("--seed", seed, "Master random seed");
    auto *opt_format = app.add_option("--format", format, "Output format")
                           ->check(CLI::IsMember({"csv", "json"}));
    auto *opt_output = app.add_option("--output", output, "Output path (default: stdout)");
    auto *opt_ll = app.add_option("--lambda-l", lambda_l, "Coupling lambda_L (units of kappa)");
    auto *opt_lr = app.add_option("--lambda-r", lambda_r, "Coupling lambda_R (units of kappa)");
    auto *opt_kappa = app.add_option("--kappa", kappa, "Cavity decay rate");
    auto *opt_gl = app.add_option("--gamma-l", gamma_l, "Spontaneous decay rate to g_l");
    auto *opt_gr = app.add_option("--gamma-r", gamma_r, "Spontaneous decay rate to g_r");
    auto *opt_theta = app.add_option("--theta", theta_text, "Splitter angle (rad) or 'canonical'");
    auto *opt_tau = app.add_option("--tau", tau_text,
                                   "Emission times: 'optimal', one time, or four comma-separated");
    auto *opt_ntraj = app.add_option("--n-traj", n_traj, "Number of trajectories");
    auto *opt_grid = app.add_option("--grid", grid_text, "Grid as start:stop:count");
    auto *opt_tmax = app.add_option("--t-max", t_max_text, "Trajectory end time or 'optimal'");
    auto *opt_seq = app.add_option("--sequence", sequence_text,
                                   "Comma-separated detector clicks, e.g. Da_F,Db_F,Da_S,Db_S");
    auto *opt_scan = app.add_option("--scan", scan, "Fidelity scan axis")
                         ->check(CLI::IsMember({"theta", "lambda_ratio"}));
    auto *opt_eta = app.add_option("--eta", eta, "Detector efficiency in [0, 1]");

    struct Command
    {
        const char *name;
        const char *help;
        std::string (*fn)(const RunConfig &);
    };
    const Command commands[] = {
        {"amplitudes", "No-jump amplitudes and survival probability over a time grid",
         cmd_amplitudes},
        {"trajectories", "Quantum-jump trajectories of one atom-cavity system", cmd_trajectories},
        {"cascade", "Apply a four-click detection sequence to the joint emission state",
         cmd_cascade},
        {"outcomes", "Probabilities of every detector occupation pattern", cmd_outcomes},
        {"sweep", "Herald probability versus kappa*tau", cmd_sweep},
        {"fidelity-scan", "Fidelity versus splitter angle or coupling ratio", cmd_fidelity_scan},
    };
    std::vector<CLI::App *> subs;
    for (const auto &c : commands) {
        auto *sub = app.add_subcommand(c.name, c.help);
        sub->fallthrough();
        subs.push_back(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "qherald: " << e.what() << '\n';
        return kExitUsage;
    }

    RunConfig cfg;
    try {
        if (*opt_config) {
            std::ifstream in(config_path);
            if (!in) {
                throw ConfigError("cannot read config file '" + config_path + "'");
            }
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error &e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
            cfg = RunConfig::from_json(j);
        }
        if (*opt_seed) cfg.seed = seed;
        if (*opt_format) cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
        if (*opt_output) cfg.output = output;
        if (*opt_ll) cfg.params.lambda_L = lambda_l;
        if (*opt_lr) cfg.params.lambda_R = lambda_r;
        if (*opt_kappa) cfg.params.kappa = kappa;
        if (*opt_gl) cfg.params.gamma_l = gamma_l;
        if (*opt_gr) cfg.params.gamma_r = gamma_r;
        if (*opt_theta) {
            cfg.theta = theta_text == "canonical"
                            ? std::nullopt
                            : std::optional<double>(parse_double_strict(theta_text, "theta"));
        }
        if (*opt_tau) cfg.taus = parse_taus_text(tau_text);
        if (*opt_ntraj) cfg.n_traj = n_traj;
        if (*opt_grid) {
            try {
                cfg.grid = Grid::parse(grid_text);
            } catch (const PreconditionError &e) {
                throw ConfigError(e.what());
            }
        }
        if (*opt_tmax) {
            cfg.t_max = t_max_text == "optimal"
                            ? std::nullopt
                            : std::optional<double>(parse_double_strict(t_max_text, "t-max"));
        }
        if (*opt_seq) {
            cfg.sequence.clear();
            for (const auto &name : split_commas(sequence_text)) {
                cfg.sequence.push_back(detector_from_name(name));
            }
        }
        if (*opt_scan) cfg.scan = scan;
        if (*opt_eta) cfg.eta = eta;
        cfg.validate();
    } catch (const ConfigError &e) {
        err << "qherald: configuration error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::string text;
    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (subs[i]->parsed()) {
                text = commands[i].fn(cfg);
            }
        }
        if (cfg.output.empty()) {
            out << text;
        } else {
            write_file_atomic(cfg.output, text);
        }
    } catch (const ConfigError &e) {
        err << "qherald: configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError &e) {
        err << "qherald: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception &e) {
        err << "qherald: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace qherald::cli
