#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "cvqkd/attack_reduction.hpp"
#include "cvqkd/errors.hpp"
#include "cvqkd/key_rate.hpp"
#include "cvqkd/simulation.hpp"
#include "cvqkd/threshold.hpp"
#include "cvqkd/version.hpp"

namespace cvqkd::cli {

namespace {

using nlohmann::json;

constexpr const char* kUsage =
    "cvqkd -- key rates and security thresholds of the heterodyne coherent-state\n"
    "CV-QKD protocol under a modulated Trojan-horse side channel\n"
    "\n"
    "usage: cvqkd <command> [flags]\n"
    "\n"
    "commands:\n"
    "  rate       key rate at one parameter point (JSON record)\n"
    "  sweep      sweep one variable, emit CSV\n"
    "  threshold  maximal tolerable excess noise over a dB grid (CSV)\n"
    "  verify     check the circuit reduction against its closed forms\n"
    "  simulate   Monte Carlo session and channel estimation (JSON)\n"
    "\n"
    "run 'cvqkd <command> --help' for the per-command flags. Every command also\n"
    "accepts --config <file> with flat key=value lines; flags override the file.\n";

std::string iso_timestamp_utc() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

double eta_from_db(double db) { return std::pow(10.0, -db / 10.0); }
double db_from_eta(double eta) { return -10.0 * std::log10(eta); }

json optional_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

/// Channel-point flags shared by rate and sweep.
struct PointFlags {
    double eta = 0.0;
    double eta_db = 0.0;
    double eps = 0.0;
    double nbar = 0.0;
    double m = 1.0;
    double mu = 0.0;
    CLI::Option* eta_opt = nullptr;
    CLI::Option* eta_db_opt = nullptr;
    CLI::Option* mu_opt = nullptr;
};

void add_point_flags(CLI::App& app, PointFlags& f, bool with_mu) {
    f.eta_opt = app.add_option("--eta", f.eta, "Channel transmittance in (0,1]");
    f.eta_db_opt = app.add_option("--eta-db", f.eta_db, "Channel loss in dB; eta = 10^(-dB/10)");
    f.eta_opt->excludes(f.eta_db_opt);
    f.eta_db_opt->excludes(f.eta_opt);
    app.add_option("--eps", f.eps, "Excess noise in shot-noise units")->capture_default_str();
    app.add_option("--nbar", f.nbar, "Mean Trojan photon number")->capture_default_str();
    app.add_option("--m", f.m, "Side-channel modulation gain")->capture_default_str();
    if (with_mu) {
        f.mu_opt =
            app.add_option("--mu", f.mu, "Modulation variance; omit for the asymptotic limit");
    }
}

double resolve_eta(const PointFlags& f) {
    if (f.eta_db_opt->count() > 0) return eta_from_db(f.eta_db);
    if (f.eta_opt->count() > 0) return f.eta;
    throw std::invalid_argument("one of --eta or --eta-db is required");
}

RunRecord evaluate_point(double eta, double eps, double nbar, double m,
                         std::optional<double> mu) {
    const SideChannelParams sc(nbar, m);
    const ChannelParams ch(eta, eps);

    RunRecord rec;
    rec.eta = eta;
    rec.eta_db = db_from_eta(eta);
    rec.eps = eps;
    rec.nbar = nbar;
    rec.m = m;
    rec.version = kVersion;
    rec.timestamp = iso_timestamp_utc();

    KeyRateBreakdown br;
    if (mu) {
        br = key_rate_finite(ch, *mu, sc);
        rec.mode = "finite";
        rec.mu = mu;
        rec.mu_eff = br.eff.mu_eff;
    } else {
        br = key_rate_asymptotic(ch, 1.0, sc);
        rec.mode = "asymptotic";
    }
    rec.rate = br.rate;
    rec.i_ab = br.i_ab;
    rec.holevo = br.holevo_eb;
    rec.k = br.eff.k;
    rec.eta_eff = br.eff.eta_eff;
    rec.eps_eff = br.eff.eps_eff;
    if (eta < 1.0) {
        rec.plob = plob_bound(eta);
    }
    return rec;
}

void emit_sweep_row(std::ostream& out, const RunRecord& rec) {
    out << format_number(rec.eta) << ',' << format_number(rec.eta_db) << ','
        << format_number(rec.nbar) << ',' << format_number(rec.m) << ','
        << format_number(rec.eps) << ',' << format_number(rec.rate) << ','
        << format_number(rec.plob ? *rec.plob : std::numeric_limits<double>::infinity()) << ','
        << format_number(rec.k) << ',' << format_number(rec.i_ab) << ','
        << format_number(rec.holevo) << '\n';
}

/// Parses one subcommand app (as a root app, so --config works) and maps
/// errors to the documented exit codes.
int parse_and_run(CLI::App& app, std::vector<std::string> args, std::ostream& out,
                  std::ostream& err, const int& exit_code) {
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    try {
        app.parse(args);
        return exit_code;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

void add_config_flag(CLI::App& app) {
    app.set_config("--config", "", "Flat key=value file mirroring the flags; flags win");
}

int cmd_rate(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Key rate at one parameter point (JSON record)", "cvqkd rate"};
    PointFlags f;
    add_point_flags(app, f, /*with_mu=*/true);
    add_config_flag(app);
    const int exit_code = 0;
    app.callback([&] {
        const double eta = resolve_eta(f);
        const std::optional<double> mu =
            f.mu_opt->count() > 0 ? std::optional<double>(f.mu) : std::nullopt;
        out << to_json_string(evaluate_point(eta, f.eps, f.nbar, f.m, mu)) << '\n';
    });
    return parse_and_run(app, args, out, err, exit_code);
}

int cmd_sweep(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sweep one variable, emit CSV", "cvqkd sweep"};
    PointFlags f;
    SweepSpec spec;
    std::string scale = "linear";
    add_point_flags(app, f, /*with_mu=*/true);
    app.add_option("--var", spec.variable, "Swept variable: eta|eta_db|eps|nbar|m|mu")
        ->default_val("eta");
    app.add_option("--start", spec.start, "Grid start")->required();
    app.add_option("--stop", spec.stop, "Grid stop")->required();
    app.add_option("--steps", spec.steps, "Grid size (>= 2)")->required();
    app.add_option("--scale", scale, "linear|log")->capture_default_str();
    add_config_flag(app);
    const int exit_code = 0;
    app.callback([&] {
        if (scale == "linear") {
            spec.scale = SweepScale::linear;
        } else if (scale == "log") {
            spec.scale = SweepScale::log;
        } else {
            throw std::invalid_argument("--scale must be linear or log");
        }
        const auto grid = sweep_grid(spec);
        const bool finite = f.mu_opt->count() > 0 || spec.variable == "mu";

        out << "eta,eta_db,nbar,m,eps,rate,plob,k,i_ab,holevo\n";
        for (const double v : grid) {
            double eta = 0.0, eps = f.eps, nbar = f.nbar, m = f.m, mu = f.mu;
            if (spec.variable == "eta") {
                eta = v;
            } else if (spec.variable == "eta_db") {
                eta = eta_from_db(v);
            } else {
                eta = resolve_eta(f);
                if (spec.variable == "eps") eps = v;
                if (spec.variable == "nbar") nbar = v;
                if (spec.variable == "m") m = v;
                if (spec.variable == "mu") mu = v;
            }
            emit_sweep_row(out, evaluate_point(eta, eps, nbar, m,
                                               finite ? std::optional<double>(mu)
                                                      : std::nullopt));
        }
    });
    return parse_and_run(app, args, out, err, exit_code);
}

int cmd_threshold(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Maximal tolerable excess noise over a dB grid (CSV)", "cvqkd threshold"};
    double db_start = 0.0, db_stop = 0.0, nbar = 0.0, m = 1.0, tol = 1e-10;
    int steps = 0;
    app.add_option("--db-start", db_start, "Grid start, transmission dB")->required();
    app.add_option("--db-stop", db_stop, "Grid stop, transmission dB")->required();
    app.add_option("--steps", steps, "Grid size (>= 1)")->required();
    app.add_option("--nbar", nbar, "Mean Trojan photon number")->capture_default_str();
    app.add_option("--m", m, "Side-channel modulation gain")->capture_default_str();
    app.add_option("--tol", tol, "Bisection tolerance in eps")->capture_default_str();
    add_config_flag(app);
    const int exit_code = 0;
    app.callback([&] {
        if (steps < 1) {
            throw std::invalid_argument("--steps must be >= 1");
        }
        if (steps > 1 && !(db_start < db_stop)) {
            throw std::invalid_argument("--db-start must be below --db-stop");
        }
        std::vector<double> etas;
        etas.reserve(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i) {
            const double db =
                steps == 1 ? db_start : db_start + i * (db_stop - db_start) / (steps - 1);
            etas.push_back(eta_from_db(db));
        }
        const SideChannelParams sc(nbar, m);
        out << "eta_db,eta,nbar,m,eps_max,no_threshold\n";
        for (const ThresholdPoint& pt : threshold_curve(etas, sc, tol)) {
            out << format_number(pt.eta_db) << ',' << format_number(pt.eta) << ','
                << format_number(nbar) << ',' << format_number(m) << ','
                << format_number(pt.eps_max) << ',' << (pt.no_threshold ? '1' : '0') << '\n';
        }
    });
    return parse_and_run(app, args, out, err, exit_code);
}

int cmd_verify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Check the circuit reduction against its closed forms", "cvqkd verify"};
    double mu = 1.0, nbar = 0.0, m = 1.0, tol = 1e-10;
    std::vector<double> alpha{0.8, -0.45};
    auto* mu_opt = app.add_option("--mu", mu, "Modulation variance")->capture_default_str();
    auto* nbar_opt =
        app.add_option("--nbar", nbar, "Mean Trojan photon number")->capture_default_str();
    auto* m_opt = app.add_option("--m", m, "Side-channel modulation gain")->capture_default_str();
    auto* alpha_opt = app.add_option("--alpha", alpha, "Fixed displacement (x p)")
                          ->expected(2)
                          ->capture_default_str();
    app.add_option("--tol", tol, "Deviation tolerance")->capture_default_str();
    add_config_flag(app);
    int exit_code = 0;
    app.callback([&] {
        const Eigen::Vector2d disp(alpha.at(0), alpha.at(1));
        const bool single =
            mu_opt->count() || nbar_opt->count() || m_opt->count() || alpha_opt->count();
        std::vector<std::array<double, 3>> points;
        if (single) {
            points.push_back({mu, nbar, m});
        } else {
            for (const double mu_g : {0.0, 1.0, 10.0}) {
                for (const double nbar_g : {0.0, 0.5, 2.0}) {
                    for (const double m_g : {0.5, 1.0, 2.0}) {
                        points.push_back({mu_g, nbar_g, m_g});
                    }
                }
            }
        }

        bool all_ok = true;
        double worst = 0.0;
        for (const auto& [mu_p, nbar_p, m_p] : points) {
            const ReductionReport rep = verify_reduction(mu_p, SideChannelParams(nbar_p, m_p), disp);
            const bool ok = rep.passed(tol);
            all_ok = all_ok && ok;
            worst = std::max(worst, rep.max_deviation());
            out << "mu=" << format_number(mu_p) << " nbar=" << format_number(nbar_p)
                << " m=" << format_number(m_p) << " theta1=" << format_number(rep.params.theta1)
                << " r2=" << format_number(rep.params.r2)
                << " r3=" << format_number(rep.params.r3) << " | dev";
            for (std::size_t i = 0; i < rep.stage.size(); ++i) {
                out << " stage" << i << '=' << format_number(rep.stage[i].max());
            }
            out << " | " << (ok ? "ok" : "FAIL") << '\n';
        }
        out << (all_ok ? "verification passed" : "verification FAILED") << " (max deviation "
            << format_number(worst) << ", tol " << format_number(tol) << ")\n";
        exit_code = all_ok ? 0 : 1;
    });
    return parse_and_run(app, args, out, err, exit_code);
}

int cmd_simulate(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte Carlo session and channel estimation (JSON)", "cvqkd simulate"};
    double mu = 0.0, eta = 0.0, eps = 0.0;
    std::uint64_t n = 0, seed = 1;
    std::string dump_path;
    app.add_option("--mu", mu, "Modulation variance")->required();
    app.add_option("--eta", eta, "Channel transmittance in (0,1]")->required();
    app.add_option("--eps", eps, "Excess noise")->capture_default_str();
    app.add_option("--samples", n, "Number of rounds")->required();
    app.add_option("--seed", seed, "PRNG seed")->capture_default_str();
    app.add_option("--dump-samples", dump_path, "Write raw samples as CSV to this path");
    add_config_flag(app);
    const int exit_code = 0;
    app.callback([&] {
        const ChannelParams ch(eta, eps);
        const auto samples = sample_session(mu, ch, n, seed);
        if (!dump_path.empty()) {
            std::ofstream file(dump_path);
            if (!file) {
                throw std::invalid_argument("cannot open --dump-samples path '" + dump_path + "'");
            }
            file << "alpha_x,alpha_p,beta_x,beta_p\n";
            for (const auto& s : samples) {
                file << format_number(s.alpha_x) << ',' << format_number(s.alpha_p) << ','
                     << format_number(s.beta_x) << ',' << format_number(s.beta_p) << '\n';
            }
        }
        const ChannelEstimate est = estimate_channel(samples, mu);
        const json doc{{"eta_hat", est.eta_hat},
                       {"eps_hat", est.eps_hat},
                       {"i_ab_hat", est.i_ab_hat},
                       {"se_eta", est.se_eta},
                       {"se_eps", est.se_eps},
                       {"se_i_ab", est.se_i_ab},
                       {"sample_count", est.sample_count},
                       {"inputs",
                        {{"mu", mu},
                         {"eta", eta},
                         {"eps", eps},
                         {"samples", n},
                         {"seed", seed}}}};
        out << doc.dump(2) << '\n';
    });
    return parse_and_run(app, args, out, err, exit_code);
}

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // normalize -0
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

std::string to_json_string(const RunRecord& r) {
    json inputs{{"eta", r.eta},   {"eta_db", r.eta_db}, {"eps", r.eps},
                {"nbar", r.nbar}, {"m", r.m},           {"mode", r.mode}};
    inputs["mu"] = optional_to_json(r.mu);
    json outputs{{"rate", r.rate}, {"i_ab", r.i_ab},       {"holevo", r.holevo},
                 {"k", r.k},       {"eta_eff", r.eta_eff}, {"eps_eff", r.eps_eff}};
    outputs["mu_eff"] = optional_to_json(r.mu_eff);
    outputs["plob"] = optional_to_json(r.plob);
    const json doc{{"inputs", inputs},
                   {"outputs", outputs},
                   {"version", r.version},
                   {"timestamp", r.timestamp}};
    return doc.dump(2);
}

RunRecord run_record_from_json(const std::string& text) {
    const json doc = json::parse(text);
    const json& in = doc.at("inputs");
    const json& outj = doc.at("outputs");
    RunRecord r;
    r.eta = in.at("eta").get<double>();
    r.eta_db = in.at("eta_db").get<double>();
    r.eps = in.at("eps").get<double>();
    r.nbar = in.at("nbar").get<double>();
    r.m = in.at("m").get<double>();
    r.mu = optional_from_json(in.at("mu"));
    r.mode = in.at("mode").get<std::string>();
    r.rate = outj.at("rate").get<double>();
    r.i_ab = outj.at("i_ab").get<double>();
    r.holevo = outj.at("holevo").get<double>();
    r.k = outj.at("k").get<double>();
    r.eta_eff = outj.at("eta_eff").get<double>();
    r.eps_eff = outj.at("eps_eff").get<double>();
    r.mu_eff = optional_from_json(outj.at("mu_eff"));
    r.plob = optional_from_json(outj.at("plob"));
    r.version = doc.at("version").get<std::string>();
    r.timestamp = doc.at("timestamp").get<std::string>();
    return r;
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
    static const std::vector<std::string> kVariables = {"eta",  "eta_db", "eps",
                                                        "nbar", "m",      "mu"};
    if (std::find(kVariables.begin(), kVariables.end(), spec.variable) == kVariables.end()) {
        throw std::invalid_argument("sweep_grid: unknown variable '" + spec.variable + "'");
    }
    if (!(spec.start < spec.stop)) {
        throw std::invalid_argument("sweep_grid: start must be below stop");
    }
    if (spec.steps < 2) {
        throw std::invalid_argument("sweep_grid: need at least 2 steps");
    }
    if (spec.scale == SweepScale::log && !(spec.start > 0.0)) {
        throw std::invalid_argument("sweep_grid: log scale needs positive endpoints");
    }

    std::vector<double> grid(static_cast<std::size_t>(spec.steps));
    grid.front() = spec.start;
    grid.back() = spec.stop;
    if (spec.scale == SweepScale::linear) {
        const double step = (spec.stop - spec.start) / (spec.steps - 1);
        for (int i = 1; i + 1 < spec.steps; ++i) {
            grid[static_cast<std::size_t>(i)] = spec.start + i * step;
        }
    } else {
        const double lstart = std::log(spec.start);
        const double step = (std::log(spec.stop) - lstart) / (spec.steps - 1);
        for (int i = 1; i + 1 < spec.steps; ++i) {
            grid[static_cast<std::size_t>(i)] = std::exp(lstart + i * step);
        }
    }
    return grid;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }

    if (args.empty()) {
        err << kUsage;
        return 2;
    }
    const std::string command = args.front();
    const std::vector<std::string> rest(args.begin() + 1, args.end());

    if (command == "--help" || command == "-h" || command == "help") {
        out << kUsage;
        return 0;
    }
    if (command == "--version") {
        out << kVersion << '\n';
        return 0;
    }
    if (command == "rate") return cmd_rate(rest, out, err);
    if (command == "sweep") return cmd_sweep(rest, out, err);
    if (command == "threshold") return cmd_threshold(rest, out, err);
    if (command == "verify") return cmd_verify(rest, out, err);
    if (command == "simulate") return cmd_simulate(rest, out, err);

    err << "error: unknown command '" << command << "'\n\n" << kUsage;
    return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("cvqkd");
    for (const auto& arg : args) {
        argv.push_back(arg.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cvqkd::cli
