// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

// tactsim: command-line front end for the TACT simulation library.
//
// Exit codes: 0 success, 1 threshold checks failed (reproduce-paper),
// 2 invalid input or computation error.

#include <tact/io.hpp>
#include <tact/reproduce.hpp>
#include <tact/states.hpp>
#include <tact/tact.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tact;

namespace {

struct Args {
    std::vector<double> j{};
    double tau = 0.0;
    std::vector<std::string> metric{};
    std::vector<int> grid{};
    std::string method = "automatic";
    double tol = 1e-10;
    std::string out = "tactsim_out";
    std::string format = "json";

    std::string kind = "sss";
    double alpha = 0.0;
    double beta = std::numbers::pi / 2;
    double chi = 1.0;
    double gamma = 0.0;
    std::string input{};
    int n_grid = 512;
    std::vector<double> window{};
    std::string family{};
    std::vector<double> init{};
    std::string y_col = "y";
    double fit_j_min = 50.0;
    unsigned threads = 0;
};

class Failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

PropagatorConfig propagator(const Args& a) {
    PropagatorConfig cfg{parse_propagation_method(a.method), a.tol};
    cfg.validate();
    return cfg;
}

Spin single_j(const Args& a) {
    if (a.j.size() != 1) throw InvalidArgument("this command takes exactly one --j value");
    return Spin::from_value(a.j.front());
}

TwistProtocol protocol(const Args& a) {
    TwistProtocol p;
    p.chi = a.chi;
    p.gamma = a.gamma;
    p.tau = a.tau;
    p.validate();
    return p;
}

SpinState build_state(const Args& a, const PropagatorConfig& cfg) {
    const Spin j = single_j(a);
    if (a.kind == "css") return make_css(j, {a.alpha, a.beta});
    if (a.kind == "ewss") return make_ewss(j);
    if (a.kind == "tfs") return make_twin_fock(j, cfg);
    if (a.kind == "cat") return make_cat(j);
    if (a.kind == "sss") return make_sss(j, protocol(a), cfg);
    if (a.kind == "top") return SpinState::basis(j, j.value());
    throw InvalidArgument("unknown state kind '" + a.kind + "' (css, ewss, tfs, cat, sss, top)");
}

std::string describe_state(const Args& a) {
    std::string d = "kind=" + a.kind + " j=" + io::format_double(a.j.front());
    if (a.kind == "sss") d += " tau=" + io::format_double(a.tau) + " chi=" + io::format_double(a.chi) +
                              " gamma=" + io::format_double(a.gamma);
    if (a.kind == "css") d += " alpha=" + io::format_double(a.alpha) + " beta=" + io::format_double(a.beta);
    return d;
}

void print_moments(const Args& a, const SpinState& s) {
    const auto m = spin_moments(s);
    if (a.format == "csv") {
        std::printf("mean_x,mean_y,mean_z,var_x,var_y,var_z\n%s,%s,%s,%s,%s,%s\n", io::format_double(m.mean.x()).c_str(),
                    io::format_double(m.mean.y()).c_str(), io::format_double(m.mean.z()).c_str(),
                    io::format_double(m.variance_x).c_str(), io::format_double(m.variance_y).c_str(),
                    io::format_double(m.variance_z).c_str());
    } else {
        io::Json j{{"mean", {m.mean.x(), m.mean.y(), m.mean.z()}},
                   {"variance", {m.variance_x, m.variance_y, m.variance_z}}};
        std::cout << j.dump() << "\n";
    }
}

int cmd_state(const Args& a) {
    const auto s = build_state(a, propagator(a));
    io::write_json(fs::path(a.out) / "state.json", io::to_json(s));
    io::write_text(fs::path(a.out) / "prob.csv", io::prob_distribution_csv(s));
    print_moments(a, s);
    return 0;
}

int cmd_qpd(const Args& a) {
    if (!a.grid.empty() && a.grid.size() != 2) throw InvalidArgument("--grid takes two values: n_phi n_theta");
    const int n_phi = a.grid.empty() ? 360 : a.grid[0];
    const int n_theta = a.grid.empty() ? 180 : a.grid[1];
    const auto s = build_state(a, propagator(a));
    const auto g = qpd(s, n_phi, n_theta);
    io::write_text(fs::path(a.out) / "qpd.csv", io::to_csv(g));
    io::write_json(fs::path(a.out) / "qpd.json", io::to_json(g, describe_state(a)));
    if (a.format == "csv") {
        std::printf("j,n_phi,n_theta,max,min\n%s,%d,%d,%s,%s\n", io::format_double(g.j).c_str(), g.n_phi, g.n_theta,
                    io::format_double(g.values.maxCoeff()).c_str(), io::format_double(g.values.minCoeff()).c_str());
    } else {
        std::cout << io::Json{{"j", g.j}, {"n_phi", g.n_phi}, {"n_theta", g.n_theta}, {"max", g.values.maxCoeff()},
                              {"min", g.values.minCoeff()}}
                         .dump()
                  << "\n";
    }
    return 0;
}

int cmd_evolve(const Args& a) {
    const auto cfg = propagator(a);
    const SpinState initial = a.input.empty() ? SpinState::basis(single_j(a), single_j(a).value())
                                              : io::state_from_json(io::read_json(a.input));
    if (!a.input.empty() && !a.j.empty() && Spin::from_value(a.j.front()) != initial.spin()) {
        throw InvalidArgument("--j disagrees with the spin of the input state");
    }
    const auto p = protocol(a);
    const auto s = evolve(initial, tact_generator(initial.spin(), p.chi, p.gamma), a.tau, cfg);
    io::write_json(fs::path(a.out) / "state.json", io::to_json(s));
    io::write_text(fs::path(a.out) / "prob.csv", io::prob_distribution_csv(s));
    print_moments(a, s);
    return 0;
}

int cmd_scan(const Args& a) {
    const auto cfg = propagator(a);
    if (a.j.empty()) throw InvalidArgument("scan needs at least one --j");
    std::vector<Metric> metrics;
    for (const auto& m : a.metric) metrics.push_back(parse_metric(m));
    if (metrics.empty()) metrics.assign(std::begin(kAllMetrics), std::end(kAllMetrics));

    if (a.j.size() == 1 && metrics.size() == 1) {
        ScanSpec spec = ScanSpec::with_default_window(Spin::from_value(a.j.front()), metrics.front());
        if (!a.window.empty()) {
            if (a.window.size() != 2) throw InvalidArgument("--window takes two values: tau_min tau_max");
            spec.tau_min = a.window[0];
            spec.tau_max = a.window[1];
            spec.refine_tol = 1e-6 * spec.tau_max;
        }
        spec.n_grid = a.n_grid;
        spec.protocol = protocol(a);
        const auto r = scan_tau(spec, cfg);
        io::write_json(fs::path(a.out) / "scan.json", io::to_json(r));
        std::string trace = "tau,value\n";
        for (std::size_t i = 0; i < r.grid_taus.size(); ++i) {
            trace += io::format_double(r.grid_taus[i]) + "," + io::format_double(r.grid_values[i]) + "\n";
        }
        io::write_text(fs::path(a.out) / "scan_trace.csv", trace);
        if (a.format == "csv") {
            std::printf("j,metric,tau_star,value_star\n%s,%s,%s,%s\n", io::format_double(a.j.front()).c_str(),
                        std::string(to_string(spec.metric)).c_str(), io::format_double(r.tau_star).c_str(),
                        io::format_double(r.value_star).c_str());
        } else {
            std::cout << io::Json{{"j", a.j.front()}, {"metric", to_string(spec.metric)}, {"tau_star", r.tau_star},
                                  {"value_star", r.value_star}}
                             .dump()
                      << "\n";
        }
        return 0;
    }

    if (!a.window.empty()) throw InvalidArgument("--window applies to single (J, metric) scans only");
    SweepOptions opt;
    opt.n_grid = a.n_grid;
    opt.threads = a.threads;
    const auto rows = scaling_sweep(a.j, metrics, cfg, opt);
    io::write_text(fs::path(a.out) / "sweep.csv", io::sweep_csv(rows));
    io::write_json(fs::path(a.out) / "sweep.json", io::to_json(rows));
    bool all_ok = true;
    for (const auto& r : rows) all_ok = all_ok && r.ok;
    if (a.format == "csv") {
        std::cout << io::sweep_csv(rows);
    } else {
        io::Json arr = io::Json::array();
        for (const auto& r : rows) {
            arr.push_back({{"j", r.j}, {"metric", to_string(r.metric)}, {"tau_star", r.tau_star},
                           {"value_star", r.value_star}, {"ok", r.ok}});
        }
        std::cout << arr.dump() << "\n";
    }
    if (!all_ok) throw Failure("one or more sweep rows failed; see sweep.csv");
    return 0;
}

int cmd_fit(const Args& a) {
    if (a.family.empty()) throw InvalidArgument("fit needs --family");
    if (a.input.empty()) throw InvalidArgument("fit needs --input (CSV with a j column)");
    const auto family = parse_fit_family(a.family);
    const auto table = io::read_csv(a.input);
    const int jc = table.column("j");
    const int yc = table.column(a.y_col);
    const int mc = a.metric.empty() ? -1 : table.column("metric");
    if (a.metric.size() > 1) throw InvalidArgument("fit takes at most one --metric filter");

    std::vector<double> js, ys;
    for (const auto& row : table.rows) {
        if (mc >= 0 && row.at(mc) != a.metric.front()) continue;
        js.push_back(std::stod(row.at(jc)));
        ys.push_back(std::stod(row.at(yc)));
    }
    std::optional<Eigen::VectorXd> init;
    if (!a.init.empty()) init = Eigen::Map<const Eigen::VectorXd>(a.init.data(), static_cast<Eigen::Index>(a.init.size()));
    const auto r = fit(family, js, ys, init);
    io::write_json(fs::path(a.out) / "fit.json", io::to_json(r));
    if (a.format == "csv") {
        std::cout << "param,value,std_error\n";
        const char* names = "abc";
        for (Eigen::Index k = 0; k < r.model.params.size(); ++k) {
            std::cout << names[k] << "," << io::format_double(r.model.params(k)) << ","
                      << io::format_double(r.param_se(k)) << "\n";
        }
    } else {
        std::cout << io::to_json(r).dump() << "\n";
    }
    if (!r.converged) throw Failure("fit did not converge (status " + std::string(to_string(r.status)) + ")");
    return 0;
}

int cmd_reproduce(const Args& a) {
    ReproduceOptions opt;
    if (!a.j.empty()) opt.j_list = a.j;
    opt.fit_j_min = a.fit_j_min;
    opt.sweep.n_grid = a.n_grid;
    opt.sweep.threads = a.threads;
    const auto rep = reproduce(opt, propagator(a));
    write_report(rep, a.out);
    std::cout << format_report(rep);
    return rep.ok() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-axis counter-twisting spin squeezing simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key = value file; command-line flags take precedence");
    app.config_formatter(std::make_shared<CLI::ConfigINI>());
    app.allow_config_extras(false);

    Args a;
    app.add_option("--j", a.j, "total spin J (several values for scan / reproduce-paper)")->expected(1, -1);
    app.add_option("--tau", a.tau, "twisting time (chi t)");
    app.add_option("--metric", a.metric, "fid_ewss, fid_tfs, var_z_max, var_y_min")->expected(1, -1);
    app.add_option("--grid", a.grid, "QPD resolution: n_phi n_theta")->expected(2);
    app.add_option("--method", a.method, "automatic, dense_expm or krylov")->capture_default_str();
    app.add_option("--tol", a.tol, "propagator tolerance")->capture_default_str();
    app.add_option("--out", a.out, "output directory")->capture_default_str();
    app.add_option("--format", a.format, "stdout summary encoding")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--kind", a.kind, "state: css, ewss, tfs, cat, sss, top");
    app.add_option("--alpha", a.alpha, "CSS azimuth");
    app.add_option("--beta", a.beta, "CSS polar angle");
    app.add_option("--chi", a.chi, "twisting strength");
    app.add_option("--gamma", a.gamma, "twisting phase");
    app.add_option("--input", a.input, "input file (state JSON for evolve, CSV for fit)");
    app.add_option("--n-grid", a.n_grid, "coarse scan grid size");
    app.add_option("--window", a.window, "scan window: tau_min tau_max")->expected(2);
    app.add_option("--family", a.family, "sq_power_offset, shifted_power, log_over_linear");
    app.add_option("--init", a.init, "initial fit parameters")->expected(2, 3);
    app.add_option("--y-col", a.y_col, "fit: CSV column with the dependent variable");
    app.add_option("--fit-jmin", a.fit_j_min, "reproduce-paper: smallest J used in the fits");
    app.add_option("--threads", a.threads, "sweep worker threads (0 = hardware)");

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const Args&);
    };
    const Command commands[] = {
        {"state", "write a state (JSON) and its P(M) distribution (CSV)", cmd_state},
        {"qpd", "quasi-probability distribution on a (phi, theta) grid", cmd_qpd},
        {"evolve", "TACT evolution of |J,J> or an input state", cmd_evolve},
        {"scan", "optimal tau for one (J, metric) or a sweep over several", cmd_scan},
        {"fit", "fit a scaling law to CSV data", cmd_fit},
        {"reproduce-paper", "full sweep, eight scaling-law fits and threshold checks", cmd_reproduce},
    };
    int (*selected)(const Args&) = nullptr;
    for (const auto& c : commands) {
        app.add_subcommand(c.name, c.help)->callback([&selected, run = c.run] { selected = run; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "tactsim: " << e.what() << "\n";
        return 2;
    }

    try {
        return selected(a);
    } catch (const Failure& e) {
        std::cerr << "tactsim: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "tactsim: " << e.what() << "\n";
        return 2;
    }
}
