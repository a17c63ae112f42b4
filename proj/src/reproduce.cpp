// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <tact/reproduce.hpp>

#include <tact/io.hpp>
#include <tact/observables.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace tact {

std::string_view to_string(FitQuantity q) {
    switch (q) {
    case FitQuantity::fid_ewss_max: return "fid_ewss_max";
    case FitQuantity::fid_tfs_max: return "fid_tfs_max";
    case FitQuantity::sigma_at_ewss: return "sigma_at_tau_ewss";
    case FitQuantity::sigma_at_tfs: return "sigma_at_tau_tfs";
    case FitQuantity::sigma_max: return "sigma_max";
    case FitQuantity::tau_ewss: return "tau_ewss";
    case FitQuantity::tau_tfs: return "tau_tfs";
    case FitQuantity::tau_sigma_max: return "tau_sigma_max";
    }
    return "?";
}

const std::vector<ReferenceLaw>& reference_laws() {
    static const std::vector<ReferenceLaw> laws{
        {"Eq. 6", FitFamily::sq_power_offset, FitQuantity::fid_ewss_max, {0.0298, 0.621, 0.995}},
        {"Eq. 7", FitFamily::sq_power_offset, FitQuantity::fid_tfs_max, {0.0743, 1.00, 0.932}},
        {"Eq. 13", FitFamily::shifted_power, FitQuantity::sigma_at_ewss, {0.557, 1.03, 1.00}},
        {"Eq. 14", FitFamily::shifted_power, FitQuantity::sigma_at_tfs, {0.775, 0.494, 1.00}},
        {"Eq. 15", FitFamily::shifted_power, FitQuantity::sigma_max, {0.799, 0.453, 1.00}},
        {"Eq. 16", FitFamily::log_over_linear, FitQuantity::tau_ewss, {1.10, 4.02, 0.0}},
        {"Eq. 17", FitFamily::log_over_linear, FitQuantity::tau_tfs, {25.2, 3.93, 0.0}},
        {"Eq. 18", FitFamily::log_over_linear, FitQuantity::tau_sigma_max, {11.5, 3.94, 0.0}},
    };
    return laws;
}

bool ReproduceReport::ok() const {
    return errors.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

FitModel reference_model(const ReferenceLaw& law) {
    FitModel m{law.family, Eigen::VectorXd(parameter_count(law.family))};
    for (int k = 0; k < m.params.size(); ++k) m.params(k) = law.params[k];
    return m;
}

std::string j_label(double j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", j);
    return buf;
}

Check relative_check(std::string name, double value, double target, double tol) {
    Check c{std::move(name), value, target, tol, false, {}};
    c.passed = std::isfinite(value) && std::abs(value / target - 1.0) <= tol;
    c.note = "|value/target - 1| <= tolerance";
    return c;
}

Check absolute_check(std::string name, double value, double target, double tol) {
    Check c{std::move(name), value, target, tol, false, {}};
    c.passed = std::isfinite(value) && std::abs(value - target) <= tol;
    c.note = "|value - target| <= tolerance";
    return c;
}

Check less_check(std::string name, double value, double bound) {
    Check c{std::move(name), value, bound, 0.0, false, {}};
    c.passed = value < bound;
    c.note = "value < target";
    return c;
}

// Sweep rows keyed by (J, metric) for the successful entries only.
class SweepIndex {
public:
    explicit SweepIndex(const std::vector<SweepRow>& rows) {
        for (const auto& r : rows) {
            if (r.ok) rows_[{r.j, r.metric}] = &r;
        }
    }
    [[nodiscard]] const SweepRow* find(double j, Metric m) const {
        const auto it = rows_.find({j, m});
        return it == rows_.end() ? nullptr : it->second;
    }

private:
    std::map<std::pair<double, Metric>, const SweepRow*> rows_;
};

std::optional<double> quantity_at(FitQuantity q, double j, const SweepIndex& idx, const std::vector<SigmaRow>& sigma) {
    auto row_value = [&](Metric m, bool tau) -> std::optional<double> {
        const auto* r = idx.find(j, m);
        if (!r) return std::nullopt;
        return tau ? r->tau_star : r->value_star;
    };
    auto sigma_value = [&](bool tfs) -> std::optional<double> {
        for (const auto& s : sigma) {
            if (s.j == j) return tfs ? s.at_tau_tfs : s.at_tau_ewss;
        }
        return std::nullopt;
    };
    switch (q) {
    case FitQuantity::fid_ewss_max: return row_value(Metric::fid_ewss, false);
    case FitQuantity::fid_tfs_max: return row_value(Metric::fid_tfs, false);
    case FitQuantity::sigma_at_ewss: return sigma_value(false);
    case FitQuantity::sigma_at_tfs: return sigma_value(true);
    case FitQuantity::sigma_max: return row_value(Metric::var_z_max, false);
    case FitQuantity::tau_ewss: return row_value(Metric::fid_ewss, true);
    case FitQuantity::tau_tfs: return row_value(Metric::fid_tfs, true);
    case FitQuantity::tau_sigma_max: return row_value(Metric::var_z_max, true);
    }
    return std::nullopt;
}

void validate_j_list(const std::vector<double>& js) {
    if (js.empty()) throw InvalidArgument("reproduce needs a nonempty J list");
    for (std::size_t i = 0; i < js.size(); ++i) {
        if (!(js[i] >= 1.0) || std::floor(js[i]) != js[i]) {
            throw InvalidArgument("reproduce needs integer J >= 1, got " + j_label(js[i]));
        }
        if (i > 0 && !(js[i] > js[i - 1])) throw InvalidArgument("reproduce needs a strictly ascending J list");
    }
}

void add_point_checks(ReproduceReport& rep, const SweepIndex& idx) {
    for (double j : rep.options.j_list) {
        const auto* ewss = idx.find(j, Metric::fid_ewss);
        const auto* tfs = idx.find(j, Metric::fid_tfs);
        const auto* zmax = idx.find(j, Metric::var_z_max);
        const auto* ymin = idx.find(j, Metric::var_y_min);
        const std::string at = "@J=" + j_label(j);

        if (j == 50.0 && tfs && ewss) {
            const double f_ref = std::pow(0.0743 / 50 + 0.932, 2);
            rep.checks.push_back(absolute_check("fid_tfs_max" + at, tfs->value_star, f_ref, 0.01));
            Check band{"fid_ewss_max" + at, ewss->value_star, 0.99, 0.01, false, {}};
            band.passed = ewss->value_star > 0.98 && ewss->value_star < 1.0;
            band.note = "value in open interval (0.98, 1.0)";
            rep.checks.push_back(band);
        }
        if ((j == 20.0 || j == 50.0 || j == 100.0) && ewss && tfs && zmax) {
            const auto& laws = reference_laws();
            rep.checks.push_back(relative_check("tau_ewss" + at, ewss->tau_star, evaluate(reference_model(laws[5]), j), 0.05));
            rep.checks.push_back(relative_check("tau_tfs" + at, tfs->tau_star, evaluate(reference_model(laws[6]), j), 0.05));
            rep.checks.push_back(
                relative_check("tau_sigma_max" + at, zmax->tau_star, evaluate(reference_model(laws[7]), j), 0.05));
        }
        if (ymin && ewss) {
            rep.checks.push_back(less_check("order_tau_var_y_min_lt_tau_ewss" + at, ymin->tau_star, ewss->tau_star));
        }
        if (ewss && tfs) rep.checks.push_back(less_check("order_tau_ewss_lt_tau_tfs" + at, ewss->tau_star, tfs->tau_star));
        if (zmax && tfs) {
            const char* rel = zmax->tau_star < tfs->tau_star ? "<" : (zmax->tau_star > tfs->tau_star ? ">" : "=");
            rep.observations.push_back("J=" + j_label(j) + ": tau_sigma_max = " + io::format_double(zmax->tau_star) +
                                       " " + rel + " tau_tfs = " + io::format_double(tfs->tau_star));
        }
    }
}

void add_monotonic_checks(ReproduceReport& rep, const SweepIndex& idx) {
    struct Series {
        Metric metric;
        bool increasing;
        const char* name;
    };
    const Series series[] = {{Metric::fid_ewss, false, "fid_ewss_max_decreasing_in_J"},
                             {Metric::fid_tfs, false, "fid_tfs_max_decreasing_in_J"},
                             {Metric::var_z_max, true, "sigma_max_increasing_in_J"}};
    for (const auto& s : series) {
        std::vector<double> values;
        for (double j : rep.options.j_list) {
            if (const auto* r = idx.find(j, s.metric)) values.push_back(r->value_star);
        }
        if (values.size() < 2) continue;
        int violations = 0;
        for (std::size_t i = 1; i < values.size(); ++i) {
            const bool good = s.increasing ? values[i] > values[i - 1] : values[i] < values[i - 1];
            if (!good) ++violations;
        }
        Check c{s.name, static_cast<double>(violations), 0.0, 0.0, violations == 0, "number of non-monotone steps"};
        rep.checks.push_back(c);
    }
}

void add_fit_checks(ReproduceReport& rep) {
    struct Target {
        std::size_t law;
        int param;
        double tol;
        bool relative;
    };
    // Coefficient checks at desk-scale J: prefactors of the variance laws and
    // the log-argument coefficient of the twin-Fock time law.
    const Target targets[] = {{2, 0, 0.10, true}, {3, 0, 0.03, true}, {3, 2, 0.05, false},
                              {4, 0, 0.03, true}, {4, 2, 0.05, false}, {6, 0, 0.10, true}};
    const char* names = "abc";
    for (const auto& t : targets) {
        const auto& lf = rep.fits[t.law];
        const std::string name = std::string(lf.law.label) + "." + names[t.param];
        const double ref = lf.law.params[t.param];
        if (!lf.result || !lf.result->converged) {
            Check c{name, std::nan(""), ref, t.tol, false, "fit did not converge"};
            rep.checks.push_back(c);
            continue;
        }
        const double v = lf.result->model.params(t.param);
        rep.checks.push_back(t.relative ? relative_check(name, v, ref, t.tol) : absolute_check(name, v, ref, t.tol));
    }
    for (const auto& lf : rep.fits) {
        Check c{std::string(lf.law.label) + ".converged", lf.result && lf.result->converged ? 1.0 : 0.0, 1.0, 0.0, false, {}};
        c.passed = c.value == 1.0;
        c.note = lf.result ? std::string(to_string(lf.result->status)) : lf.error;
        rep.checks.push_back(c);
    }
}

} // namespace

ReproduceReport reproduce(const ReproduceOptions& options, const PropagatorConfig& cfg) {
    validate_j_list(options.j_list);
    cfg.validate();
    ReproduceReport rep;
    rep.options = options;

    rep.sweep = scaling_sweep(options.j_list, kAllMetrics, cfg, options.sweep);
    for (const auto& r : rep.sweep) {
        if (!r.ok) rep.errors.push_back({"sweep", "J=" + j_label(r.j) + " " + std::string(to_string(r.metric)) + ": " + r.error});
    }
    const SweepIndex idx(rep.sweep);

    for (double j : options.j_list) {
        const auto* ewss = idx.find(j, Metric::fid_ewss);
        const auto* tfs = idx.find(j, Metric::fid_tfs);
        if (!ewss || !tfs) continue;
        try {
            const Spin spin = Spin::from_value(j);
            SigmaRow row{j};
            row.at_tau_ewss = std::sqrt(spin_moments(make_sss(spin, ewss->tau_star, TwistProtocol{}, cfg)).variance_z);
            row.at_tau_tfs = std::sqrt(spin_moments(make_sss(spin, tfs->tau_star, TwistProtocol{}, cfg)).variance_z);
            rep.sigma.push_back(row);
        } catch (const std::exception& e) {
            rep.errors.push_back({"sigma", "J=" + j_label(j) + ": " + e.what()});
        }
    }

    for (const auto& law : reference_laws()) {
        LawFit lf{law, {}, {}, std::nullopt, {}};
        for (double j : options.j_list) {
            if (j < options.fit_j_min) continue;
            if (const auto y = quantity_at(law.quantity, j, idx, rep.sigma)) {
                lf.js.push_back(j);
                lf.ys.push_back(*y);
            }
        }
        try {
            if (lf.js.size() < static_cast<std::size_t>(parameter_count(law.family) + 1)) {
                throw InvalidArgument("needs at least " + std::to_string(parameter_count(law.family) + 1) +
                                      " points with J >= " + j_label(options.fit_j_min) + ", have " +
                                      std::to_string(lf.js.size()));
            }
            lf.result = fit(law.family, lf.js, lf.ys);
        } catch (const std::exception& e) {
            lf.error = e.what();
            rep.errors.push_back({"fit", std::string(law.label) + ": " + e.what()});
        }
        rep.fits.push_back(std::move(lf));
    }

    add_point_checks(rep, idx);
    add_monotonic_checks(rep, idx);
    add_fit_checks(rep);
    return rep;
}

namespace {

std::string report_csv(const ReproduceReport& rep) {
    std::string out = "label,family,quantity,param,fitted,std_error,reference,rel_dev,j_min,j_max,n_points,status\n";
    const char* names = "abc";
    for (const auto& lf : rep.fits) {
        const int np = parameter_count(lf.law.family);
        for (int k = 0; k < np; ++k) {
            const double ref = lf.law.params[k];
            double v = std::nan(""), se = std::nan("");
            std::string status = "error";
            if (lf.result) {
                v = lf.result->model.params(k);
                se = lf.result->param_se(k);
                status = std::string(to_string(lf.result->status));
            }
            const double rel = v / ref - 1.0;
            out += std::string(lf.law.label) + "," + std::string(to_string(lf.law.family)) + "," +
                   std::string(to_string(lf.law.quantity)) + "," + names[k] + "," + io::format_double(v) + "," +
                   io::format_double(se) + "," + io::format_double(ref) + "," + io::format_double(rel) + "," +
                   (lf.js.empty() ? "nan" : io::format_double(lf.js.front())) + "," +
                   (lf.js.empty() ? "nan" : io::format_double(lf.js.back())) + "," + std::to_string(lf.js.size()) +
                   "," + status + "\n";
        }
    }
    return out;
}

std::string checks_csv(const ReproduceReport& rep) {
    std::string out = "name,value,target,tolerance,status,rule\n";
    for (const auto& c : rep.checks) {
        out += c.name + "," + io::format_double(c.value) + "," + io::format_double(c.target) + "," +
               io::format_double(c.tolerance) + "," + (c.passed ? "pass" : "fail") + "," + c.note + "\n";
    }
    return out;
}

std::string sigma_csv(const ReproduceReport& rep) {
    std::string out = "j,sigma_at_tau_ewss,sigma_at_tau_tfs\n";
    for (const auto& s : rep.sigma) {
        out += io::format_double(s.j) + "," + io::format_double(s.at_tau_ewss) + "," + io::format_double(s.at_tau_tfs) + "\n";
    }
    return out;
}

io::Json fits_json(const ReproduceReport& rep) {
    io::Json arr = io::Json::array();
    for (const auto& lf : rep.fits) {
        io::Json e;
        e["label"] = lf.law.label;
        e["family"] = to_string(lf.law.family);
        e["quantity"] = to_string(lf.law.quantity);
        e["reference_params"] = std::vector<double>(lf.law.params.begin(), lf.law.params.begin() + parameter_count(lf.law.family));
        e["j"] = lf.js;
        e["y"] = lf.ys;
        if (lf.result) e["result"] = io::to_json(*lf.result);
        if (!lf.error.empty()) e["error"] = lf.error;
        arr.push_back(std::move(e));
    }
    return arr;
}

} // namespace

std::string format_report(const ReproduceReport& rep) {
    std::ostringstream os;
    os << "J list:";
    for (double j : rep.options.j_list) os << ' ' << j_label(j);
    os << "\nfits use J >= " << j_label(rep.options.fit_j_min) << "\n\n";

    char line[256];
    std::snprintf(line, sizeof line, "%-7s %-16s %-18s %5s %12s %10s %10s %9s\n", "law", "family", "quantity", "param",
                  "fitted", "std_err", "reference", "rel_dev");
    os << line;
    const char* names = "abc";
    for (const auto& lf : rep.fits) {
        for (int k = 0; k < parameter_count(lf.law.family); ++k) {
            const double ref = lf.law.params[k];
            if (lf.result) {
                const double v = lf.result->model.params(k);
                std::snprintf(line, sizeof line, "%-7s %-16s %-18s %5c %12.6g %10.3g %10.4g %+8.2f%%\n",
                              std::string(lf.law.label).c_str(), std::string(to_string(lf.law.family)).c_str(),
                              std::string(to_string(lf.law.quantity)).c_str(), names[k], v, lf.result->param_se(k), ref,
                              100.0 * (v / ref - 1.0));
            } else {
                std::snprintf(line, sizeof line, "%-7s %-16s %-18s %5c %12s %10s %10.4g %9s\n",
                              std::string(lf.law.label).c_str(), std::string(to_string(lf.law.family)).c_str(),
                              std::string(to_string(lf.law.quantity)).c_str(), names[k], "failed", "-", ref, "-");
            }
            os << line;
        }
    }

    os << "\nchecks:\n";
    for (const auto& c : rep.checks) {
        std::snprintf(line, sizeof line, "  %-4s %-40s value=%-14.8g target=%-12.6g tol=%g\n", c.passed ? "PASS" : "FAIL",
                      c.name.c_str(), c.value, c.target, c.tolerance);
        os << line;
    }
    if (!rep.observations.empty()) {
        os << "\nrecorded (not asserted):\n";
        for (const auto& o : rep.observations) os << "  " << o << "\n";
    }
    if (!rep.errors.empty()) {
        os << "\nstage errors:\n";
        for (const auto& e : rep.errors) os << "  [" << e.stage << "] " << e.message << "\n";
    }
    const auto failed = std::count_if(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return !c.passed; });
    os << "\n" << (rep.ok() ? "ALL CHECKS PASSED" : "FAILED") << ": " << rep.checks.size() - failed << "/"
       << rep.checks.size() << " checks passed, " << rep.errors.size() << " stage errors\n";
    return os.str();
}

void write_report(const ReproduceReport& rep, const std::filesystem::path& dir) {
    io::write_text(dir / "sweep.csv", io::sweep_csv(rep.sweep));
    io::write_json(dir / "sweep.json", io::to_json(rep.sweep));
    io::write_text(dir / "sigma.csv", sigma_csv(rep));
    io::write_json(dir / "fits.json", fits_json(rep));
    io::write_text(dir / "report.csv", report_csv(rep));
    io::write_text(dir / "checks.csv", checks_csv(rep));
    io::write_text(dir / "report.txt", format_report(rep));
}

} // namespace tact
