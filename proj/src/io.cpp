// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <tact/io.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tact::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

// Non-finite doubles are stored as strings since JSON has no representation.
Json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

double number_from(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw InvalidArgument("expected a number in JSON, got " + j.dump());
}

double parse_double(const std::string& cell) {
    if (cell == "inf") return std::numeric_limits<double>::infinity();
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw InvalidArgument("malformed number '" + cell + "'");
    return v;
}

Json vector_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
    return a;
}

Eigen::VectorXd vector_from(const Json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from(a[i]);
    return v;
}

} // namespace

Json to_json(const SpinState& s) {
    Json amps = Json::array();
    for (Eigen::Index k = 0; k < s.amplitudes().size(); ++k) {
        amps.push_back({s.amplitudes()(k).real(), s.amplitudes()(k).imag()});
    }
    return Json{{"j", s.spin().value()}, {"amplitudes", amps}};
}

SpinState state_from_json(const Json& j) {
    if (!j.contains("j") || !j.contains("amplitudes")) throw InvalidArgument("state JSON needs 'j' and 'amplitudes'");
    const Spin spin = Spin::from_value(j.at("j").get<double>());
    const auto& amps = j.at("amplitudes");
    ComplexVector<double> v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t k = 0; k < amps.size(); ++k) {
        if (!amps[k].is_array() || amps[k].size() != 2) throw InvalidArgument("amplitude entries must be [re, im]");
        v(static_cast<Eigen::Index>(k)) = {amps[k][0].get<double>(), amps[k][1].get<double>()};
    }
    const bool real = v.imag().isZero(0.0);
    return SpinState(spin, std::move(v), real);
}

std::string prob_distribution_csv(const SpinState& s) {
    const auto p = prob_distribution(s);
    std::string out = "M,P\n";
    for (int k = 0; k < s.dim(); ++k) {
        out += format_double(s.spin().m_at(k)) + "," + format_double(p(k)) + "\n";
    }
    return out;
}

std::string to_csv(const QpdGrid& g) {
    std::string out = "phi,theta,value\n";
    for (int i = 0; i < g.n_phi; ++i) {
        for (int k = 0; k < g.n_theta; ++k) {
            out += format_double(g.phi(i)) + "," + format_double(g.theta(k)) + "," + format_double(g.values(i, k)) + "\n";
        }
    }
    return out;
}

Json to_json(const QpdGrid& g, const std::string& description) {
    Json rows = Json::array();
    for (int i = 0; i < g.n_phi; ++i) {
        Json row = Json::array();
        for (int k = 0; k < g.n_theta; ++k) row.push_back(g.values(i, k));
        rows.push_back(std::move(row));
    }
    return Json{{"j", g.j},
                {"n_phi", g.n_phi},
                {"n_theta", g.n_theta},
                {"phi", {{"start", 0.0}, {"step", 2 * M_PI / g.n_phi}, {"endpoint_included", false}}},
                {"theta", {{"start", 0.0}, {"step", M_PI / (g.n_theta - 1)}, {"endpoint_included", true}}},
                {"layout", "values[i_phi][i_theta]"},
                {"description", description},
                {"values", rows}};
}

QpdGrid qpd_from_json(const Json& j) {
    QpdGrid g;
    g.j = j.at("j").get<double>();
    g.n_phi = j.at("n_phi").get<int>();
    g.n_theta = j.at("n_theta").get<int>();
    const auto& rows = j.at("values");
    if (static_cast<int>(rows.size()) != g.n_phi) throw InvalidArgument("QPD JSON: row count mismatch");
    g.values.resize(g.n_phi, g.n_theta);
    for (int i = 0; i < g.n_phi; ++i) {
        if (static_cast<int>(rows[i].size()) != g.n_theta) throw InvalidArgument("QPD JSON: column count mismatch");
        for (int k = 0; k < g.n_theta; ++k) g.values(i, k) = rows[i][k].get<double>();
    }
    g.validate();
    return g;
}

Json to_json(const ScanSpec& s) {
    const auto& p = s.protocol;
    return Json{{"j", s.j.value()},
                {"metric", std::string(to_string(s.metric))},
                {"tau_min", s.tau_min},
                {"tau_max", s.tau_max},
                {"n_grid", s.n_grid},
                {"refine_tol", s.refine_tol},
                {"protocol",
                 {{"chi", p.chi},
                  {"gamma", p.gamma},
                  {"rotation_axis", {p.rotation_axis.x(), p.rotation_axis.y(), p.rotation_axis.z()}},
                  {"rotation_angle", p.rotation_angle}}}};
}

ScanSpec scan_spec_from_json(const Json& j) {
    ScanSpec s{Spin::from_value(j.at("j").get<double>()), parse_metric(j.at("metric").get<std::string>())};
    s.tau_min = j.at("tau_min").get<double>();
    s.tau_max = j.at("tau_max").get<double>();
    s.n_grid = j.at("n_grid").get<int>();
    s.refine_tol = j.at("refine_tol").get<double>();
    if (j.contains("protocol")) {
        const auto& p = j.at("protocol");
        s.protocol.chi = p.at("chi").get<double>();
        s.protocol.gamma = p.at("gamma").get<double>();
        const auto& ax = p.at("rotation_axis");
        s.protocol.rotation_axis = {ax[0].get<double>(), ax[1].get<double>(), ax[2].get<double>()};
        s.protocol.rotation_angle = p.at("rotation_angle").get<double>();
    }
    s.validate();
    return s;
}

Json to_json(const ScanResult& r) {
    return Json{{"spec", to_json(r.spec)},
                {"tau_star", r.tau_star},
                {"value_star", r.value_star},
                {"evaluations", r.evaluations},
                {"grid_taus", r.grid_taus},
                {"grid_values", r.grid_values}};
}

ScanResult scan_result_from_json(const Json& j) {
    ScanResult r;
    r.spec = scan_spec_from_json(j.at("spec"));
    r.tau_star = j.at("tau_star").get<double>();
    r.value_star = j.at("value_star").get<double>();
    r.evaluations = j.value("evaluations", 0);
    r.grid_taus = j.at("grid_taus").get<std::vector<double>>();
    r.grid_values = j.at("grid_values").get<std::vector<double>>();
    if (r.grid_taus.size() != r.grid_values.size()) throw InvalidArgument("scan JSON: trace length mismatch");
    if (!(r.tau_star >= r.spec.tau_min && r.tau_star <= r.spec.tau_max)) {
        throw InvalidArgument("scan JSON: tau_star outside the scan window");
    }
    return r;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "j,metric,tau_star,value_star,grid_size,tol,status,error\n";
    for (const auto& r : rows) {
        std::string err = r.error;
        for (char& c : err) {
            if (c == ',' || c == '\n') c = ';';
        }
        out += format_double(r.j) + "," + std::string(to_string(r.metric)) + "," +
               (r.ok ? format_double(r.tau_star) : "nan") + "," + (r.ok ? format_double(r.value_star) : "nan") + "," +
               std::to_string(r.grid_size) + "," + format_double(r.tol) + "," + (r.ok ? "ok" : "failed") + "," + err +
               "\n";
    }
    return out;
}

Json to_json(const std::vector<SweepRow>& rows) {
    Json a = Json::array();
    for (const auto& r : rows) {
        Json row{{"j", r.j},
                 {"metric", std::string(to_string(r.metric))},
                 {"tau_star", number(r.ok ? r.tau_star : std::nan(""))},
                 {"value_star", number(r.ok ? r.value_star : std::nan(""))},
                 {"grid_size", r.grid_size},
                 {"tol", r.tol},
                 {"status", r.ok ? "ok" : "failed"},
                 {"error", r.error}};
        if (r.result) row["trace"] = to_json(*r.result);
        a.push_back(std::move(row));
    }
    return Json{{"rows", a}};
}

std::vector<SweepRow> sweep_from_json(const Json& j) {
    std::vector<SweepRow> rows;
    for (const auto& e : j.at("rows")) {
        SweepRow r;
        r.j = e.at("j").get<double>();
        r.metric = parse_metric(e.at("metric").get<std::string>());
        r.tau_star = number_from(e.at("tau_star"));
        r.value_star = number_from(e.at("value_star"));
        r.grid_size = e.at("grid_size").get<int>();
        r.tol = e.at("tol").get<double>();
        r.ok = e.at("status").get<std::string>() == "ok";
        r.error = e.value("error", "");
        if (e.contains("trace")) r.result = scan_result_from_json(e.at("trace"));
        rows.push_back(std::move(r));
    }
    return rows;
}

Json to_json(const FitResult& f) {
    return Json{{"family", std::string(to_string(f.model.family))},
                {"params", vector_json(f.model.params)},
                {"param_se", vector_json(f.param_se)},
                {"rss", number(f.rss)},
                {"n_points", f.n_points},
                {"iterations", f.iterations},
                {"converged", f.converged},
                {"status", std::string(to_string(f.status))},
                {"gradient_cosine", number(f.gradient_cosine)}};
}

FitResult fit_result_from_json(const Json& j) {
    FitResult f;
    f.model.family = parse_fit_family(j.at("family").get<std::string>());
    f.model.params = vector_from(j.at("params"));
    if (f.model.params.size() != parameter_count(f.model.family)) throw InvalidArgument("fit JSON: parameter count");
    f.param_se = vector_from(j.at("param_se"));
    f.rss = number_from(j.at("rss"));
    if (!(f.rss >= 0.0)) throw InvalidArgument("fit JSON: rss must be non-negative");
    f.n_points = j.at("n_points").get<int>();
    f.iterations = j.at("iterations").get<int>();
    f.converged = j.at("converged").get<bool>();
    const auto status = j.at("status").get<std::string>();
    for (auto s : {FitStatus::converged, FitStatus::max_iterations, FitStatus::rank_deficient, FitStatus::stalled}) {
        if (status == to_string(s)) f.status = s;
    }
    f.gradient_cosine = number_from(j.at("gradient_cosine"));
    return f;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    auto split = [](const std::string& l) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(l);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!l.empty() && l.back() == ',') cells.emplace_back();
        return cells;
    };
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            t.header = split(line);
            first = false;
        } else {
            t.rows.push_back(split(line));
        }
    }
    if (first) throw InvalidArgument("CSV input is empty");
    return t;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

std::vector<SweepRow> sweep_from_csv(const CsvTable& table) {
    const int cj = table.column("j"), cm = table.column("metric"), ct = table.column("tau_star"),
              cv = table.column("value_star"), cg = table.column("grid_size"), ctol = table.column("tol"),
              cs = table.column("status"), ce = table.column("error");
    if (cj < 0 || cm < 0 || ct < 0 || cv < 0 || cs < 0) throw InvalidArgument("not a sweep table (missing columns)");
    std::vector<SweepRow> rows;
    for (const auto& cells : table.rows) {
        auto cell = [&](int c) { return c >= 0 && c < static_cast<int>(cells.size()) ? cells[c] : std::string(); };
        SweepRow r;
        r.j = parse_double(cell(cj));
        r.metric = parse_metric(cell(cm));
        r.tau_star = parse_double(cell(ct));
        r.value_star = parse_double(cell(cv));
        r.grid_size = cg >= 0 ? std::stoi(cell(cg)) : 0;
        r.tol = ctol >= 0 ? parse_double(cell(ctol)) : 0.0;
        r.ok = cell(cs) == "ok";
        r.error = cell(ce);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

Json read_json(const std::filesystem::path& path) { return Json::parse(read_text(path)); }

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

} // namespace tact::io
