#include "multibubble/cli.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "multibubble/homology.hpp"
#include "multibubble/optimizer.hpp"
#include "multibubble/rng.hpp"

namespace multibubble::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string fmt9(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

bool all_primitive(const Json& a) {
    for (const auto& e : a)
        if (e.is_structured()) return false;
    return true;
}

void render(const Json& j, std::string& s, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string closing(2 * depth, ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                s += "{}";
                return;
            }
            s += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) s += ",\n";
                first = false;
                s += pad;
                s += quoted(it.key());
                s += ": ";
                render(it.value(), s, depth + 1);
            }
            s += "\n";
            s += closing;
            s += "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                s += "[]";
                return;
            }
            if (all_primitive(j)) {
                s += "[";
                bool first = true;
                for (const auto& e : j) {
                    if (!first) s += ", ";
                    first = false;
                    render(e, s, depth);
                }
                s += "]";
                return;
            }
            s += "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) s += ",\n";
                first = false;
                s += pad;
                render(e, s, depth + 1);
            }
            s += "\n";
            s += closing;
            s += "]";
            return;
        }
        case nlohmann::json::value_t::string:
            s += quoted(j.get<std::string>());
            return;
        case nlohmann::json::value_t::boolean:
            s += j.get<bool>() ? "true" : "false";
            return;
        case nlohmann::json::value_t::number_integer:
            s += std::to_string(j.get<std::int64_t>());
            return;
        case nlohmann::json::value_t::number_unsigned:
            s += std::to_string(j.get<std::uint64_t>());
            return;
        case nlohmann::json::value_t::number_float:
            s += fmt9(j.get<double>());
            return;
        default:
            s += "null";
            return;
    }
}

std::string literal(const Json& j) {
    if (j.is_number_float()) return fmt9(j.get<double>());
    std::string s;
    render(j, s, 0);
    return s;
}

std::string csv_field(const std::string& f) {
    if (f.find_first_of(",\"\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char ch : f) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

// Reads one CSV field starting at pos; advances pos past the field and any
// trailing comma.
std::string read_field(const std::string& line, std::size_t& pos) {
    std::string out;
    if (pos < line.size() && line[pos] == '"') {
        ++pos;
        while (pos < line.size()) {
            if (line[pos] == '"') {
                if (pos + 1 < line.size() && line[pos + 1] == '"') {
                    out += '"';
                    pos += 2;
                } else {
                    ++pos;
                    break;
                }
            } else {
                out += line[pos++];
            }
        }
    } else {
        while (pos < line.size() && line[pos] != ',') out += line[pos++];
    }
    if (pos < line.size() && line[pos] == ',') ++pos;
    return out;
}

std::string timestamp_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json vec_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Json mat_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
    return rows;
}

struct Common {
    std::uint64_t seed = 42;
    std::int64_t mc_samples = 1'000'000;
    double quad_tol = 1e-11;
    std::string format = "json";
    std::string out_path;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "RNG seed (env MULTIBUBBLE_SEED overrides)");
    cmd->add_option("--mc-samples", c.mc_samples, "Monte Carlo sample count");
    cmd->add_option("--quad-tol", c.quad_tol, "quadrature absolute tolerance");
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", c.out_path, "write the report to this file instead of stdout");
}

int emit(Json doc, const Common& c, std::ostream& out, std::ostream& err) {
    doc["timestamp"] = timestamp_now();
    std::string text = (c.format == "csv") ? render_csv(doc) : render_json(doc);
    if (!c.out_path.empty()) {
        std::ofstream f(c.out_path);
        if (!f) {
            err << "cannot open output file " << c.out_path << "\n";
            return 2;
        }
        f << text;
        return 0;
    }
    out << text;
    return 0;
}

// Comma-separated decimals summing to 1 within 1e-6; returns the exactly
// renormalized vector.
Eigen::VectorXd parse_measures(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        double x = 0.0;
        try {
            x = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw SchemaError("cannot parse measure entry '" + tok + "'");
        }
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size())
            throw SchemaError("cannot parse measure entry '" + tok + "'");
        vals.push_back(x);
    }
    if (vals.size() < 2) throw SchemaError("need at least two comma-separated measures");
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
    double sum = v.sum();
    if (std::abs(sum - 1.0) > 1e-6)
        throw SchemaError("measures must sum to 1 within 1e-6 (got " + fmt9(sum) + ")");
    return v / sum;
}

int cmd_profile(const std::string& v_text, const Common& c, std::ostream& out,
                std::ostream& err) {
    MeasureVector v(parse_measures(v_text));
    if (!v.strictly_interior(0.0))
        throw DomainError("profile needs a strictly interior measure vector");
    QuadratureSpec quad;
    quad.abs_tol = c.quad_tol;
    ProfileReport rep = model_profile(v, quad);
    Json doc;
    doc["q"] = v.q();
    doc["v"] = vec_json(v.v);
    doc["x"] = vec_json(rep.x.coords);
    doc["value"] = rep.value;
    doc["gradient"] = vec_json(rep.gradient);
    doc["hessian"] = mat_json(rep.hessian.m);
    doc["areas"] = mat_json(rep.areas.a);
    doc["trace_residual"] = rep.trace_residual;
    doc["newton_iterations"] = rep.newton_iterations;
    return emit(std::move(doc), c, out, err);
}

struct CheckRow {
    std::string name;
    double residual;
    double threshold;
    bool pass;
};

Eigen::VectorXd random_interior_v(NormalStream& rng, int q, std::int64_t base) {
    Eigen::VectorXd v(q);
    for (int i = 0; i < q; ++i) v[i] = 0.1 + rng.uniform(base + i);
    return v / v.sum();
}

SimplexShift random_shift(NormalStream& rng, int q, std::int64_t base) {
    Eigen::VectorXd x(q);
    for (int i = 0; i < q; ++i) x[i] = 0.8 * rng.normal(base + i);
    return project_to_E(x);
}

// Barycenter profile values (closed forms through bivariate/trivariate
// orthant probabilities, cross-checked by independent quadrature).
double barycenter_value(int q) {
    switch (q) {
        case 2: return 0.398942280401433;
        case 3: return 0.598413420602149;
        case 4: return 0.727878306637535;
        case 5: return 0.822340065590255;
        default: return 0.896050210751097;  // q = 6
    }
}

int cmd_check(int q, const Common& c, std::ostream& out, std::ostream& err) {
    if (q < 2 || q > 6) {
        err << "check supports q between 2 and 6\n";
        return 2;
    }
    QuadratureSpec quad;
    quad.abs_tol = c.quad_tol;
    McSpec mc;
    mc.sample_count = c.mc_samples;
    mc.seed = c.seed;
    NormalStream rng(c.seed, substream(0, 0x636865636bull));
    Eigen::MatrixXd O = e_basis(q);
    std::vector<CheckRow> rows;

    {  // finite differences of the measure map against its analytic differential
        double worst = 0.0;
        const double h = 1e-5;
        for (int t = 0; t < 3; ++t) {
            SimplexShift x = random_shift(rng, q, 1000 * t);
            EOperator d = dpsi(x, quad);
            double scale = std::max(1.0, d.m.cwiseAbs().maxCoeff());
            for (int k = 0; k < q - 1; ++k) {
                Eigen::VectorXd u = O.row(k).transpose();
                Eigen::VectorXd fp = psi(SimplexShift(x.coords + h * u), quad).v;
                Eigen::VectorXd fm = psi(SimplexShift(x.coords - h * u), quad).v;
                Eigen::VectorXd fd = (fp - fm) / (2.0 * h);
                worst = std::max(worst, (fd - d.m * u).cwiseAbs().maxCoeff() / scale);
            }
        }
        rows.push_back({"dpsi_fd", worst, 1e-5, worst <= 1e-5});
    }

    {  // finite differences of the value against the gradient x / sqrt(2)
        double worst = 0.0;
        const double h = 1e-4;
        for (int t = 0; t < 2; ++t) {
            MeasureVector v(random_interior_v(rng, q, 10000 + 1000 * t));
            ProfileReport rep = model_profile(v, quad);
            double scale = std::max(1.0, rep.gradient.cwiseAbs().maxCoeff());
            for (int k = 0; k < q - 1; ++k) {
                Eigen::VectorXd u = O.row(k).transpose();
                double fp = model_profile(MeasureVector(v.v + h * u), quad).value;
                double fm = model_profile(MeasureVector(v.v - h * u), quad).value;
                double fd = (fp - fm) / (2.0 * h);
                worst = std::max(worst, std::abs(fd - rep.gradient.dot(u)) / scale);
            }
        }
        rows.push_back({"gradient_fd", worst, 1e-5, worst <= 1e-5});
    }

    {  // finite differences of the gradient against the Hessian -pinv(L)
        double worst = 0.0;
        const double h = 1e-3;
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int t = 0; t < 2; ++t) {
            MeasureVector v(random_interior_v(rng, q, 20000 + 1000 * t));
            ProfileReport rep = model_profile(v, quad);
            double scale = std::max(1.0, rep.hessian.m.cwiseAbs().maxCoeff());
            for (int k = 0; k < q - 1; ++k) {
                Eigen::VectorXd u = O.row(k).transpose();
                Eigen::VectorXd gp =
                    invert_psi(MeasureVector(v.v + h * u), quad).x.coords * inv_sqrt2;
                Eigen::VectorXd gm =
                    invert_psi(MeasureVector(v.v - h * u), quad).x.coords * inv_sqrt2;
                Eigen::VectorXd col = (gp - gm) / (2.0 * h);
                worst = std::max(worst,
                                 (col - rep.hessian.m * u).cwiseAbs().maxCoeff() / scale);
            }
        }
        rows.push_back({"hessian_fd", worst, 1e-4, worst <= 1e-4});
    }

    {  // trace identity 2 I + tr_E[H^{-1}] = 0, relative to I
        double worst = 0.0;
        for (int t = 0; t < 6; ++t) {
            MeasureVector v(random_interior_v(rng, q, 30000 + 1000 * t));
            ProfileReport rep = model_profile(v, quad);
            worst = std::max(worst, rep.trace_residual / rep.value);
        }
        rows.push_back({"trace_identity", worst, 1e-6, worst <= 1e-6});
    }

    if (q >= 3) {  // value approaches the lower-dimensional profile as a cell closes
        MeasureVector sub(Eigen::VectorXd::Constant(q - 1, 1.0 / (q - 1)));
        FaceLimitReport f = face_limit_check(sub, {1e-2, 1e-3, 1e-4}, quad);
        bool ok = f.decreasing && f.gaps.back() <= 0.02;
        rows.push_back({"face_continuity", f.gaps.back(), 0.02, ok});
    }

    {  // barycenter value against the frozen orthant closed form
        MeasureVector v(Eigen::VectorXd::Constant(q, 1.0 / q));
        double val = model_profile(v, quad).value;
        double tol = (q == 2) ? 1e-8 : 1e-6;
        double res = std::abs(val - barycenter_value(q));
        rows.push_back({"closed_form", res, tol, res <= tol});
    }

    {  // Monte Carlo measures against quadrature, in standard-error units
        SimplexShift x = random_shift(rng, q, 50000);
        double worst_z = 0.0;
        double total = 0.0;
        for (int i = 0; i < q; ++i) {
            McEstimate est = mc_model_cell_measure(x, i, mc);
            double ref = model_cell_measure(x, i, quad);
            worst_z = std::max(worst_z,
                               std::abs(est.value - ref) / std::max(est.std_err, 1e-13));
            total += est.value;
        }
        rows.push_back({"mc_measures", worst_z, 4.5, worst_z <= 4.5});
        double part = std::abs(total - 1.0);
        rows.push_back({"mc_partition", part, 1e-12, part <= 1e-12});

        double worst_a = 0.0;
        for (int i = 0; i < q; ++i) {
            for (int j = i + 1; j < q; ++j) {
                McEstimate est = mc_model_interface_area(x, i, j, mc);
                double ref = model_interface_area(x, i, j, quad);
                worst_a = std::max(worst_a,
                                   std::abs(est.value - ref) / std::max(est.std_err, 1e-13));
            }
        }
        rows.push_back({"mc_areas", worst_a, 4.5, worst_a <= 4.5});
    }

    bool all_pass = true;
    Json checks = Json::array();
    for (const auto& r : rows) {
        all_pass = all_pass && r.pass;
        Json row;
        row["name"] = r.name;
        row["residual"] = r.residual;
        row["threshold"] = r.threshold;
        row["pass"] = r.pass;
        checks.push_back(std::move(row));
    }
    Json doc;
    doc["q"] = q;
    doc["seed"] = c.seed;
    doc["checks"] = std::move(checks);
    doc["all_pass"] = all_pass;
    int rc = emit(std::move(doc), c, out, err);
    if (rc != 0) return rc;
    return all_pass ? 0 : 1;
}

std::string history_path(const std::string& out_path) {
    std::string base = out_path;
    const std::string ext = ".json";
    if (base.size() > ext.size() && base.compare(base.size() - ext.size(), ext.size(), ext) == 0)
        base.resize(base.size() - ext.size());
    return base + "_history.csv";
}

int cmd_optimize(int q, int n, const std::string& v_text, int starts, const Common& c,
                 std::ostream& out, std::ostream& err) {
    if (q < 2 || n < 1) {
        err << "optimize needs q >= 2 and n >= 1\n";
        return 2;
    }
    if (q > n + 1) {
        err << "refused: " << q << " cells in dimension " << n
            << " fall outside the supported range q <= n + 1\n";
        return 2;
    }
    if (q > 4) {
        err << "optimize supports q <= 4 (deterministic evaluation path)\n";
        return 2;
    }
    Eigen::VectorXd raw = parse_measures(v_text);
    if (static_cast<int>(raw.size()) != q) {
        err << "--v must list exactly q = " << q << " measures\n";
        return 2;
    }
    MeasureVector v(raw);
    OptProblem p(q, n, v);
    p.seed = c.seed;
    if (starts >= 1) p.starts = starts;
    p.mc.sample_count = c.mc_samples;
    p.mc.seed = c.seed;
    OptResult res = minimize_perimeter(p);
    ModelComparison cmp = compare_to_model(res.cluster, v, c.quad_tol);
    IncidenceComplex s = build_complex(res.cluster, p.mc);
    HomologyRanks ranks = homology_ranks(s);
    PbTables tables = pb_evaluate_quadrature(res.cluster, c.quad_tol);

    Json doc;
    doc["q"] = q;
    doc["n"] = n;
    doc["v"] = vec_json(v.v);
    doc["perimeter"] = res.perimeter;
    doc["profile_value"] = res.profile_value;
    doc["profile_gap"] = res.profile_gap;
    doc["measure_error"] = res.measure_error;
    doc["isometry_defect"] = res.isometry_defect;
    Json mcj;
    mcj["value"] = res.mc_perimeter.value;
    mcj["std_err"] = res.mc_perimeter.std_err;
    doc["mc_perimeter"] = std::move(mcj);
    doc["measures"] = vec_json(tables.measures);
    doc["areas"] = mat_json(tables.areas.a);
    doc["max_area_deviation"] = cmp.max_area_deviation;
    doc["all_interfaces_positive"] = cmp.all_interfaces_positive;
    Json cx;
    cx["vertices"] = static_cast<int>(s.vertices.size());
    cx["edges"] = static_cast<int>(s.edges.size());
    cx["triangles"] = static_cast<int>(s.triangles.size());
    cx["b0"] = ranks.b0;
    cx["b1"] = ranks.b1;
    doc["complex"] = std::move(cx);
    doc["converged"] = res.converged;
    doc["starts_used"] = res.starts_used;
    Json hist = Json::array();
    for (const auto& h : res.history) {
        Json row;
        row["iteration"] = h.iteration;
        row["objective"] = h.objective;
        row["feasibility"] = h.feasibility;
        row["perimeter"] = h.perimeter;
        hist.push_back(std::move(row));
    }
    doc["history"] = std::move(hist);

    if (!c.out_path.empty()) {
        std::ofstream f(history_path(c.out_path));
        if (!f) {
            err << "cannot open history file " << history_path(c.out_path) << "\n";
            return 2;
        }
        f << "iteration,objective,feasibility,perimeter\n";
        for (const auto& h : res.history)
            f << h.iteration << "," << fmt9(h.objective) << "," << fmt9(h.feasibility)
              << "," << fmt9(h.perimeter) << "\n";
    }
    return emit(std::move(doc), c, out, err);
}

int cmd_homology(const std::string& path, const Common& c, std::ostream& out,
                 std::ostream& err) {
    std::ifstream f(path);
    if (!f) {
        err << "cannot open " << path << "\n";
        return 2;
    }
    Json doc = Json::parse(f);
    if (!doc.is_object() || !doc.contains("q") || !doc["q"].is_number_integer())
        throw SchemaError("expected a JSON object with an integer field \"q\"");
    int q = doc["q"].get<int>();
    if (q < 2) throw SchemaError("q must be at least 2");
    auto cell_index = [q](const Json& j) {
        if (!j.is_number_integer()) throw SchemaError("cell indices must be integers");
        int v = j.get<int>();
        if (v < 1 || v > q) throw SchemaError("cell indices must lie in 1..q");
        return v - 1;
    };
    std::vector<std::pair<int, int>> edges;
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) throw SchemaError("\"edges\" must be an array");
        for (const auto& e : doc["edges"]) {
            if (!e.is_array() || e.size() != 2)
                throw SchemaError("each edge must be a pair [i, j]");
            int i = cell_index(e[0]), j = cell_index(e[1]);
            if (i == j) throw SchemaError("edge endpoints must differ");
            edges.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    std::vector<std::array<int, 3>> triangles;
    if (doc.contains("triangles")) {
        if (!doc["triangles"].is_array()) throw SchemaError("\"triangles\" must be an array");
        for (const auto& t : doc["triangles"]) {
            if (!t.is_array() || t.size() != 3)
                throw SchemaError("each triangle must be a triple [i, j, k]");
            std::array<int, 3> tri{cell_index(t[0]), cell_index(t[1]), cell_index(t[2])};
            std::sort(tri.begin(), tri.end());
            if (tri[0] == tri[1] || tri[1] == tri[2])
                throw SchemaError("triangle cells must be distinct");
            triangles.push_back(tri);
        }
    }
    std::vector<int> vertices(q);
    for (int i = 0; i < q; ++i) vertices[i] = i;
    IncidenceComplex s = make_complex(q, std::move(vertices), std::move(edges),
                                      std::move(triangles));
    HomologyRanks ranks = homology_ranks(s);
    Json outdoc;
    outdoc["q"] = q;
    outdoc["b0"] = ranks.b0;
    outdoc["b1"] = ranks.b1;
    return emit(std::move(outdoc), c, out, err);
}

}  // namespace

std::string render_json(const nlohmann::ordered_json& doc) {
    std::string s;
    render(doc, s, 0);
    s += "\n";
    return s;
}

std::string render_csv(const nlohmann::ordered_json& doc) {
    Json flat = doc.flatten();
    std::string s = "key,value\n";
    for (const auto& [k, v] : flat.items())
        s += csv_field(k) + "," + csv_field(literal(v)) + "\n";
    return s;
}

nlohmann::ordered_json parse_csv(const std::string& text) {
    Json flat = Json::object();
    std::stringstream ss(text);
    std::string line;
    bool header = true;
    while (std::getline(ss, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::size_t pos = 0;
        std::string key = read_field(line, pos);
        std::string value = read_field(line, pos);
        flat[key] = Json::parse(value);
    }
    return flat.unflatten();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian multi-bubble clusters: profile, checks, optimization, homology"};
    app.require_subcommand(1);

    Common c;
    std::string v_text, input_path;
    int q = 3, n = 2, starts = 5;

    CLI::App* prof = app.add_subcommand(
        "profile", "evaluate the multi-cell isoperimetric profile at a measure vector");
    prof->add_option("--v", v_text, "comma-separated cell measures summing to 1")->required();
    add_common(prof, c);

    CLI::App* check =
        app.add_subcommand("check", "run the identity battery for a given cell count");
    check->add_option("--q", q, "number of cells (2..6)")->required();
    add_common(check, c);

    CLI::App* opt =
        app.add_subcommand("optimize", "minimize cluster perimeter at prescribed measures");
    opt->add_option("--q", q, "number of cells")->required();
    opt->add_option("--n", n, "ambient dimension")->required();
    opt->add_option("--v", v_text, "comma-separated cell measures summing to 1")->required();
    opt->add_option("--starts", starts, "multi-start count");
    add_common(opt, c);

    CLI::App* hom =
        app.add_subcommand("homology", "Betti numbers of an incidence complex from JSON");
    hom->add_option("input", input_path, "path to the complex JSON file")->required();
    add_common(hom, c);

    std::vector<const char*> argv;
    argv.push_back("multibubble");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    if (const char* env = std::getenv("MULTIBUBBLE_SEED")) {
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') {
            err << "MULTIBUBBLE_SEED must be an unsigned integer\n";
            return 2;
        }
        c.seed = parsed;
    }

    try {
        if (prof->parsed()) return cmd_profile(v_text, c, out, err);
        if (check->parsed()) return cmd_check(q, c, out, err);
        if (opt->parsed()) return cmd_optimize(q, n, v_text, starts, c, out, err);
        if (hom->parsed()) return cmd_homology(input_path, c, out, err);
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidDimensionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnderdeterminedError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateClusterError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace multibubble::cli
