#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace kahler::cli {

using json = nlohmann::json;

namespace {

const std::vector<std::string> kTopLevelKeys = {
    "immersion", "domain", "resolution", "fields", "tolerances", "guard", "fd_step", "strict_tolerance",
    "min_order", "residual_floor", "samples", "variant", "checks", "tube", "output"};

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

double positive(const json& j, const std::string& path) {
    const double v = number(j, path);
    if (!(v > 0.0)) throw ConfigError(path, "must be positive");
    return v;
}

long long integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<long long>();
}

std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [k, v] : j.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; }))
            throw ConfigError(path.empty() ? k : path + "." + k, "unknown key");
    }
}

std::array<double, 4> vec4(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) throw ConfigError(path, "expected an array of 4 numbers");
    std::array<double, 4> v{};
    for (std::size_t i = 0; i < 4; ++i) v[i] = number(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

ImmersionSpec parse_immersion(const json& j) {
    only_keys(j, "immersion", {"catalog", "params", "polynomial", "degree_cap"});
    const bool has_cat = j.contains("catalog"), has_poly = j.contains("polynomial");
    if (has_cat == has_poly) throw ConfigError("immersion", "give exactly one of 'catalog' or 'polynomial'");
    if (has_cat) {
        if (j.contains("degree_cap")) throw ConfigError("immersion.degree_cap", "only valid with 'polynomial'");
        const std::string id = string(j["catalog"], "immersion.catalog");
        const CatalogEntry* entry = nullptr;
        for (const auto& e : catalog_entries())
            if (e.id == id) entry = &e;
        if (!entry) throw ConfigError("immersion.catalog", "unknown catalog id '" + id + "'");
        ParamMap params;
        if (j.contains("params")) {
            if (!j["params"].is_object()) throw ConfigError("immersion.params", "expected an object");
            for (const auto& [k, v] : j["params"].items()) {
                if (!entry->defaults.count(k))
                    throw ConfigError("immersion.params." + k, "not a parameter of '" + id + "'");
                params[k] = number(v, "immersion.params." + k);
            }
        }
        try {
            return ImmersionSpec::catalog(id, params);
        } catch (const GeometryError& e) {
            throw ConfigError("immersion.params", e.what());
        }
    }
    if (j.contains("params")) throw ConfigError("immersion.params", "only valid with 'catalog'");
    int cap = 8;
    if (j.contains("degree_cap")) {
        const long long c = integer(j["degree_cap"], "immersion.degree_cap");
        if (c < 0 || c > 64) throw ConfigError("immersion.degree_cap", "must lie in [0, 64]");
        cap = static_cast<int>(c);
    }
    try {
        return ImmersionSpec::polynomial(parse_monomials(j["polynomial"].dump()), cap);
    } catch (const GeometryError& e) {
        throw ConfigError("immersion.polynomial", e.what());
    }
}

void parse_domain(const json& j, GridRequest& g) {
    if (j.is_object()) {
        only_keys(j, "domain", {"lo", "hi"});
        if (!j.contains("lo") || !j.contains("hi")) throw ConfigError("domain", "needs 'lo' and 'hi'");
        g.lo = vec4(j["lo"], "domain.lo");
        g.hi = vec4(j["hi"], "domain.hi");
    } else if (j.is_array() && j.size() == 4) {
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string p = "domain[" + std::to_string(i) + "]";
            if (!j[i].is_array() || j[i].size() != 2) throw ConfigError(p, "expected [lo, hi]");
            g.lo[i] = number(j[i][0], p + "[0]");
            g.hi[i] = number(j[i][1], p + "[1]");
        }
    } else {
        throw ConfigError("domain", "expected {lo, hi} or four [lo, hi] intervals");
    }
}

void parse_resolution(const json& j, GridRequest& g) {
    auto one = [](const json& v, const std::string& path) {
        const long long r = integer(v, path);
        if (r < 1 || r > 10000) throw ConfigError(path, "must lie in [1, 10000]");
        return static_cast<int>(r);
    };
    if (j.is_number()) {
        g.resolution.fill(one(j, "resolution"));
    } else if (j.is_array() && j.size() == 4) {
        for (std::size_t i = 0; i < 4; ++i) g.resolution[i] = one(j[i], "resolution[" + std::to_string(i) + "]");
    } else {
        throw ConfigError("resolution", "expected an integer or an array of 4 integers");
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("", e.what());
    }
    if (!j.is_object()) throw ConfigError("", "top level must be an object");
    for (const auto& [k, v] : j.items())
        if (std::find(kTopLevelKeys.begin(), kTopLevelKeys.end(), k) == kTopLevelKeys.end())
            throw ConfigError(k, "unknown key");

    RunConfig c;
    if (j.contains("immersion")) c.immersion = parse_immersion(j["immersion"]);
    if (j.contains("domain")) parse_domain(j["domain"], c.grid);
    if (j.contains("resolution")) parse_resolution(j["resolution"], c.grid);
    for (std::size_t i = 0; i < 4; ++i) {
        if (c.grid.lo[i] > c.grid.hi[i]) throw ConfigError("domain", "lo exceeds hi on axis " + std::to_string(i));
        if (c.grid.lo[i] == c.grid.hi[i] && c.grid.resolution[i] != 1)
            throw ConfigError("domain", "degenerate interval on axis " + std::to_string(i) + " needs resolution 1");
    }
    if (j.contains("fields")) {
        const json& f = j["fields"];
        auto add = [&](const json& v, const std::string& path) {
            try {
                c.fields |= parse_field(string(v, path));
            } catch (const GeometryError& e) {
                throw ConfigError(path, e.what());
            }
        };
        if (f.is_string()) {
            add(f, "fields");
        } else if (f.is_array()) {
            for (std::size_t i = 0; i < f.size(); ++i) add(f[i], "fields[" + std::to_string(i) + "]");
        } else {
            throw ConfigError("fields", "expected a string or an array of strings");
        }
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        only_keys(t, "tolerances", {"complex", "lagrangian", "equal"});
        if (t.contains("complex")) c.tol.complex = positive(t["complex"], "tolerances.complex");
        if (t.contains("lagrangian")) c.tol.lagrangian = positive(t["lagrangian"], "tolerances.lagrangian");
        if (t.contains("equal")) c.tol.equal = positive(t["equal"], "tolerances.equal");
    }
    if (j.contains("guard")) {
        const json& t = j["guard"];
        only_keys(t, "guard", {"complex", "lagrangian", "singular"});
        if (t.contains("complex")) c.guard.complex = positive(t["complex"], "guard.complex");
        if (t.contains("lagrangian")) c.guard.lagrangian = positive(t["lagrangian"], "guard.lagrangian");
        if (t.contains("singular")) c.guard.singular = positive(t["singular"], "guard.singular");
    }
    if (j.contains("fd_step")) c.fd_step = positive(j["fd_step"], "fd_step");
    if (j.contains("strict_tolerance")) c.strict_tolerance = positive(j["strict_tolerance"], "strict_tolerance");
    if (j.contains("min_order")) c.min_order = number(j["min_order"], "min_order");
    if (j.contains("residual_floor")) c.residual_floor = positive(j["residual_floor"], "residual_floor");
    if (j.contains("samples")) {
        const long long n = integer(j["samples"], "samples");
        if (n < 0 || n > 100000000) throw ConfigError("samples", "must lie in [0, 1e8]");
        c.samples = static_cast<std::size_t>(n);
    }
    if (j.contains("variant")) {
        const std::string v = string(j["variant"], "variant");
        if (v == "omega")
            c.variant = CayleyVariant::Omega;
        else if (v == "omega_prime")
            c.variant = CayleyVariant::OmegaPrime;
        else
            throw ConfigError("variant", "expected 'omega' or 'omega_prime'");
    }
    if (j.contains("checks")) {
        const json& k = j["checks"];
        if (!k.is_array() || k.empty()) throw ConfigError("checks", "expected a non-empty array");
        c.check_pde = c.check_identity = false;
        for (std::size_t i = 0; i < k.size(); ++i) {
            const std::string path = "checks[" + std::to_string(i) + "]";
            const std::string v = string(k[i], path);
            if (v == "pde")
                c.check_pde = true;
            else if (v == "identity")
                c.check_identity = true;
            else
                throw ConfigError(path, "expected 'pde' or 'identity'");
        }
    }
    if (j.contains("tube")) {
        const json& t = j["tube"];
        only_keys(t, "tube", {"center", "radii", "order", "rel_tol"});
        if (t.contains("center")) {
            const auto v = vec4(t["center"], "tube.center");
            c.tube.center = ChartPoint(v[0], v[1], v[2], v[3]);
        }
        if (t.contains("radii")) {
            const json& r = t["radii"];
            if (!r.is_array() || r.empty()) throw ConfigError("tube.radii", "expected a non-empty array");
            c.tube.radii.clear();
            for (std::size_t i = 0; i < r.size(); ++i)
                c.tube.radii.push_back(positive(r[i], "tube.radii[" + std::to_string(i) + "]"));
        }
        if (t.contains("order")) {
            const long long o = integer(t["order"], "tube.order");
            if (o < 2 || o > 200) throw ConfigError("tube.order", "must lie in [2, 200]");
            c.tube.order = static_cast<int>(o);
        }
        if (t.contains("rel_tol")) c.tube.rel_tol = positive(t["rel_tol"], "tube.rel_tol");
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        only_keys(o, "output", {"path", "format"});
        if (o.contains("path")) c.output_path = string(o["path"], "output.path");
        if (o.contains("format")) {
            c.output_format = string(o["format"], "output.format");
            if (c.output_format != "csv" && c.output_format != "json")
                throw ConfigError("output.format", "expected 'csv' or 'json'");
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ---- serialization ----

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<std::string>(c)) {
        const std::string& s = std::get<std::string>(c);
        if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + "\"";
    }
    return "";
}

std::string json_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<std::string>(c)) return json(std::get<std::string>(c)).dump();
    return "null";
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
    os << "#schema=" << t.schema << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_text(row[i]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& t) {
    os << "[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << (r ? ",\n  {" : "\n  {");
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? ", " : "") << json(t.columns[i]).dump() << ": " << json_text(t.rows[r][i]);
        os << "}";
    }
    os << (t.rows.empty() ? "]\n" : "\n]\n");
}

// ---- commands ----

namespace {

const ImmersionSpec& require_immersion(const RunConfig& cfg) {
    if (!cfg.immersion) throw ConfigError("immersion", "required for this command");
    return *cfg.immersion;
}

Cell cell_of(const std::optional<double>& v) {
    if (v) return *v;
    return std::monostate{};
}

// Non-finite numbers never reach the output; the row is marked instead.
void finalize(std::vector<Cell>& row, std::size_t status_col) {
    bool bad = false;
    for (auto& c : row)
        if (std::holds_alternative<double>(c) && !std::isfinite(std::get<double>(c))) {
            c = std::monostate{};
            bad = true;
        }
    if (bad && std::get<std::string>(row[status_col]) == "ok") row[status_col] = std::string("error:non-finite");
}

std::vector<Cell> node_prefix(const NodeSample& s) {
    std::vector<Cell> r = {s.p[0], s.p[1], s.p[2], s.p[3]};
    if (s.classified)
        r.emplace_back(std::string(point_class_name(s.cls)));
    else
        r.emplace_back(std::monostate{});
    return r;
}

const std::vector<std::string> kPrefix = {"x", "y", "z", "w", "class"};

std::string skip_status(const GeometryError& e) {
    switch (e.code()) {
        case ErrorCode::NearLagrangian: return "skipped:near-lagrangian";
        case ErrorCode::NearComplex:
        case ErrorCode::ComplexPoint: return "skipped:near-complex";
        case ErrorCode::SingularPoint:
        case ErrorCode::StencilOutOfDomain: return "skipped:singular";
        default: return std::string("error:") + error_code_name(e.code());
    }
}

std::size_t column_index(const FieldGrid& g, const std::string& name) {
    return static_cast<std::size_t>(std::find(g.columns.begin(), g.columns.end(), name) - g.columns.begin());
}

bool is_error(const std::string& status) { return status.rfind("error:", 0) == 0; }

}  // namespace

std::vector<ChartPoint> sample_points(const RunConfig& cfg, std::uint64_t seed) {
    std::vector<ChartPoint> pts;
    if (cfg.samples == 0) {
        pts.resize(cfg.grid.size());
        for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = cfg.grid.node(i);
        return pts;
    }
    std::mt19937_64 rng(seed);
    pts.resize(cfg.samples);
    for (auto& p : pts)
        for (int ax = 0; ax < 4; ++ax) {
            const auto a = static_cast<std::size_t>(ax);
            // 53-bit uniform in [0, 1), independent of the standard library's distribution code.
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            p[ax] = cfg.grid.lo[a] + (cfg.grid.hi[a] - cfg.grid.lo[a]) * u;
        }
    return pts;
}

Table cmd_angles(const RunConfig& cfg, const RunOptions& opt) {
    const ImmersionSpec& spec = require_immersion(cfg);
    const unsigned fields = cfg.fields | FieldAngles;
    const FieldGrid g = scan_points(spec, sample_points(cfg, opt.seed), fields, cfg.tol, cfg.guard, opt.threads);
    const bool has_expected = spec.kind() == SpecKind::Catalog && find_catalog_entry(spec.id()).expected_cos;

    Table t;
    t.schema = "angles.v1";
    t.columns = kPrefix;
    t.columns.insert(t.columns.end(), g.columns.begin(), g.columns.end());
    if (has_expected) t.columns.push_back("cos_expected");
    t.columns.push_back("status");
    const std::size_t c1 = column_index(g, "cos1"), c2 = column_index(g, "cos2");
    for (const NodeSample& s : g.samples) {
        auto row = node_prefix(s);
        for (const auto& v : s.values) row.push_back(cell_of(v));
        if (has_expected) {
            std::optional<double> e;
            if (s.status == "ok") e = expected_cos(spec, s.p);
            row.push_back(cell_of(e));
            if (e && s.values[c1] && s.values[c2]) {
                const double dev = std::max(std::abs(*s.values[c1] - *e), std::abs(*s.values[c2] - *e));
                if (dev > cfg.strict_tolerance) ++t.strict_failures;
            }
        }
        row.emplace_back(s.status);
        finalize(row, row.size() - 1);
        if (is_error(std::get<std::string>(row.back()))) ++t.strict_failures;
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table cmd_calibrate(const RunConfig& cfg, const RunOptions& opt) {
    const ImmersionSpec& spec = require_immersion(cfg);
    const std::vector<ChartPoint> pts = sample_points(cfg, opt.seed);
    const FieldGrid g = scan_points(spec, pts, FieldAngles | FieldCalibration, cfg.tol, cfg.guard, opt.threads);

    struct Extra {
        std::optional<double> phase, orth, det;
        std::string status;
    };
    std::vector<Extra> extra(pts.size());
    parallel_for(pts.size(), opt.threads, [&](std::size_t i) {
        if (g.samples[i].status != "ok") return;
        try {
            const PointGeometry geo = point_geometry(spec, pts[i], cfg.tol);
            const Mat3 T = omega_triangle(geo, cfg.variant);
            extra[i].phase = phase_family_defect(geo);
            extra[i].orth = (T.transpose() * T - Mat3::Identity()).cwiseAbs().maxCoeff();
            extra[i].det = T.determinant();
        } catch (const GeometryError& e) {
            extra[i].status = skip_status(e);
        }
    });

    Table t;
    t.schema = "calibrate.v1";
    t.columns = kPrefix;
    t.columns.insert(t.columns.end(), g.columns.begin(), g.columns.end());
    t.columns.insert(t.columns.end(), {"phase_family_defect", "triangle_orthogonality_defect", "triangle_det", "status"});
    const std::size_t sel =
        column_index(g, cfg.variant == CayleyVariant::Omega ? "calibration_omega" : "calibration_omega_prime");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const NodeSample& s = g.samples[i];
        auto row = node_prefix(s);
        for (const auto& v : s.values) row.push_back(cell_of(v));
        row.push_back(cell_of(extra[i].phase));
        row.push_back(cell_of(extra[i].orth));
        row.push_back(cell_of(extra[i].det));
        row.emplace_back(extra[i].status.empty() ? s.status : extra[i].status);
        finalize(row, row.size() - 1);
        const std::string& st = std::get<std::string>(row.back());
        if (is_error(st))
            ++t.strict_failures;
        else if (st == "ok" && s.cls != PointClass::Lagrangian && s.values[sel] &&
                 std::abs(*s.values[sel]) > cfg.strict_tolerance)
            ++t.strict_failures;
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table cmd_curvature(const RunConfig& cfg, const RunOptions& opt) {
    const ImmersionSpec& spec = require_immersion(cfg);
    const unsigned fields =
        (cfg.fields ? cfg.fields : (FieldMeanCurvature | FieldScalar | FieldDensities | FieldEta)) | FieldAngles;
    const FieldGrid g = scan_points(spec, sample_points(cfg, opt.seed), fields, cfg.tol, cfg.guard, opt.threads);
    const bool dens = fields & FieldDensities;

    Table t;
    t.schema = "curvature.v1";
    t.columns = kPrefix;
    t.columns.insert(t.columns.end(), g.columns.begin(), g.columns.end());
    if (dens) t.columns.push_back("p1_plus_difference");
    t.columns.push_back("status");
    const std::size_t ptm = column_index(g, "p1_plus_tm"), pnm = column_index(g, "p1_plus_nm");
    for (const NodeSample& s : g.samples) {
        auto row = node_prefix(s);
        for (const auto& v : s.values) row.push_back(cell_of(v));
        if (dens) {
            if (s.values[ptm] && s.values[pnm]) {
                const double a = *s.values[ptm], b = *s.values[pnm];
                row.emplace_back(a - b);
                if (std::abs(a - b) > cfg.strict_tolerance * (1.0 + std::max(std::abs(a), std::abs(b))))
                    ++t.strict_failures;
            } else {
                row.emplace_back(std::monostate{});
            }
        }
        row.emplace_back(s.status);
        finalize(row, row.size() - 1);
        if (is_error(std::get<std::string>(row.back()))) ++t.strict_failures;
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table cmd_pde_check(const RunConfig& cfg, const RunOptions& opt) {
    const ImmersionSpec& spec = require_immersion(cfg);
    const std::vector<ChartPoint> pts = sample_points(cfg, opt.seed);
    const FieldGrid g = scan_points(spec, pts, FieldAngles, cfg.tol, cfg.guard, opt.threads);
    const double step = cfg.fd_step ? *cfg.fd_step : default_fd_step(cfg.grid);

    struct Check {
        std::optional<RichardsonPair> pair;
        std::string status = "ok";
    };
    std::vector<Check> pde(pts.size()), id16(pts.size());
    auto run = [&](Check& out, const std::function<double(double)>& fn) {
        try {
            out.pair = richardson(fn, step);
        } catch (const GeometryError& e) {
            out.status = skip_status(e);
        }
    };
    parallel_for(pts.size(), opt.threads, [&](std::size_t i) {
        if (g.samples[i].status != "ok") return;
        const ChartPoint p = pts[i];
        if (cfg.check_pde)
            run(pde[i], [&](double h) { return log_cos2_pde_residual(spec, p, h, cfg.tol, cfg.guard); });
        if (cfg.check_identity)
            run(id16[i], [&](double h) { return transgression_identity_residual(spec, p, h, cfg.tol, cfg.guard); });
    });

    Table t;
    t.schema = "pde-check.v1";
    t.columns = kPrefix;
    t.columns.insert(t.columns.end(), {"cos1", "cos2", "step"});
    if (cfg.check_pde) t.columns.insert(t.columns.end(), {"pde_residual_h", "pde_residual_half", "pde_order", "pde_status"});
    if (cfg.check_identity)
        t.columns.insert(t.columns.end(),
                         {"identity_residual_h", "identity_residual_half", "identity_order", "identity_status"});
    t.columns.push_back("status");

    auto emit = [&](std::vector<Cell>& row, const Check& c, const std::string& node_status, std::string& overall) {
        if (node_status != "ok") {
            row.insert(row.end(), 3, std::monostate{});
            row.emplace_back(std::monostate{});
            return;
        }
        if (c.pair) {
            const RichardsonPair& r = *c.pair;
            row.emplace_back(r.residual_h);
            row.emplace_back(r.residual_half);
            row.push_back(std::isfinite(r.order) ? Cell(r.order) : Cell(std::monostate{}));
            const bool converged = r.residual_h <= cfg.residual_floor && r.residual_half <= cfg.residual_floor;
            if (!converged && !(r.order >= cfg.min_order)) ++t.strict_failures;
        } else {
            row.insert(row.end(), 3, std::monostate{});
            if (is_error(c.status)) ++t.strict_failures;
        }
        row.emplace_back(c.status);
        if (overall == "ok" && c.status != "ok") overall = c.status;
    };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const NodeSample& s = g.samples[i];
        auto row = node_prefix(s);
        row.push_back(cell_of(s.values[0]));
        row.push_back(cell_of(s.values[1]));
        row.emplace_back(step);
        std::string overall = s.status;
        if (cfg.check_pde) emit(row, pde[i], s.status, overall);
        if (cfg.check_identity) emit(row, id16[i], s.status, overall);
        row.emplace_back(overall);
        finalize(row, row.size() - 1);
        if (is_error(s.status)) ++t.strict_failures;
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table cmd_tube(const RunConfig& cfg, const RunOptions& opt) {
    const ImmersionSpec& spec = require_immersion(cfg);
    (void)opt;
    Table t;
    t.schema = "tube.v1";
    t.columns = {"center_x", "center_y", "center_z", "center_w", "radius", "order", "value", "coarse", "status"};
    for (double r : cfg.tube.radii) {
        std::vector<Cell> row = {cfg.tube.center[0], cfg.tube.center[1], cfg.tube.center[2], cfg.tube.center[3], r,
                                 static_cast<long long>(cfg.tube.order)};
        try {
            const TubeResult res =
                tube_integral_eta(spec, cfg.tube.center, r, cfg.tube.order, cfg.tube.rel_tol, cfg.tol, cfg.guard);
            row.emplace_back(res.value);
            row.emplace_back(res.coarse);
            row.emplace_back(std::string("ok"));
        } catch (const GeometryError& e) {
            row.emplace_back(std::monostate{});
            row.emplace_back(std::monostate{});
            row.emplace_back(skip_status(e));
        }
        finalize(row, row.size() - 1);
        if (std::get<std::string>(row.back()) != "ok") ++t.strict_failures;
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table cmd_catalog_list() {
    Table t;
    t.schema = "catalog.v1";
    t.columns = {"id", "codomain_dim", "params", "loci", "description"};
    for (const CatalogEntry& e : catalog_entries()) {
        std::string params, loci;
        for (const auto& [k, v] : e.defaults) params += (params.empty() ? "" : ";") + k + "=" + format_double(v);
        for (const auto& l : e.loci(e.defaults))
            loci += (loci.empty() ? "" : ";") + std::string(locus_kind_name(l.kind)) + ":" + l.description;
        t.rows.push_back({e.id, static_cast<long long>(e.codomain_dim), params, loci, e.description});
    }
    return t;
}

// ---- entry point ----

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kahler angle, calibration and curvature checks for graph immersions R^4 -> R^8"};
    app.name("kahler");
    app.require_subcommand(1);

    struct Common {
        std::string config, out, format;
        unsigned threads = 0;
        std::uint64_t seed = 0;
        bool strict = false;
    } common;
    auto add_common = [&](CLI::App* s, bool needs_config) {
        auto* c = s->add_option("--config", common.config, "JSON run configuration");
        if (needs_config) c->required();
        s->add_option("--out", common.out, "output path (default: stdout)");
        s->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--threads", common.threads, "worker threads, 0 = auto");
        s->add_option("--seed", common.seed, "seed for random-sample modes");
        s->add_flag("--strict", common.strict, "exit 4 when a check exceeds its tolerance");
    };
    using Cmd = Table (*)(const RunConfig&, const RunOptions&);
    struct Sub {
        const char* name;
        const char* help;
        Cmd fn;
    };
    const Sub subs[] = {
        {"angles", "Kahler angles and point classification over a grid", cmd_angles},
        {"calibrate", "Cayley-form calibration defects and the induced map on self-dual forms", cmd_calibrate},
        {"curvature", "mean curvature, scalar curvature, characteristic densities and eta", cmd_curvature},
        {"pde-check", "log cos^2 PDE and the p1 / d eta identity with step-halving orders", cmd_pde_check},
        {"tube", "integrals of eta over coordinate spheres about a complex point", cmd_tube},
    };
    std::vector<CLI::App*> sub_apps;
    for (const Sub& s : subs) {
        sub_apps.push_back(app.add_subcommand(s.name, s.help));
        add_common(sub_apps.back(), true);
    }
    CLI::App* catalog = app.add_subcommand("catalog", "registered example immersions");
    catalog->require_subcommand(1);
    CLI::App* catalog_list = catalog->add_subcommand("list", "list catalog entries");
    add_common(catalog_list, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return ExitConfig;
    }

    try {
        RunConfig cfg;
        if (!common.config.empty()) cfg = load_config(common.config);
        const RunOptions ropt{common.threads, common.seed, common.strict};
        Table table;
        if (*catalog_list) {
            table = cmd_catalog_list();
        } else {
            for (std::size_t i = 0; i < sub_apps.size(); ++i)
                if (*sub_apps[i]) table = subs[i].fn(cfg, ropt);
        }

        const std::string path = !common.out.empty() ? common.out : cfg.output_path;
        std::string format = !common.format.empty() ? common.format : cfg.output_format;
        if (format.empty())
            format = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0 ? "json" : "csv";
        std::ostringstream buf;
        if (format == "json")
            write_json(buf, table);
        else
            write_csv(buf, table);

        if (path.empty() || path == "-") {
            out << buf.str();
            out.flush();
        } else {
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f) throw IOError("cannot open output file '" + path + "'");
            f << buf.str();
            f.close();
            if (!f) throw IOError("failed writing output file '" + path + "'");
        }
        if (common.strict && table.strict_failures > 0) {
            err << "strict: " << table.strict_failures << " record(s) exceed tolerance\n";
            return ExitStrict;
        }
        return ExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return ExitConfig;
    } catch (const IOError& e) {
        err << "i/o error: " << e.what() << '\n';
        return ExitIO;
    } catch (const GeometryError& e) {
        err << "error [" << error_code_name(e.code()) << "]: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace kahler::cli
