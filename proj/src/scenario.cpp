#include "loopgerbe/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "loopgerbe/error.hpp"
#include "loopgerbe/transgression.hpp"

namespace loopgerbe {

namespace {

struct OpSpec {
    std::vector<std::string> required; ///< argument roles
    std::vector<std::string> optional;
    double default_tol;
};

const std::map<std::string, OpSpec>& op_table()
{
    static const std::map<std::string, OpSpec> table = {
        {"check", {{}, {"gerbe", "bundle"}, 1e-9}},
        {"holonomy", {{"bundle", "loop"}, {}, 1e-9}},
        {"surface_holonomy", {{"gerbe", "cylinder"}, {}, 1e-8}},
        {"transgress", {{"loop"}, {"gerbe", "bundle", "x", "y"}, 1e-9}},
        {"curvature", {{"gerbe"}, {}, 1e-9}},
        {"curvature_check", {{"gerbe", "loop", "x", "y"}, {}, 1.0}},
        {"eta", {{}, {}, 1e-6}},
        {"spectral_flow", {{"family", "path"}, {}, 0.5}},
        {"index_gerbe", {{"family"}, {"cuts"}, 1e-9}},
    };
    return table;
}

/// Expected type of the object bound to an argument role.
std::string role_type(const std::string& role)
{
    if (role == "x" || role == "y" || role == "path") {
        return "map";
    }
    if (role == "bundle") {
        return "line_bundle";
    }
    return role;
}

int line_of(const std::string& text, const std::string& needle)
{
    auto pos = text.find(needle);
    return pos == std::string::npos ? 0 : line_column(text, pos).first;
}

Json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

/// Resolves named objects lazily, caching parsed values.
class Objects {
public:
    Objects(const Json& decl, std::string base_dir) : decl_(decl), base_(std::move(base_dir)) {}

    bool has(const std::string& name) const { return decl_.contains(name); }

    Json document(const std::string& name) const
    {
        Json d = decl_.at(name);
        if (d.contains("file")) {
            std::filesystem::path p(d.at("file").get<std::string>());
            if (p.is_relative()) {
                p = std::filesystem::path(base_) / p;
            }
            Json loaded = load_json_file(p.string());
            for (auto it = d.begin(); it != d.end(); ++it) {
                if (it.key() != "file") {
                    loaded[it.key()] = it.value();
                }
            }
            d = loaded;
        }
        return d;
    }

    std::string type(const std::string& name) const
    {
        const Json& d = decl_.at(name);
        if (!d.contains("type")) {
            throw StructuralError("object '" + name + "' has no type");
        }
        return d.at("type").get<std::string>();
    }

    GerbeData gerbe(const std::string& n)
    {
        if (!gerbes_.count(n)) {
            gerbes_[n] = gerbe_from_json(document(n));
        }
        return gerbes_.at(n);
    }
    LineBundleData bundle(const std::string& n) { return line_bundle_from_json(document(n)); }
    SmoothMap map(const std::string& n) { return smooth_map_from_json(document(n)); }
    SpectralFamily family(const std::string& n) { return family_from_json(document(n)); }
    Json raw(const std::string& n) { return document(n); }

private:
    Json decl_;
    std::string base_;
    std::map<std::string, GerbeData> gerbes_;
};

struct Task {
    std::string op;
    std::map<std::string, std::string> args;
    Json params;
    double tol = 0.0;
    std::string output;
};

double param(const Json& p, const char* key, double fallback)
{
    return p.contains(key) ? p.at(key).get<double>() : fallback;
}

TaskResult execute(const Task& t, Objects& obj)
{
    TaskResult r;
    r.op = t.op;
    r.output = t.output;
    r.tol = t.tol;
    const Json& p = t.params;
    auto arg = [&](const char* role) { return t.args.count(role) ? t.args.at(role) : std::string(); };
    int grid = p.contains("grid") ? p.at("grid").get<int>() : 9;

    if (t.op == "check") {
        if (!arg("gerbe").empty()) {
            auto g = obj.gerbe(arg("gerbe"));
            auto ax = check_gerbe_axioms(g, t.tol, grid);
            auto co = is_cocycle(gerbe_cocycle(g), t.tol, grid);
            r.value = {{"integrality", ax.integrality}, {"parallel", ax.parallel}, {"curvature", ax.curvature},
                       {"cocycle", co.max_residual}};
            r.residual = std::max({ax.integrality, ax.parallel, ax.curvature, co.max_residual});
        } else if (!arg("bundle").empty()) {
            auto l = obj.bundle(arg("bundle"));
            auto ax = check_line_axioms(l, t.tol, grid);
            auto co = is_cocycle(line_cocycle(l), t.tol, grid);
            r.value = {{"integrality", ax.integrality}, {"compatibility", ax.compatibility}, {"cocycle", co.max_residual}};
            r.residual = std::max({ax.integrality, ax.compatibility, co.max_residual});
        } else {
            throw StructuralError("check needs a gerbe or a bundle argument");
        }
    } else if (t.op == "holonomy") {
        auto h = holonomy(obj.bundle(arg("bundle")), loop_from_json(obj.raw(arg("loop"))));
        r.value = {{"value", complex_json(h.value)}, {"phase", h.phase}, {"chart_n", h.chart.n()}};
        if (p.contains("expected_phase")) {
            double d = h.phase - p.at("expected_phase").get<double>();
            r.residual = std::abs(d - std::round(d));
        }
    } else if (t.op == "surface_holonomy") {
        auto g = obj.gerbe(arg("gerbe"));
        LoopOfLoops path(cylinder_from_json(obj.raw(arg("cylinder"))));
        std::string method = p.contains("method") ? p.at("method").get<std::string>() : "both";
        Json v = Json::object();
        std::complex<double> c, d;
        if (method == "composed" || method == "both") {
            auto h = surface_holonomy_composed(g, path);
            c = h.value;
            v["composed"] = {{"value", complex_json(c)}, {"grid", {h.chart.m(), h.chart.n()}}};
        }
        if (method == "direct" || method == "both") {
            auto h = surface_holonomy_direct(g, path);
            d = h.value;
            v["direct"] = {{"value", complex_json(d)}, {"grid", {h.chart.m(), h.chart.n()}}};
        }
        if (method != "composed" && method != "direct" && method != "both") {
            throw StructuralError("method must be direct, composed or both");
        }
        if (method == "both") {
            r.residual = std::abs(c - d);
        }
        r.value = v;
    } else if (t.op == "transgress") {
        auto loop = loop_from_json(obj.raw(arg("loop")));
        if (!arg("gerbe").empty()) {
            if (arg("x").empty() || arg("y").empty()) {
                throw StructuralError("transgressing a gerbe curvature needs x and y vector fields");
            }
            auto x = obj.map(arg("x"));
            auto y = obj.map(arg("y"));
            double v = transgress_form(gerbe_curvature(obj.gerbe(arg("gerbe"))), loop, x, &y);
            r.value = v;
            if (p.contains("expected")) {
                r.residual = std::abs(v - p.at("expected").get<double>());
            }
        } else if (!arg("bundle").empty()) {
            auto h = transgress_line(obj.bundle(arg("bundle")))(loop);
            r.value = complex_json(h);
        } else {
            throw StructuralError("transgress needs a gerbe or a bundle argument");
        }
    } else if (t.op == "curvature") {
        auto dd = dd_pairing(obj.gerbe(arg("gerbe")));
        r.value = {{"dd", dd.value}, {"raw", dd.raw}, {"snap_distance", dd.snap_distance}};
        r.residual = dd.snap_distance;
        if (p.contains("expected") && p.at("expected").get<long long>() != dd.value) {
            r.residual = std::max(r.residual, 1.0);
        }
    } else if (t.op == "curvature_check") {
        auto g = obj.gerbe(arg("gerbe"));
        auto loop = loop_from_json(obj.raw(arg("loop")));
        auto x = obj.map(arg("x"));
        auto y = obj.map(arg("y"));
        std::vector<double> eps = p.contains("eps") ? p.at("eps").get<std::vector<double>>() : std::vector<double>{0.04, 0.02, 0.01};
        Json rows = Json::array();
        double prev = -1.0;
        bool halving = true;
        for (double e : eps) {
            auto c = tg_curvature_check(g, loop, x, y, e);
            rows.push_back({{"eps", e}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"defect", c.defect}});
            r.residual = std::max(r.residual, c.defect / (10.0 * e));
            if (prev >= 0.0 && !(c.defect < 0.6 * prev || c.defect < 1e-10)) {
                halving = false;
            }
            prev = c.defect;
        }
        r.value = {{"rows", rows}, {"halving", halving}};
        if (!halving) {
            r.residual = std::max(r.residual, 2.0 * t.tol);
        }
    } else if (t.op == "eta") {
        double a = param(p, "a", 0.0);
        auto heat = eta_heat_oracle(a);
        double eta = eta_invariant(a);
        r.value = {{"a", a}, {"eta", eta}, {"heat", heat.value}, {"heat_error_bound", heat.error_bound},
                   {"tau", complex_json(tau(a))}, {"kernel_dim", kernel_dim(a)}};
        r.residual = std::abs(eta - heat.value);
    } else if (t.op == "spectral_flow") {
        int sf = spectral_flow(obj.family(arg("family")), obj.map(arg("path")), param(p, "t0", 0.0), param(p, "t1", 1.0));
        r.value = sf;
        if (p.contains("expected")) {
            r.residual = std::abs(sf - p.at("expected").get<int>());
        }
    } else if (t.op == "index_gerbe") {
        auto fam = obj.family(arg("family"));
        Cover cover = Cover::standard(fam.base_dim);
        Json cuts_doc = arg("cuts").empty() ? Json{{"auto", true}} : obj.raw(arg("cuts"));
        auto g = index_gerbe_build(fam, cover, cuts_from_json(cuts_doc, fam, cover));
        auto ax = check_gerbe_axioms(g, t.tol, grid);
        auto hol = surface_holonomy_composed(g, LoopOfLoops(CylinderMap(SmoothMap::identity(2)))).value;
        r.value = {{"integrality", ax.integrality}, {"parallel", ax.parallel}, {"curvature", ax.curvature},
                   {"torus_holonomy", complex_json(hol)}};
        r.residual = std::max({ax.integrality, ax.parallel, ax.curvature});
    }
    r.pass = std::isfinite(r.residual) && r.residual <= r.tol;
    return r;
}

} // namespace

const std::vector<std::string>& scenario_operations()
{
    static const std::vector<std::string> ops = [] {
        std::vector<std::string> v;
        for (const auto& [k, s] : op_table()) {
            v.push_back(k);
        }
        return v;
    }();
    return ops;
}

ScenarioReport run_scenario_text(const std::string& text, const std::string& origin, const std::string& base_dir)
{
    Json doc = parse_json_text(text, origin);
    auto fail = [&](const std::string& needle, const std::string& msg) {
        int line = needle.empty() ? 0 : line_of(text, needle);
        throw StructuralError(origin + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + msg);
    };
    if (!doc.is_object()) {
        fail("", "scenario must be a JSON object");
    }
    if (!doc.contains("version") || doc.at("version") != kScenarioVersion) {
        fail("\"version\"", std::string("scenario version must be \"") + kScenarioVersion + "\"");
    }
    Json decl = doc.value("objects", Json::object());
    if (!decl.is_object()) {
        fail("\"objects\"", "objects must map names to documents");
    }
    Objects objects(decl, base_dir);

    // Resolve everything before running anything.
    std::vector<Task> tasks;
    const Json task_list = doc.value("tasks", Json::array());
    for (std::size_t i = 0; i < task_list.size(); ++i) {
        const Json& tj = task_list[i];
        std::string where = "task " + std::to_string(i);
        Task t;
        if (!tj.contains("op")) {
            fail("\"tasks\"", where + " has no op");
        }
        t.op = tj.at("op").get<std::string>();
        auto spec = op_table().find(t.op);
        if (spec == op_table().end()) {
            fail("\"" + t.op + "\"", where + ": unknown operation '" + t.op + "'");
        }
        const Json args = tj.value("args", Json::object());
        for (auto it = args.begin(); it != args.end(); ++it) {
            const std::string role = it.key();
            const std::string name = it.value().get<std::string>();
            const auto& s = spec->second;
            if (std::find(s.required.begin(), s.required.end(), role) == s.required.end() &&
                std::find(s.optional.begin(), s.optional.end(), role) == s.optional.end()) {
                fail("\"" + role + "\"", where + ": operation '" + t.op + "' takes no argument '" + role + "'");
            }
            if (!objects.has(name)) {
                fail("\"" + name + "\"", where + ": missing object '" + name + "'");
            }
            if (objects.type(name) != role_type(role)) {
                fail("\"" + name + "\"", where + ": object '" + name + "' is a " + objects.type(name) + ", expected " +
                                             role_type(role));
            }
            t.args[role] = name;
        }
        for (const auto& role : spec->second.required) {
            if (!t.args.count(role)) {
                fail("\"" + t.op + "\"", where + ": operation '" + t.op + "' needs argument '" + role + "'");
            }
        }
        t.params = tj.value("params", Json::object());
        t.tol = tj.value("tol", spec->second.default_tol);
        if (!(t.tol > 0.0)) {
            fail("\"tol\"", where + ": tolerance must be positive");
        }
        t.output = tj.value("output", t.op + "_" + std::to_string(i));
        tasks.push_back(std::move(t));
    }

    ScenarioReport rep;
    rep.source = origin;
    for (const auto& t : tasks) {
        rep.tasks.push_back(execute(t, objects));
        rep.pass = rep.pass && rep.tasks.back().pass;
    }
    return rep;
}

ScenarioReport run_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw StructuralError("cannot open scenario " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto dir = std::filesystem::path(path).parent_path().string();
    return run_scenario_text(ss.str(), path, dir.empty() ? "." : dir);
}

Json to_json(const ScenarioReport& r)
{
    Json tasks = Json::array();
    for (const auto& t : r.tasks) {
        tasks.push_back({{"op", t.op}, {"output", t.output}, {"value", t.value}, {"residual", t.residual}, {"tol", t.tol},
                         {"pass", t.pass}});
    }
    return {{"source", r.source}, {"pass", r.pass}, {"tasks", tasks}};
}

std::string report_table(const ScenarioReport& r)
{
    std::ostringstream os;
    os << "scenario " << r.source << ": " << r.tasks.size() << " task(s)\n";
    for (const auto& t : r.tasks) {
        os << "  " << (t.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(18) << t.op << std::setw(24) << t.output
           << std::right << " residual " << std::scientific << std::setprecision(3) << t.residual << " (tol " << t.tol
           << ")" << std::defaultfloat << "\n";
    }
    os << (r.pass ? "all tasks pass\n" : "FAILURES present\n");
    return os.str();
}

} // namespace loopgerbe
