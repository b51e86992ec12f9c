#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "loopgerbe/error.hpp"
#include "loopgerbe/scenario.hpp"
#include "loopgerbe/transgression.hpp"
#include "loopgerbe/verify.hpp"

using namespace loopgerbe;

namespace {

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw StructuralError("cannot write " + path);
    }
    out << text;
}

/// JSON to --out if given, else to stdout.
void emit(const Json& j, const std::string& out)
{
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_text(out, j.dump(2) + "\n");
    }
}

Json cplx(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Json gerbe_check_json(const GerbeData& g, double tol, int grid, bool& ok)
{
    auto ax = check_gerbe_axioms(g, tol, grid);
    auto co = is_cocycle(gerbe_cocycle(g), tol, grid);
    ok = ax.ok && co.ok;
    return {{"kind", "gerbe"}, {"ok", ok}, {"integrality", ax.integrality}, {"parallel", ax.parallel},
            {"curvature", ax.curvature}, {"cocycle", co.max_residual}, {"worst", ax.worst.empty() ? co.worst : ax.worst}};
}

Json bundle_check_json(const LineBundleData& l, double tol, int grid, bool& ok)
{
    auto ax = check_line_axioms(l, tol, grid);
    auto co = is_cocycle(line_cocycle(l), tol, grid);
    ok = ax.ok && co.ok;
    return {{"kind", "line_bundle"}, {"ok", ok}, {"integrality", ax.integrality}, {"compatibility", ax.compatibility},
            {"cocycle", co.max_residual}, {"worst", ax.worst.empty() ? co.worst : ax.worst}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"loopgerbe: gerbes with connection on flat tori, their loop-space transgression and spectral models"};
    app.require_subcommand(1);

    std::string out, gerbe, bundle, loop, cylinder, family, path, cuts, scenario, vx, vy, method = "both", level = "quick",
                                                                                      csv;
    double tol = 0.0, a = 0.0, t0 = 0.0, t1 = 1.0;
    int grid = 9;
    std::uint64_t seed = 0;
    std::vector<double> eps{0.04, 0.02, 0.01};
    bool inject = false, repeat = false;

    auto* check = app.add_subcommand("check", "axiom and cocycle checks of a gerbe, bundle or every object of a scenario");
    check->add_option("--gerbe", gerbe, "gerbe JSON");
    check->add_option("--bundle", bundle, "line bundle JSON");
    check->add_option("--scenario", scenario, "scenario whose gerbes and bundles are checked");
    check->add_option("--tol", tol, "tolerance (default 1e-9)");
    check->add_option("--grid", grid, "sample grid per axis")->check(CLI::PositiveNumber);
    check->add_option("--out", out, "write JSON here instead of stdout");

    auto* hol = app.add_subcommand("holonomy", "holonomy of a line bundle along a loop");
    hol->add_option("--bundle", bundle, "line bundle JSON")->required();
    hol->add_option("--loop", loop, "loop JSON")->required();
    hol->add_option("--tol", tol, "axiom tolerance (default 1e-9)");
    hol->add_option("--out", out, "write JSON here instead of stdout");

    auto* surf = app.add_subcommand("surface-holonomy", "holonomy of the transgressed gerbe around a torus map");
    surf->add_option("--gerbe", gerbe, "gerbe JSON")->required();
    surf->add_option("--cylinder", cylinder, "cylinder (torus map) JSON")->required();
    surf->add_option("--method", method, "direct, composed or both")->check(CLI::IsMember({"direct", "composed", "both"}));
    surf->add_option("--tol", tol, "agreement tolerance for --method both (default 1e-8)");
    surf->add_option("--out", out, "write JSON here instead of stdout");

    auto* tg = app.add_subcommand("transgress", "transgressed curvature (T R)(X,Y) at a loop, or T(L) = holonomy");
    tg->add_option("--gerbe", gerbe, "gerbe JSON");
    tg->add_option("--bundle", bundle, "line bundle JSON");
    tg->add_option("--loop", loop, "loop JSON")->required();
    tg->add_option("--x", vx, "vector field X along the loop");
    tg->add_option("--y", vy, "vector field Y along the loop");
    tg->add_option("--out", out, "write JSON here instead of stdout");

    auto* curv = app.add_subcommand("curvature", "Dixmier-Douady pairing; with --loop/--x/--y the loop-level curvature check");
    curv->add_option("--gerbe", gerbe, "gerbe JSON")->required();
    curv->add_option("--loop", loop, "loop JSON");
    curv->add_option("--x", vx, "vector field X");
    curv->add_option("--y", vy, "vector field Y");
    curv->add_option("--eps", eps, "parallelogram sizes");
    curv->add_option("--tol", tol, "snap tolerance (default 1e-6)");
    curv->add_option("--out", out, "write JSON here instead of stdout");

    auto* eta = app.add_subcommand("eta", "eta invariant, heat-series oracle and tau for the spectrum 2 pi (Z + a)");
    eta->add_option("--a", a, "spectral shift")->required();
    eta->add_option("--out", out, "write JSON here instead of stdout");

    auto* sf = app.add_subcommand("spectral-flow", "spectral flow of a family along a path in the base");
    sf->add_option("--family", family, "family JSON")->required();
    sf->add_option("--path", path, "path JSON (one parameter into the base)")->required();
    sf->add_option("--t0", t0, "start parameter");
    sf->add_option("--t1", t1, "end parameter");
    sf->add_option("--out", out, "write JSON here instead of stdout");

    auto* ig = app.add_subcommand("index-gerbe", "index gerbe of a family over T^2 from spectral cuts");
    ig->add_option("--family", family, "family JSON")->required();
    ig->add_option("--cuts", cuts, "cuts JSON (default: automatic)");
    ig->add_option("--tol", tol, "axiom tolerance (default 1e-9)");
    ig->add_option("--out", out, "write the gerbe JSON here (report to stdout)");

    auto* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("--scenario", scenario, "scenario JSON")->required();
    run->add_option("--out", out, "write the JSON report here");

    auto* ver = app.add_subcommand("verify", "acceptance battery");
    ver->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    ver->add_option("--seed", seed, "random seed (default 0)");
    ver->add_option("--out", out, "write the JSON report here");
    ver->add_option("--csv", csv, "write the residual table here");
    ver->add_flag("--inject-defect", inject, "evaluate d_tot with an injected sign defect");
    ver->add_flag("--repeat", repeat, "run twice and require bit-identical JSON");
    std::vector<int> only;
    ver->add_option("--only", only, "criteria to run (default all)")->check(CLI::Range(1, kBatteryCriteria));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help is a "success" parse error.
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) {
            double t = tol > 0 ? tol : 1e-9;
            bool all = true;
            Json report = Json::array();
            auto add = [&](const std::string& name, const Json& doc) {
                bool ok = false;
                Json r;
                if (doc.value("type", std::string()) == "line_bundle") {
                    r = bundle_check_json(line_bundle_from_json(doc), t, grid, ok);
                } else {
                    r = gerbe_check_json(gerbe_from_json(doc), t, grid, ok);
                }
                r["name"] = name;
                report.push_back(r);
                all = all && ok;
            };
            if (!gerbe.empty()) {
                Json d = load_json_file(gerbe);
                d["type"] = "gerbe";
                add(gerbe, d);
            }
            if (!bundle.empty()) {
                Json d = load_json_file(bundle);
                d["type"] = "line_bundle";
                add(bundle, d);
            }
            if (!scenario.empty()) {
                Json s = load_json_file(scenario);
                auto dir = std::filesystem::path(scenario).parent_path();
                const Json objects = s.value("objects", Json::object());
                for (auto it = objects.begin(); it != objects.end(); ++it) {
                    std::string type = it.value().value("type", std::string());
                    if (type != "gerbe" && type != "line_bundle") {
                        continue;
                    }
                    Json d = it.value();
                    if (d.contains("file")) {
                        Json f = load_json_file((dir / d.at("file").get<std::string>()).string());
                        f["type"] = type;
                        d = f;
                    }
                    add(it.key(), d);
                }
            }
            if (report.empty()) {
                throw StructuralError("check needs --gerbe, --bundle or --scenario");
            }
            emit({{"ok", all}, {"objects", report}}, out);
            return all ? 0 : 1;
        }
        if (hol->parsed()) {
            auto l = line_bundle_from_json(load_json_file(bundle));
            auto g = loop_from_json(load_json_file(loop));
            auto ax = check_line_axioms(l, tol > 0 ? tol : 1e-9);
            auto h = holonomy(l, g);
            emit({{"value_re", h.value.real()},
                  {"value_im", h.value.imag()},
                  {"phase", h.phase},
                  {"chart_n", h.chart.n()},
                  {"residuals", {{"integrality", ax.integrality}, {"compatibility", ax.compatibility}}}},
                 out);
            return ax.ok ? 0 : 1;
        }
        if (surf->parsed()) {
            auto g = gerbe_from_json(load_json_file(gerbe));
            LoopOfLoops p(cylinder_from_json(load_json_file(cylinder)));
            Json r{{"method", method}};
            std::complex<double> c, d;
            if (method != "direct") {
                auto h = surface_holonomy_composed(g, p);
                c = h.value;
                r["composed"] = {{"value_re", c.real()}, {"value_im", c.imag()}, {"grid", {h.chart.m(), h.chart.n()}}};
            }
            if (method != "composed") {
                auto h = surface_holonomy_direct(g, p);
                d = h.value;
                r["direct"] = {{"value_re", d.real()}, {"value_im", d.imag()}, {"grid", {h.chart.m(), h.chart.n()}}};
            }
            bool ok = true;
            if (method == "both") {
                double t = tol > 0 ? tol : 1e-8;
                r["agreement"] = std::abs(c - d);
                ok = std::abs(c - d) <= t;
                r["pass"] = ok;
            }
            emit(r, out);
            return ok ? 0 : 1;
        }
        if (tg->parsed()) {
            auto g = loop_from_json(load_json_file(loop));
            if (!gerbe.empty()) {
                if (vx.empty() || vy.empty()) {
                    throw StructuralError("transgress --gerbe needs --x and --y");
                }
                auto x = smooth_map_from_json(load_json_file(vx));
                auto y = smooth_map_from_json(load_json_file(vy));
                double v = transgress_form(gerbe_curvature(gerbe_from_json(load_json_file(gerbe))), g, x, &y);
                emit({{"transgressed_curvature", v}}, out);
            } else if (!bundle.empty()) {
                emit({{"holonomy", cplx(transgress_line(line_bundle_from_json(load_json_file(bundle)))(g))}}, out);
            } else {
                throw StructuralError("transgress needs --gerbe or --bundle");
            }
            return 0;
        }
        if (curv->parsed()) {
            auto g = gerbe_from_json(load_json_file(gerbe));
            auto dd = dd_pairing(g, tol > 0 ? tol : 1e-6);
            Json r{{"dd", dd.value}, {"raw", dd.raw}, {"snap_distance", dd.snap_distance}};
            bool ok = true;
            if (!loop.empty()) {
                if (vx.empty() || vy.empty()) {
                    throw StructuralError("curvature --loop needs --x and --y");
                }
                auto l = loop_from_json(load_json_file(loop));
                auto x = smooth_map_from_json(load_json_file(vx));
                auto y = smooth_map_from_json(load_json_file(vy));
                Json rows = Json::array();
                double prev = -1.0;
                for (double e : eps) {
                    auto c = tg_curvature_check(g, l, x, y, e);
                    bool row_ok = c.defect < 10 * e && (prev < 0 || c.defect < 0.6 * prev || c.defect < 1e-10);
                    ok = ok && row_ok;
                    rows.push_back({{"eps", e}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"defect", c.defect}, {"pass", row_ok}});
                    prev = c.defect;
                }
                r["curvature_check"] = rows;
                r["pass"] = ok;
            }
            emit(r, out);
            return ok ? 0 : 1;
        }
        if (eta->parsed()) {
            auto heat = eta_heat_oracle(a);
            auto t = tau(a);
            emit({{"a", a},
                  {"eta", eta_invariant(a)},
                  {"heat_oracle", heat.value},
                  {"heat_error_bound", heat.error_bound},
                  {"kernel_dim", kernel_dim(a)},
                  {"tau", cplx(t)}},
                 out);
            return 0;
        }
        if (sf->parsed()) {
            auto fam = family_from_json(load_json_file(family));
            auto p = smooth_map_from_json(load_json_file(path));
            emit({{"spectral_flow", spectral_flow(fam, p, t0, t1)}}, out);
            return 0;
        }
        if (ig->parsed()) {
            auto fam = family_from_json(load_json_file(family));
            Cover cover = Cover::standard(fam.base_dim);
            Json cj = cuts.empty() ? Json{{"auto", true}} : load_json_file(cuts);
            auto sc = cuts_from_json(cj, fam, cover);
            auto g = index_gerbe_build(fam, cover, sc);
            auto ax = check_gerbe_axioms(g, tol > 0 ? tol : 1e-9);
            Json r{{"cuts", to_json(sc)}, {"integrality", ax.integrality}, {"parallel", ax.parallel},
                   {"curvature", ax.curvature}, {"ok", ax.ok}};
            if (!out.empty()) {
                write_text(out, to_json(g).dump(2) + "\n");
                r["gerbe"] = out;
            }
            std::cout << r.dump(2) << "\n";
            return ax.ok ? 0 : 1;
        }
        if (run->parsed()) {
            auto rep = run_scenario(scenario);
            std::cout << report_table(rep);
            if (!out.empty()) {
                write_text(out, to_json(rep).dump(2) + "\n");
            }
            return rep.pass ? 0 : 1;
        }
        if (ver->parsed()) {
            VerifyOptions o;
            o.level = parse_level(level);
            o.seed = seed;
            o.inject_dtot_defect = inject;
            o.only = only;
            auto rep = verify_suite(o);
            std::cout << summary_table(rep);
            std::string json = to_json(rep).dump(2) + "\n";
            bool ok = rep.pass;
            if (repeat) {
                bool same = to_json(verify_suite(o)).dump(2) + "\n" == json;
                std::cout << (same ? "second run: bit-identical JSON\n" : "second run: JSON DIFFERS\n");
                ok = ok && same;
            }
            if (!out.empty()) {
                write_text(out, json);
            }
            if (!csv.empty()) {
                write_text(csv, residual_csv(rep));
            }
            return ok ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "loopgerbe: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "loopgerbe: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
