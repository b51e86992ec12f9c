#include "loopgerbe/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "loopgerbe/error.hpp"
#include "loopgerbe/random.hpp"
#include "loopgerbe/transgression.hpp"

namespace loopgerbe {

namespace {

/// Collects residuals for one criterion.
class Ledger {
public:
    explicit Ledger(CriterionResult& r) : r_(r) {}

    void le(const std::string& label, double value, double tol)
    {
        bool ok = std::isfinite(value) && value <= tol;
        r_.residuals.push_back({label, value, tol, ok});
        r_.pass = r_.pass && ok;
    }
    /// Exact equality of integers, recorded as |a - b| with tolerance 0.
    void eq(const std::string& label, long long a, long long b) { le(label, static_cast<double>(std::llabs(a - b)), 0.0); }
    void truth(const std::string& label, bool ok) { le(label, ok ? 0.0 : 1.0, 0.0); }

private:
    CriterionResult& r_;
};

bool full(const VerifyOptions& o) { return o.level == VerifyLevel::Full; }

double dist(std::complex<double> a, std::complex<double> b) { return std::abs(a - b); }

std::string idx(const char* stem, int i) { return std::string(stem) + "[" + std::to_string(i) + "]"; }

double max_coeff(const CechCochain& c)
{
    double worst = 0.0;
    for (const auto& [t, vals] : c.values) {
        for (const auto& v : vals) {
            worst = std::max(worst, v.base().max_abs_coeff());
            for (const auto& [k, f] : v.weighted_terms()) {
                worst = std::max(worst, f.max_abs_coeff());
            }
        }
    }
    return worst;
}

double max_coeff(const TotalCochain& c)
{
    double worst = 0.0;
    for (const auto& p : c.parts) {
        worst = std::max(worst, max_coeff(p));
    }
    return worst;
}

TotalCochain random_total(const Cover& cover, int degree, int trunc, Rng& rng)
{
    TotalCochain c;
    c.degree = degree;
    c.truncation = trunc;
    for (int j = 0; j <= std::min(degree, trunc); ++j) {
        c.parts.push_back(random_cochain(cover, degree - j, j, rng, j == 0));
    }
    return c;
}

LineBundleData bumpy_bundle(int k, Rng& rng)
{
    auto l = standard_line_bundle(k);
    auto omega = random_form(2, 1, Box::unit(2), rng, false) * 0.2;
    for (int m = 0; m < l.cover.size(); ++m) {
        l.a.at({m}, 0) += ChartForm(omega.with_box(l.cover.chart(m)));
    }
    return l;
}

GerbeData bumpy_gerbe(int k, Rng& rng)
{
    auto g = standard_gerbe(k);
    g = modify_by_line_bundles(g, random_cochain(g.cover, 0, 1, rng) * 0.3);
    g = modify_by_sections(g, random_cochain(g.cover, 1, 0, rng, true) * 0.3);
    auto omega = random_form(3, 2, Box::unit(3), rng, false) * 0.2;
    for (int m = 0; m < g.cover.size(); ++m) {
        g.F.at({m}, 0) += ChartForm(omega.with_box(g.cover.chart(m)));
    }
    return g;
}

CylinderMap height_torus(double z)
{
    return CylinderMap(SmoothMap::poly(2, 3, {TrigPoly::coordinate(2, 0), TrigPoly::coordinate(2, 1), TrigPoly::constant(2, z)}));
}

ClosedPath square(const Vec& p0, double eps)
{
    std::vector<SmoothMap> pieces;
    Vec c[5] = {p0, {p0[0] + eps, p0[1], 0}, {p0[0] + eps, p0[1] + eps, 0}, {p0[0], p0[1] + eps, 0}, p0};
    for (int j = 0; j < 4; ++j) {
        pieces.push_back(SmoothMap::poly(
            1, 2,
            {TrigPoly::constant(1, c[j][0]) + TrigPoly::coordinate(1, 0) * (c[j + 1][0] - c[j][0]),
             TrigPoly::constant(1, c[j][1]) + TrigPoly::coordinate(1, 0) * (c[j + 1][1] - c[j][1])}));
    }
    return ClosedPath(pieces);
}

/// Linear homotopy (u, t) -> (1-u) g0(t) + u g1(t) between loops of equal winding.
SmoothMap straight_band(const LoopMap& g0, const LoopMap& g1)
{
    const std::array<int, 1> axis{1};
    std::vector<TrigPoly> comps;
    for (int i = 0; i < g0.dim(); ++i) {
        TrigPoly a = g0.map.components()[i].embedded(2, axis);
        TrigPoly b = g1.map.components()[i].embedded(2, axis);
        comps.push_back(a + TrigPoly::coordinate(2, 0) * (b - a));
    }
    return SmoothMap::poly(2, g0.dim(), comps);
}

void c1_cech(const VerifyOptions& o, Ledger& L)
{
    Rng rng(o.seed + 101);
    const int n = full(o) ? 50 : 20;
    const Cover covers[2] = {Cover::standard(2), Cover::standard(3)};
    double dd = 0.0, dtot = 0.0;
    for (int i = 0; i < n; ++i) {
        const Cover& cover = covers[i % 5 == 4 ? 1 : 0];
        if (i % 2 == 0) {
            int p = (i / 2) % 2;
            auto c = random_cochain(cover, p, (i / 4) % 3 % cover.dim(), rng, false);
            dd = std::max(dd, max_coeff(cech_delta(cech_delta(c))));
        } else {
            // The nerve stores quadruples, so d_tot^2 is taken from degrees 0 and 1.
            int degree = (i / 2) % 2;
            auto c = random_total(cover, degree, 1 + (i / 4) % 2, rng);
            dtot = std::max(dtot, max_coeff(d_total(d_total(c, o.inject_dtot_defect), o.inject_dtot_defect)));
        }
    }
    L.le("delta^2", dd, 1e-12);
    L.le("d_tot^2", dtot, 1e-12);
}

void c2_deligne(const VerifyOptions&, Ledger& L)
{
    for (int k : {-2, 0, 1, 3}) {
        L.le("l_B k=" + std::to_string(k), is_cocycle(line_cocycle(standard_line_bundle(k)), 1e-10).max_residual, 1e-10);
        L.le("g_B k=" + std::to_string(k), is_cocycle(gerbe_cocycle(standard_gerbe(k)), 1e-10).max_residual, 1e-10);
    }
}

void c3_integrality(const VerifyOptions& o, Ledger& L)
{
    for (int k : {-2, 0, 1, 3}) {
        auto c = chern_number(standard_line_bundle(k));
        L.eq("chern k=" + std::to_string(k), c.value, k);
        L.le("chern snap k=" + std::to_string(k), c.snap_distance, 1e-9);
        auto d = dd_pairing(standard_gerbe(k));
        L.eq("dd k=" + std::to_string(k), d.value, k);
        L.le("dd snap k=" + std::to_string(k), d.snap_distance, 1e-9);
    }
    Rng rng(o.seed + 301);
    auto bumpy = bumpy_bundle(2, rng);
    L.eq("chern bumpy", chern_number(bumpy).value, 2);
    L.eq("chern tensor 2+(-5)", chern_number(tensor(standard_line_bundle(2), standard_line_bundle(-5))).value, -3);
    L.eq("chern dual", chern_number(dual(standard_line_bundle(4))).value, -4);
    L.eq("dd product 1+2", dd_pairing(product(standard_gerbe(1), standard_gerbe(2))).value, 3);
    L.eq("dd inverse", dd_pairing(inverse(standard_gerbe(2))).value, -2);
}

void c4_line_holonomy(const VerifyOptions& o, Ledger& L)
{
    Rng rng(o.seed + 401);
    auto l = bumpy_bundle(2, rng);
    Cover fine = Cover::refined_standard(2);
    auto lr = refine(l, fine, find_refinement(fine, l.cover));
    auto lg = gauge_transform(l, random_cochain(l.cover, 0, 0, rng, true));
    const int n = full(o) ? 20 : 6;
    double chart = 0, ref = 0, gauge = 0, rep = 0;
    for (int i = 0; i < n; ++i) {
        IVec w{i % 3 - 1, i % 2, 0};
        auto loop = random_loop(2, w, rng, 0.08);
        ClosedPath path(loop);
        auto h = holonomy(l, path);
        ChartSearch other;
        other.min_n = h.chart.n() + 2;
        other.prefer_high = true;
        chart = std::max(chart, dist(holonomy(l, path, find_loop_chart(l.cover, path, ChartConvention::Line, other)).value, h.value));
        ref = std::max(ref, dist(holonomy(lr, path).value, h.value));
        gauge = std::max(gauge, dist(holonomy(lg, path).value, h.value));
        rep = std::max(rep, dist(holonomy(l, reparametrized(loop, random_reparametrization(rng))).value, h.value));
    }
    L.le("chart independence", chart, 1e-9);
    L.le("refinement invariance", ref, 1e-9);
    L.le("gauge invariance", gauge, 1e-9);
    L.le("reparametrization invariance", rep, 1e-9);
}

void c5_stokes(const VerifyOptions& o, Ledger& L)
{
    Rng rng(o.seed + 501);
    auto l = bumpy_bundle(2, rng);
    GluedForm curv = line_curvature(l);
    FormSampler da = [&](const Vec& y, std::span<const Vec> v) { return curv.eval(y, v); };
    const int n = full(o) ? 4 : 2;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        IVec w{1, i % 2, 0};
        auto g0 = random_loop(2, w, rng, 0.05);
        auto g1 = random_loop(2, w, rng, 0.05);
        double flux = surface_integral(da, straight_band(g0, g1), 0, 1, 0, 1);
        auto ratio = holonomy(l, g1).value / holonomy(l, g0).value;
        worst = std::max(worst, dist(ratio, unit_phase(-flux)));
    }
    L.le("homotopic hol ratio vs exp(-int R)", worst, 1e-9);

    Vec p0{0.3, 0.45, 0};
    Vec e[2] = {{1, 0, 0}, {0, 1, 0}};
    double r = kTwoPi * curv.eval(p0, e);
    std::vector<double> eps = full(o) ? std::vector<double>{0.04, 0.02, 0.01} : std::vector<double>{0.04, 0.02};
    double prev = 0.0;
    for (double ep : eps) {
        auto h = holonomy(l, square(p0, ep));
        double defect = std::abs(-std::arg(h.value) / (ep * ep) - r);
        std::ostringstream tag;
        tag << "small square eps=" << ep;
        L.le(tag.str() + " defect/(10 eps |R|)", defect / (10 * ep * std::abs(r)), 1.0);
        if (prev > 0.0) {
            L.le(tag.str() + " halving ratio", defect / prev, 0.6);
        }
        prev = defect;
    }
}

void c6_surface(const VerifyOptions& o, Ledger& L)
{
    Rng rng(o.seed + 601);
    const IVec ws[] = {{1, 0, 0}, {1, 1, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 1}};
    const IVec wt[] = {{0, 1, 1}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 0}};
    const int n = full(o) ? 10 : 2;
    double worst = 0.0;
    for (int r = 0; r < n; ++r) {
        auto g = bumpy_gerbe(r % 4 - 1, rng);
        LoopOfLoops path(random_cylinder(3, ws[r % 5], wt[r % 5], rng, 0.02, 1));
        auto c = surface_holonomy_composed(g, path);
        auto d = surface_holonomy_direct(g, path);
        worst = std::max(worst, dist(c.value, d.value));
    }
    L.le("direct vs composed", worst, 1e-8);

    auto g = bumpy_gerbe(1, rng);
    LoopOfLoops path(random_cylinder(3, {1, 0, 0}, {0, 1, 1}, rng, 0.015, 1));
    auto ref = surface_holonomy_composed(g, path);
    CylinderSearch alt;
    alt.min_m = ref.chart.m() + 3;
    alt.min_n = ref.chart.n() + 2;
    alt.prefer_high = true;
    L.le("chart independence", dist(ref.value, surface_holonomy_composed(g, path, find_cylinder_chart(g.cover, path, alt)).value), 1e-8);

    auto h = bumpy_gerbe(2, rng);
    LoopOfLoops torus(height_torus(0.37));
    Cover fine = Cover::refined_standard(3);
    auto hr = refine(h, fine, find_refinement(fine, h.cover));
    L.le("refinement independence", dist(surface_holonomy_composed(h, torus).value, surface_holonomy_composed(hr, torus).value), 1e-8);
}

void c7_homotopy(const VerifyOptions& o, Ledger& L)
{
    for (int k : {1, 2}) {
        auto g = standard_gerbe(k);
        double z0 = 0.15, z1 = 0.6;
        auto ratio = surface_holonomy_direct(g, LoopOfLoops(height_torus(z1))).value /
                     surface_holonomy_direct(g, LoopOfLoops(height_torus(z0))).value;
        L.le("coordinate homotopy k=" + std::to_string(k), dist(ratio, unit_phase(k * (z1 - z0))), 1e-8);
    }
    Rng rng(o.seed + 701);
    const int n = full(o) ? 5 : 1;
    const std::array<int, 2> axes{1, 2};
    for (int i = 0; i < n; ++i) {
        int k = 1 + i % 2;
        auto g = standard_gerbe(k);
        double z0 = uniform(rng, 0.0, 1.0);
        double dz = uniform(rng, -0.5, 0.5);
        std::vector<TrigPoly> base = {TrigPoly::coordinate(2, 0), TrigPoly::coordinate(2, 1), TrigPoly::constant(2, z0)};
        std::vector<TrigPoly> h, top;
        for (int c = 0; c < 3; ++c) {
            TrigPoly w = random_trig_poly(2, rng, 3, 1) * 0.03;
            if (c == 2) {
                w += TrigPoly::constant(2, dz);
            }
            h.push_back(base[c].embedded(3, axes) + TrigPoly::coordinate(3, 0) * w.embedded(3, axes));
            top.push_back(base[c] + w);
        }
        double vol = volume_integral(*gerbe_curvature(g).exact, HomotopyMap(SmoothMap::poly(3, 3, h)));
        auto ratio = surface_holonomy_composed(g, LoopOfLoops(CylinderMap(SmoothMap::poly(2, 3, top)))).value /
                     surface_holonomy_composed(g, LoopOfLoops(height_torus(z0))).value;
        L.le(idx("random homotopy", i) + " k=" + std::to_string(k), dist(ratio, unit_phase(vol)), 1e-7);
    }
}

void c8_com2(const VerifyOptions& o, Ledger& L)
{
    auto g = standard_gerbe(1);
    Rng rng(o.seed + 801);
    struct Config {
        LoopMap loop;
        SmoothMap x, y;
    };
    std::vector<Config> configs;
    configs.push_back({make_loop(3, {0, 0, 1}, {0.1, 0.2, 0.0}, {}), vector_field(3, {1, 0, 0}), vector_field(3, {0, 1, 0})});
    configs.push_back({random_loop(3, {0, 0, 1}, rng),
                       vector_field(3, {0.3, 1, 0.2}, {FourierTerm{{1, 0, 0}, {0.2, 0, 0.1}, {0, 0.3, 0}}}),
                       vector_field(3, {1, -0.2, 0.1})});
    if (full(o)) {
        configs.push_back({random_loop(3, {1, 0, 1}, rng),
                           vector_field(3, {0.1, 0.8, -0.3}, {FourierTerm{{2, 0, 0}, {0.1, 0.1, 0.0}, {0.0, 0.0, 0.2}}}),
                           vector_field(3, {0.9, 0.0, 0.4}, {FourierTerm{{1, 0, 0}, {0.0, 0.2, 0.0}, {0.1, 0.0, 0.0}}})});
    }
    std::vector<double> eps = full(o) ? std::vector<double>{0.04, 0.02, 0.01} : std::vector<double>{0.04, 0.02};
    for (std::size_t c = 0; c < configs.size(); ++c) {
        double prev = -1.0;
        for (double ep : eps) {
            auto r = tg_curvature_check(g, configs[c].loop, configs[c].x, configs[c].y, ep);
            std::ostringstream tag;
            tag << "config " << c << " eps=" << ep;
            L.le(tag.str() + " defect/(10 eps)", r.defect / (10 * ep), 1.0);
            if (prev >= 0.0) {
                // Exact configurations sit at rounding level from the start.
                bool halves = r.defect < 0.6 * prev || r.defect < 1e-10;
                L.le(tag.str() + " halving", halves ? 0.0 : r.defect / prev, 0.0);
            }
            prev = r.defect;
        }
    }
}

void c9_isomorphism(const VerifyOptions& o, Ledger& L)
{
    Rng rng(o.seed + 901);
    auto g = bumpy_gerbe(1, rng);
    LoopOfLoops path(random_cylinder(3, {1, 0, 0}, {0, 1, 1}, rng, 0.015, 1));
    auto chart = find_cylinder_chart(g.cover, path);
    auto ref = surface_holonomy_composed(g, path, chart).value;
    const int n = full(o) ? 5 : 2;
    for (int i = 0; i < n; ++i) {
        GerbeData m = g;
        if (i % 3 != 1) {
            m = modify_by_line_bundles(m, random_cochain(g.cover, 0, 1, rng) * uniform(rng, 0.2, 1.0));
        }
        if (i % 3 != 0) {
            m = modify_by_sections(m, random_cochain(g.cover, 1, 0, rng, true) * uniform(rng, 0.2, 1.0));
        }
        L.le(idx("modification", i) + " axioms", check_gerbe_axioms(m, 1e-9).ok ? 0.0 : 1.0, 0.0);
        L.le(idx("modification", i) + " holonomy", dist(surface_holonomy_composed(m, path, chart).value, ref), 1e-8);
    }
}

void c10_spectral(const VerifyOptions& o, Ledger& L)
{
    const int n = 50;
    double oracle = 0.0, closed = 0.0, bound = 0.0;
    for (int i = 0; i < n; ++i) {
        double a = (i + 0.5) / n;
        double eta = eta_invariant(a);
        auto heat = eta_heat_oracle(a);
        closed = std::max(closed, std::abs(eta - (1.0 - 2.0 * a)));
        oracle = std::max(oracle, std::abs(heat.value - (1.0 - 2.0 * a)));
        bound = std::max(bound, heat.error_bound);
    }
    L.le("eta (Hurwitz) vs 1-2a", closed, 1e-6);
    L.le("eta (heat series) vs 1-2a", oracle, 1e-6);
    L.le("heat series error bound", bound, 1e-6);
    auto t0 = tau(0.0);
    L.truth("tau(0) == -1 exactly", t0 == std::complex<double>(-1.0, 0.0));
    L.eq("spectral_flow(E1 loop)", spectral_flow(e1_family(), make_loop(1, {1, 0, 0}, {}, {})), 1);
    auto fam = make_family(2, {2, -1, 0}, 0.1, {{{1, 1, 0}, {0.1, 0, 0}, {0, 0, 0}}});
    auto c = cancel_flow(fam);
    L.eq("flow before (b1)", c.before.at(0), 2);
    L.eq("flow before (b2)", c.before.at(1), -1);
    L.eq("flow after (b1)", c.after.at(0), 0);
    L.eq("flow after (b2)", c.after.at(1), 0);
    (void)o;
}

void c11_index(const VerifyOptions& o, Ledger& L)
{
    auto cover = Cover::standard(2);
    LoopOfLoops torus(CylinderMap(SmoothMap::identity(2)));
    auto trivial = make_family(2, {1, 0, 0});
    auto gt = index_gerbe_build(trivial, cover, auto_cuts(trivial, cover));
    auto rt = check_gerbe_axioms(gt, 1e-9);
    L.le("trivial frames axioms", std::max({rt.integrality, rt.parallel, rt.curvature}), 1e-9);
    L.le("trivial frames holonomy", dist(surface_holonomy_composed(gt, torus).value, 1.0), 1e-8);

    Rng rng(o.seed + 1101);
    TrigPoly psi = TrigPoly::coordinate(2, 1) + random_trig_poly(2, rng, 2, 1) * 0.1;
    auto rotating = make_family(2, {1, 0, 0}, uniform(rng, 0.0, 1.0), {}, psi);
    auto g1 = index_gerbe_build(rotating, cover, auto_cuts(rotating, cover));
    auto r1 = check_gerbe_axioms(g1, 1e-9);
    L.le("rotating frames axioms", std::max({r1.integrality, r1.parallel, r1.curvature}), 1e-9);

    std::vector<int> shift(cover.size());
    for (auto& s : shift) {
        s = static_cast<int>(std::floor(uniform(rng, -2.0, 3.0)));
    }
    auto g2 = index_gerbe_build(rotating, cover, auto_cuts(rotating, cover, shift));
    auto r2 = check_gerbe_axioms(g2, 1e-9);
    L.le("shifted cuts axioms", std::max({r2.integrality, r2.parallel, r2.curvature}), 1e-9);
    // The F difference must glue to one global 2-form omega.
    auto diff = g2.F - g1.F;
    std::vector<ChartForm> charts;
    for (int a = 0; a < cover.size(); ++a) {
        charts.push_back(diff.at({a}, 0));
    }
    auto omega = glue(cover, charts);
    L.le("cut change is a global 2-form", omega.overlap_residual(), 1e-9);
    double flux = integrate_glued(omega, Quadrature{16, 4});
    auto ratio = surface_holonomy_composed(g2, torus).value / surface_holonomy_composed(g1, torus).value;
    L.le("holonomy ratio vs exp(2 pi i int omega)", dist(ratio, unit_phase(flux)), 1e-8);
}

using Battery = void (*)(const VerifyOptions&, Ledger&);

const Battery kBatteries[kBatteryCriteria] = {c1_cech,       c2_deligne, c3_integrality, c4_line_holonomy,
                                              c5_stokes,     c6_surface, c7_homotopy,    c8_com2,
                                              c9_isomorphism, c10_spectral, c11_index};

const char* const kNames[] = {"Cech algebra exactness",
                              "Deligne cocycles",
                              "Chern/DD integrality",
                              "line holonomy consistency",
                              "Stokes/curvature oracle",
                              "two-formula surface holonomy",
                              "bounding/homotopy property",
                              "curvature of the transgressed bundle",
                              "gerbe isomorphism invariance",
                              "spectral invariants",
                              "index gerbe pipeline",
                              "determinism"};

} // namespace

VerifyLevel parse_level(const std::string& s)
{
    if (s == "quick") {
        return VerifyLevel::Quick;
    }
    if (s == "full") {
        return VerifyLevel::Full;
    }
    throw StructuralError("verify level must be quick or full, got '" + s + "'");
}

std::string level_name(VerifyLevel l) { return l == VerifyLevel::Quick ? "quick" : "full"; }

std::string criterion_name(int id)
{
    if (id < 1 || id > 12) {
        throw StructuralError("criteria are numbered 1..12");
    }
    return kNames[id - 1];
}

CriterionResult run_criterion(int id, const VerifyOptions& opts)
{
    if (id < 1 || id > kBatteryCriteria) {
        throw StructuralError("battery criteria are numbered 1.." + std::to_string(kBatteryCriteria));
    }
    CriterionResult r;
    r.id = id;
    r.name = criterion_name(id);
    Ledger ledger(r);
    auto start = std::chrono::steady_clock::now();
    try {
        kBatteries[id - 1](opts, ledger);
    } catch (const std::exception& e) {
        r.pass = false;
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

VerifyReport verify_suite(const VerifyOptions& opts)
{
    VerifyReport rep;
    rep.level = opts.level;
    rep.seed = opts.seed;
    for (int id = 1; id <= kBatteryCriteria; ++id) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) {
            continue;
        }
        rep.criteria.push_back(run_criterion(id, opts));
        rep.pass = rep.pass && rep.criteria.back().pass;
    }
    return rep;
}

Json to_json(const VerifyReport& r)
{
    Json crit = Json::array();
    for (const auto& c : r.criteria) {
        Json res = Json::array();
        for (const auto& x : c.residuals) {
            res.push_back({{"label", x.label}, {"value", x.value}, {"tol", x.tol}, {"pass", x.pass}});
        }
        Json entry{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"residuals", res}};
        if (!c.error.empty()) {
            entry["error"] = c.error;
        }
        crit.push_back(entry);
    }
    return {{"level", level_name(r.level)}, {"seed", r.seed}, {"pass", r.pass}, {"criteria", crit}};
}

std::string residual_csv(const VerifyReport& r)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "criterion,label,value,tol,pass\n";
    for (const auto& c : r.criteria) {
        for (const auto& x : c.residuals) {
            os << c.id << ",\"" << x.label << "\"," << x.value << "," << x.tol << "," << (x.pass ? 1 : 0) << "\n";
        }
        if (!c.error.empty()) {
            os << c.id << ",\"error\",nan,0,0\n";
        }
    }
    return os.str();
}

std::string summary_table(const VerifyReport& r)
{
    std::ostringstream os;
    os << "verify " << level_name(r.level) << " (seed " << r.seed << ")\n";
    for (const auto& c : r.criteria) {
        double worst = 0.0;
        for (const auto& x : c.residuals) {
            if (x.tol > 0.0) {
                worst = std::max(worst, x.value / x.tol);
            }
        }
        os << "  [" << std::setw(2) << c.id << "] " << (c.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(38)
           << c.name << std::right << " worst/tol " << std::setprecision(3) << std::scientific << worst
           << std::defaultfloat << "  " << std::fixed << std::setprecision(2) << c.seconds << " s" << std::defaultfloat;
        if (!c.error.empty()) {
            os << "  error: " << c.error;
        }
        os << "\n";
    }
    os << (r.pass ? "all criteria pass\n" : "FAILURES present\n");
    return os.str();
}

} // namespace loopgerbe
