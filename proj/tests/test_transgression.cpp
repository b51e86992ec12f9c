#include <doctest.h>

#include <cmath>

#include "loopgerbe/error.hpp"
#include "loopgerbe/random.hpp"
#include "loopgerbe/transgression.hpp"

using namespace loopgerbe;

namespace {

double dist(std::complex<double> a, std::complex<double> b) { return std::abs(a - b); }

double mod1(double x) { return x - std::round(x); }

/// Standard gerbe altered by random line bundles, sections and a global 2-form.
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

GluedForm global_form(const Cover& cover, const LiftedForm& w)
{
    std::vector<ChartForm> charts;
    for (int m = 0; m < cover.size(); ++m) {
        charts.emplace_back(w.with_box(cover.chart(m)));
    }
    return glue(cover, std::move(charts));
}

CylinderMap height_torus(double z)
{
    return CylinderMap(SmoothMap::poly(2, 3, {TrigPoly::coordinate(2, 0), TrigPoly::coordinate(2, 1), TrigPoly::constant(2, z)}));
}

LoopOfLoops gentle_cylinder(Rng& rng)
{
    return LoopOfLoops(random_cylinder(3, {1, 0, 0}, {0, 1, 1}, rng, 0.015, 1));
}

/// Variants of a loop-space chart obtained by changing one label at a time.
std::vector<LoopChart> chart_variants(const Cover& cover, const ClosedPath& loop, const LoopChart& base, int count)
{
    std::vector<LoopChart> out{base};
    for (int i = 0; i < base.n() && static_cast<int>(out.size()) < count; ++i) {
        for (int c = 0; c < cover.size(); ++c) {
            LoopChart v = out.back();
            if (c == v.s[i]) {
                continue;
            }
            v.s[i] = c;
            if (chart_violation(cover, loop, v, ChartConvention::LoopSpace) == 0.0) {
                out.push_back(v);
                break;
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("loop-space charts")
{
    auto g = standard_gerbe(1);
    ClosedPath point(make_loop(3, {0, 0, 0}, {0.0, 1.0 / 3.0, 2.0 / 3.0}));
    CHECK(find_loopspace_chart(g, point).n() == 1);
    ClosedPath coord(make_loop(3, {0, 0, 1}, {0.1, 0.2, 0.0}));
    auto c = find_loopspace_chart(g, coord);
    CHECK(c.n() > 1);
    CHECK(chart_violation(g.cover, coord, c, ChartConvention::LoopSpace) == 0.0);
    Rng rng(11);
    for (int k = 0; k < 20; ++k) {
        ClosedPath loop(random_loop(3, {k % 2, 1, (k / 2) % 2}, rng));
        CHECK_NOTHROW(find_loopspace_chart(g, loop));
    }
}

TEST_CASE("transition maps")
{
    Rng rng(3);
    auto g = bumpy_gerbe(1, rng);
    ClosedPath loop(random_loop(3, {0, 1, 1}, rng));
    auto base = find_loopspace_chart(g, loop);
    auto charts = chart_variants(g.cover, loop, base, 5);
    REQUIRE(charts.size() >= 3);
    CHECK(tg_transition_phase(g, loop, base, base) == 0.0);
    for (std::size_t a = 0; a < charts.size(); ++a) {
        for (std::size_t b = 0; b < charts.size(); ++b) {
            auto ab = tg_transition(g, loop, charts[a], charts[b]);
            auto ba = tg_transition(g, loop, charts[b], charts[a]);
            CHECK(dist(ab * ba, 1.0) < 1e-10);
            for (std::size_t c = 0; c < charts.size(); ++c) {
                auto bc = tg_transition(g, loop, charts[b], charts[c]);
                auto ca = tg_transition(g, loop, charts[c], charts[a]);
                CHECK(dist(ab * bc * ca, 1.0) < 1e-9);
            }
        }
    }
    LoopChart other = base;
    other.t.back() += 1e-3;
    CHECK_THROWS_AS(tg_transition(g, loop, base, other), StructuralError);
}

TEST_CASE("parallel transport")
{
    Rng rng(5);
    auto g = bumpy_gerbe(1, rng);
    LoopOfLoops still(cylinder_from_loop(random_loop(3, {0, 1, 0}, rng)));
    auto chart = find_cylinder_chart(g.cover, still);
    CHECK(tg_transport_phase(g, still, 0.1, 0.4, chart.slice(0)) == 0.0);

    auto path = gentle_cylinder(rng);
    auto cc = find_cylinder_chart(g.cover, path);
    double u0 = cc.u[1], u1 = cc.u_end(1), mid = 0.5 * (u0 + u1);
    auto slice = cc.slice(1);
    double whole = tg_transport_phase(g, path, u0, u1, slice);
    double parts = tg_transport_phase(g, path, u0, mid, slice) + tg_transport_phase(g, path, mid, u1, slice);
    CHECK(std::abs(whole - parts) < 1e-10);
    CHECK(std::abs(whole + tg_transport_phase(g, path, u1, u0, slice)) < 1e-10);
}

TEST_CASE("composed and direct surface holonomy agree")
{
    Rng rng(21);
    const IVec ws[] = {{1, 0, 0}, {1, 1, 0}, {0, 0, 1}};
    const IVec wt[] = {{0, 1, 1}, {0, 0, 1}, {1, 1, 0}};
    for (int r = 0; r < 3; ++r) {
        auto g = bumpy_gerbe(r - 1, rng);
        LoopOfLoops path(random_cylinder(3, ws[r], wt[r], rng));
        auto c = surface_holonomy_composed(g, path);
        auto d = surface_holonomy_direct(g, path);
        CHECK(d.chart.m() != c.chart.m());
        CHECK(dist(c.value, d.value) < 1e-8);
    }
    auto triv = trivial_gerbe(Cover::standard(3));
    CHECK(dist(surface_holonomy_composed(triv, gentle_cylinder(rng)).value, 1.0) == 0.0);
    LoopOfLoops still(cylinder_from_loop(random_loop(3, {1, 0, 1}, rng)));
    CHECK(dist(surface_holonomy_composed(standard_gerbe(2), still).value, 1.0) < 1e-12);
}

TEST_CASE("surface holonomy is chart and refinement independent")
{
    Rng rng(8);
    auto g = bumpy_gerbe(1, rng);
    auto path = gentle_cylinder(rng);
    auto ref = surface_holonomy_composed(g, path);
    CylinderSearch alt;
    alt.min_m = ref.chart.m() + 3;
    alt.min_n = ref.chart.n() + 2;
    alt.prefer_high = true;
    auto other = surface_holonomy_composed(g, path, find_cylinder_chart(g.cover, path, alt));
    CHECK(dist(ref.value, other.value) < 1e-8);

    auto h = bumpy_gerbe(2, rng);
    LoopOfLoops torus(height_torus(0.37));
    Cover fine = Cover::refined_standard(3);
    auto hr = refine(h, fine, find_refinement(fine, h.cover));
    CHECK(dist(surface_holonomy_composed(h, torus).value, surface_holonomy_composed(hr, torus).value) < 1e-8);
}

TEST_CASE("multiplicativity and isomorphism invariance")
{
    Rng rng(13);
    auto g1 = bumpy_gerbe(1, rng);
    auto g2 = bumpy_gerbe(-2, rng);
    auto path = gentle_cylinder(rng);
    auto chart = find_cylinder_chart(g1.cover, path);
    auto h1 = surface_holonomy_composed(g1, path, chart).value;
    auto h2 = surface_holonomy_composed(g2, path, chart).value;
    CHECK(dist(surface_holonomy_composed(product(g1, g2), path, chart).value, h1 * h2) < 1e-9);
    CHECK(dist(surface_holonomy_composed(inverse(g1), path, chart).value, std::conj(h1)) < 1e-9);

    auto mb = modify_by_line_bundles(g1, random_cochain(g1.cover, 0, 1, rng));
    CHECK(check_gerbe_axioms(mb, 1e-9).ok);
    CHECK(dist(surface_holonomy_composed(mb, path).value, h1) < 1e-8);
    auto ms = modify_by_sections(g1, random_cochain(g1.cover, 1, 0, rng, true));
    CHECK(dist(surface_holonomy_composed(ms, path).value, h1) < 1e-8);
}

TEST_CASE("height torus and homotopies")
{
    for (int k : {1, 2}) {
        auto g = standard_gerbe(k);
        LoopOfLoops t0(height_torus(0.15)), t1(height_torus(0.6));
        auto ratio = surface_holonomy_direct(g, t1).value / surface_holonomy_direct(g, t0).value;
        CHECK(dist(ratio, unit_phase(k * 0.45)) < 1e-8);
    }
    // H(u,s,t) = (s, t, z0 + u dz) + u W(s,t).
    Rng rng(17);
    auto g = standard_gerbe(1);
    const std::array<int, 2> axes{1, 2};
    std::vector<TrigPoly> base = {TrigPoly::coordinate(2, 0), TrigPoly::coordinate(2, 1), TrigPoly::constant(2, 0.2)};
    std::vector<TrigPoly> h, top;
    for (int i = 0; i < 3; ++i) {
        TrigPoly w = random_trig_poly(2, rng, 3, 1) * 0.03;
        if (i == 2) {
            w += TrigPoly::constant(2, 0.3);
        }
        h.push_back(base[i].embedded(3, axes) + TrigPoly::coordinate(3, 0) * w.embedded(3, axes));
        top.push_back(base[i] + w);
    }
    HomotopyMap hom(SmoothMap::poly(3, 3, h));
    auto r = gerbe_curvature(g);
    double vol = volume_integral(*r.exact, hom);
    auto ratio = surface_holonomy_composed(g, LoopOfLoops(CylinderMap(SmoothMap::poly(2, 3, top)))).value /
                 surface_holonomy_composed(g, LoopOfLoops(height_torus(0.2))).value;
    CHECK(dist(ratio, unit_phase(vol)) < 1e-7);
}

TEST_CASE("pullback functoriality")
{
    Rng rng(23);
    auto g = bumpy_gerbe(1, rng);
    auto f = affine_trig_map(3, 3, {{1, 0, 0}, {1, 1, 0}, {0, 0, 1}}, {0.05, 0.0, 0.1},
                             {FourierTerm{{1, 0, 0}, {0.0, 0.01, 0.0}, {0.01, 0.0, 0.0}}});
    auto pg = pullback_gerbe(g, f);
    auto cyl = random_cylinder(3, {1, 0, 0}, {0, 1, 0}, rng, 0.015, 1);
    LoopOfLoops direct(cyl);
    LoopOfLoops pushed(CylinderMap(SmoothMap::compose(f, cyl.map)));
    CHECK(dist(surface_holonomy_composed(pg, direct).value, surface_holonomy_composed(g, pushed).value) < 1e-8);
}

TEST_CASE("form transgression")
{
    auto loop = make_loop(3, {0, 0, 1}, {0.3, 0.1, 0.0});
    auto e1 = vector_field(3, {1, 0, 0}), e2 = vector_field(3, {0, 1, 0});
    auto vol = global_form(Cover::standard(3), LiftedForm::from_component(3, 0b111, TrigPoly::constant(3, 1.0), Box::unit(3)));
    CHECK(transgress_form(vol, loop, e1, &e2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(transgress_form(vol, loop, e1, &e1)) < 1e-15);
    CHECK_THROWS_AS(transgress_form(vol, loop, e1), StructuralError);

    Rng rng(29);
    auto omega = random_form(3, 3, Box::unit(3), rng, false);
    auto rl = random_loop(3, {1, 0, 1}, rng);
    auto x = vector_field(3, {0.2, 1.0, -0.3}, {FourierTerm{{1, 0, 0}, {0.1, 0.0, 0.2}, {0.0, 0.3, 0.0}}});
    auto y = vector_field(3, {1.0, 0.1, 0.4});
    auto glued = global_form(Cover::standard(3), omega);
    double value = transgress_form(glued, rl, x, &y);
    // Trapezoid oracle: spectrally accurate for periodic integrands.
    const int n = 4096;
    double trap = 0.0;
    for (int i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / n;
        Vec p;
        Jacobian j;
        rl.map.eval_with_jacobian({t, 0, 0}, p, j);
        std::array<Vec, 3> v{j[0], x.eval({t, 0, 0}), y.eval({t, 0, 0})};
        trap += omega.eval(p, std::span<const Vec>(v.data(), 3)) / n;
    }
    CHECK(std::abs(value - trap) < 1e-9);
}

TEST_CASE("curvature of the transgressed bundle")
{
    auto g = standard_gerbe(1);
    auto loop = make_loop(3, {0, 0, 1}, {0.1, 0.2, 0.0});
    auto e1 = vector_field(3, {1, 0, 0}), e2 = vector_field(3, {0, 1, 0});
    for (double eps : {0.04, 0.02, 0.01}) {
        auto c = tg_curvature_check(g, loop, e1, e2, eps);
        CHECK(c.defect < 10 * eps);
        CHECK(c.rhs == doctest::Approx(-kTwoPi));
    }
    auto same = tg_curvature_check(g, loop, e1, e1, 0.02);
    CHECK(std::abs(same.lhs) < 1e-9);
    CHECK(std::abs(same.rhs) < 1e-12);
    auto flat = tg_curvature_check(trivial_gerbe(Cover::standard(3)), loop, e1, e2, 0.02);
    CHECK(flat.lhs == 0.0);
    CHECK(flat.rhs == 0.0);
    CHECK_THROWS_AS(tg_curvature_check(g, loop, e1, e2, 0.1), StructuralError);

    Rng rng(5);
    auto rl = random_loop(3, {0, 0, 1}, rng);
    auto x = vector_field(3, {0.3, 1, 0.2}, {FourierTerm{{1, 0, 0}, {0.2, 0, 0.1}, {0, 0.3, 0}}});
    auto y = vector_field(3, {1, -0.2, 0.1});
    double prev = 0.0;
    for (double eps : {0.04, 0.02, 0.01}) {
        auto c = tg_curvature_check(g, rl, x, y, eps);
        CHECK(c.defect < 10 * eps);
        if (prev > 0.0) {
            CHECK(c.defect < 0.6 * prev);
        }
        prev = c.defect;
    }
}

TEST_CASE("loop of loops validation")
{
    auto a = SmoothMap::poly(2, 3, {TrigPoly::coordinate(2, 0) * 0.5, TrigPoly::coordinate(2, 1), TrigPoly(2)});
    CHECK_THROWS_AS(LoopOfLoops(std::vector<SmoothMap>{a}), StructuralError);
    auto b = SmoothMap::poly(2, 3, {TrigPoly::coordinate(2, 0) * 0.5 + TrigPoly::constant(2, 0.5), TrigPoly::coordinate(2, 1), TrigPoly(2)});
    LoopOfLoops two(std::vector<SmoothMap>{a, b});
    CHECK(mod1(two.eval(0.75, 0.0)[0] - 0.75) == doctest::Approx(0.0));
    CHECK(two.locate(0.5, true) == std::pair<int, double>(0, 1.0));
}
