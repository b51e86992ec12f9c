#include <doctest.h>

#include <cmath>

#include "loopgerbe/error.hpp"
#include "loopgerbe/line_bundle.hpp"
#include "loopgerbe/random.hpp"

using namespace loopgerbe;

namespace {

/// Adds the same periodic 1-form to every chart (changes the curvature by d omega).
LineBundleData with_global_form(LineBundleData l, const LiftedForm& omega)
{
    for (int m = 0; m < l.cover.size(); ++m) {
        l.a.at({m}, 0) += ChartForm(omega.with_box(l.cover.chart(m)));
    }
    return l;
}

LineBundleData bumpy_bundle(int k, Rng& rng)
{
    auto omega = random_form(2, 1, Box::unit(2), rng, false) * 0.2;
    return with_global_form(standard_line_bundle(k), omega);
}

double dist(std::complex<double> a, std::complex<double> b) { return std::abs(a - b); }

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

} // namespace

TEST_CASE("standard line bundles and Chern numbers")
{
    auto l0 = standard_line_bundle(0);
    for (const auto& [t, vals] : l0.q.values) {
        for (const auto& v : vals) {
            CHECK(v.base().is_zero());
        }
    }
    CHECK(chern_number(l0).value == 0);
    for (int k : {-2, 1, 5}) {
        auto c = chern_number(standard_line_bundle(k));
        CHECK(c.value == k);
        CHECK(c.snap_distance < 1e-9);
        CHECK(check_line_axioms(standard_line_bundle(k), 1e-10).ok);
    }
    CHECK(chern_number(tensor(standard_line_bundle(2), standard_line_bundle(-5))).value == -3);
    CHECK(chern_number(dual(standard_line_bundle(4))).value == -4);
    Rng rng(2);
    auto bumpy = bumpy_bundle(3, rng);
    auto c = chern_number(bumpy);
    CHECK(c.value == 3);
    CHECK(c.snap_distance < 1e-9);
}

TEST_CASE("loop charts")
{
    Cover cover = Cover::standard(2);
    auto constant = make_loop(2, {0, 0, 0}, {0.01, 0.35, 0});
    auto c = find_loop_chart(cover, ClosedPath(constant), ChartConvention::Line);
    CHECK(c.n() == 1);
    auto coord = make_loop(2, {1, 0, 0}, {0.0, 0.3, 0});
    auto c2 = find_loop_chart(cover, ClosedPath(coord), ChartConvention::Line);
    CHECK(c2.n() == 3);
    Rng rng(4);
    for (int i = 0; i < 5; ++i) {
        auto loop = random_loop(2, {1, 2, 0}, rng, 0.1);
        auto ch = find_loop_chart(cover, ClosedPath(loop), ChartConvention::Line);
        CHECK(chart_violation(cover, ClosedPath(loop), ch, ChartConvention::Line, 257) == 0.0);
    }
}

TEST_CASE("holonomy invariances")
{
    Rng rng(17);
    auto l = bumpy_bundle(2, rng);
    Cover fine = Cover::refined_standard(2);
    auto lr = refine(l, fine, find_refinement(fine, l.cover));
    auto g = random_cochain(l.cover, 0, 0, rng, true);
    auto lg = gauge_transform(l, g);
    CHECK(check_line_axioms(lg, 1e-10).ok);
    for (int i = 0; i < 20; ++i) {
        IVec w{static_cast<int>(i % 3) - 1, static_cast<int>(i % 2), 0};
        auto loop = random_loop(2, w, rng, 0.08);
        ClosedPath path(loop);
        auto h = holonomy(l, path);
        ChartSearch other;
        other.min_n = h.chart.n() + 2;
        other.prefer_high = true;
        auto chart2 = find_loop_chart(l.cover, path, ChartConvention::Line, other);
        CHECK(dist(holonomy(l, path, chart2).value, h.value) < 1e-9);
        CHECK(dist(holonomy(lr, path).value, h.value) < 1e-9);
        CHECK(dist(holonomy(lg, path).value, h.value) < 1e-9);
        auto phi = random_reparametrization(rng);
        CHECK(dist(holonomy(l, reparametrized(loop, phi)).value, h.value) < 1e-9);
    }
}

TEST_CASE("tensor, dual and pullback")
{
    Rng rng(8);
    auto l1 = standard_line_bundle(1);
    auto l3 = standard_line_bundle(3);
    auto cube = tensor(tensor(l1, l1), l1);
    auto bumpy = bumpy_bundle(1, rng);
    auto inv = tensor(bumpy, dual(bumpy));
    auto t = transgress_line(l1);
    auto t2 = transgress_line(tensor(l1, bumpy));
    auto tb = transgress_line(bumpy);
    for (int i = 0; i < 20; ++i) {
        auto loop = random_loop(2, {1, -1, 0}, rng, 0.1);
        CHECK(dist(holonomy(l3, loop).value, holonomy(cube, loop).value) < 1e-9);
        CHECK(dist(holonomy(inv, loop).value, 1.0) < 1e-10);
        CHECK(dist(t2(loop), t(loop) * tb(loop)) < 1e-9);
    }
    CHECK(dist(holonomy(trivial_line_bundle(Cover::standard(2)), random_loop(2, {1, 1, 0}, rng)).value, 1.0) == 0.0);

    auto id = pullback(bumpy, SmoothMap::identity(2));
    // A torus map with integer linear part and a small periodic perturbation.
    FourierTerm ft;
    ft.freq = {1, 1, 0};
    ft.amp_sin = {0.03, -0.02, 0};
    auto f = affine_trig_map(2, 2, {IVec{1, 1, 0}, IVec{0, 1, 0}}, {0.05, 0.1, 0}, {ft});
    auto pulled = pullback(bumpy, f);
    CHECK(chern_number(pullback(l1, f)).value == 1);
    for (int i = 0; i < 10; ++i) {
        auto loop = random_loop(2, {1, 0, 0}, rng, 0.05);
        CHECK(dist(holonomy(id, loop).value, holonomy(bumpy, loop).value) < 1e-12);
        LoopMap image(SmoothMap::compose(f, loop.map));
        CHECK(dist(holonomy(pulled, loop).value, holonomy(bumpy, image).value) < 1e-9);
    }
    CHECK_THROWS_AS(tensor(l1, refine(l1, Cover::refined_standard(2), find_refinement(Cover::refined_standard(2), l1.cover))),
                    StructuralError);
}

TEST_CASE("Stokes and small squares")
{
    Rng rng(23);
    auto l = bumpy_bundle(2, rng);
    GluedForm curv = line_curvature(l);
    FormSampler da = [&](const Vec& y, std::span<const Vec> v) { return curv.eval(y, v); };
    double y0 = 0.1, y1 = 0.62;
    auto hy0 = holonomy(l, make_loop(2, {1, 0, 0}, {0.0, y0, 0}));
    auto hy1 = holonomy(l, make_loop(2, {1, 0, 0}, {0.0, y1, 0}));
    auto band = SmoothMap::poly(2, 2, {TrigPoly::coordinate(2, 1),
                                       TrigPoly::constant(2, y0) + TrigPoly::coordinate(2, 0) * (y1 - y0)});
    double flux = surface_integral(da, band, 0, 1, 0, 1);
    CHECK(dist(hy1.value / hy0.value, unit_phase(-flux)) < 1e-9);

    Vec p0{0.3, 0.45, 0};
    Vec e[2] = {{1, 0, 0}, {0, 1, 0}};
    double r = kTwoPi * curv.eval(p0, e);
    double prev = 0.0;
    for (double eps : {0.04, 0.02, 0.01}) {
        auto h = holonomy(l, square(p0, eps));
        double lhs = -std::arg(h.value) / (eps * eps);
        double defect = std::abs(lhs - r);
        CHECK(defect < 10 * eps * std::abs(r) + 1e-6);
        if (prev > 0.0) {
            CHECK(defect < 0.6 * prev);
        }
        prev = defect;
    }
}
