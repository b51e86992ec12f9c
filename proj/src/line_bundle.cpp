#include "loopgerbe/line_bundle.hpp"

#include <cmath>

#include "loopgerbe/error.hpp"

namespace loopgerbe {

std::complex<double> unit_phase(double phase)
{
    double p = phase - std::round(phase);
    return std::polar(1.0, kTwoPi * p);
}

LineBundleData trivial_line_bundle(const Cover& cover)
{
    return {cover, CechCochain::zero(cover, 1, 0, true), CechCochain::zero(cover, 0, 1)};
}

LineBundleData standard_line_bundle(int k, const Cover& cover, int axis_i, int axis_j)
{
    int n = cover.target_dim();
    if (axis_i == axis_j || axis_i < 0 || axis_j < 0 || axis_i >= n || axis_j >= n) {
        throw StructuralError("standard line bundle needs two distinct axes of the torus");
    }
    LineBundleData l = trivial_line_bundle(cover);
    if (k == 0) {
        return l;
    }
    for (int m = 0; m < cover.size(); ++m) {
        const Box& b = cover.chart(m);
        l.a.at({m}, 0) = LiftedForm::function(TrigPoly::coordinate(n, axis_i) * static_cast<double>(-k), b)
                             .wedge(LiftedForm::differential(n, axis_j, b));
    }
    for (auto& [t, vals] : l.q.values) {
        for (std::size_t c = 0; c < vals.size(); ++c) {
            const Box& kb = cover.components(t)[c];
            auto shift = kb.shift_into(cover.chart(t[1]), kBoxTol);
            if (!shift) {
                throw StructuralError("overlap component outside its second chart");
            }
            double jump = static_cast<double>((*shift)[axis_i]);
            vals[c] = LiftedForm::function(TrigPoly::coordinate(n, axis_j) * (k * jump), kb);
        }
    }
    return l;
}

DeligneClassRep line_cocycle(const LineBundleData& l)
{
    DeligneClassRep rep;
    rep.degree = 1;
    rep.truncation = 1;
    rep.parts = {l.q, l.a * -1.0};
    return rep;
}

LineAxiomReport check_line_axioms(const LineBundleData& l, double tol, int grid)
{
    auto r = is_cocycle(line_cocycle(l), tol, grid);
    LineAxiomReport out;
    out.ok = r.ok;
    out.integrality = r.part_residuals.at(0);
    out.compatibility = r.part_residuals.at(1);
    out.worst = r.worst;
    return out;
}

GluedForm line_curvature(const LineBundleData& l)
{
    std::vector<ChartForm> charts;
    for (int m = 0; m < l.cover.size(); ++m) {
        charts.push_back(l.a.at({m}, 0).d());
    }
    return glue(l.cover, std::move(charts));
}

GluedForm chern_form(const LineBundleData& l)
{
    GluedForm g = line_curvature(l);
    for (auto& c : g.charts) {
        c = c * -1.0;
    }
    if (g.exact) {
        g.exact = *g.exact * -1.0;
    }
    return g;
}

IntegerValue chern_number(const LineBundleData& l, double snap_tol)
{
    if (l.dim() != 2) {
        throw StructuralError("Chern number is computed on T^2");
    }
    GluedForm c1 = chern_form(l);
    double raw;
    if (l.cover.pull()) {
        const SmoothMap& f = *l.cover.pull();
        if (f.param_dim() != 2) {
            throw StructuralError("Chern number of a pullback needs a surface");
        }
        raw = surface_integral([&](const Vec& y, std::span<const Vec> v) { return c1.eval(y, v); }, f, 0, 1, 0, 1,
                               Quadrature{16, 1});
    } else {
        raw = integrate_glued(c1, Quadrature{16, 1});
    }
    IntegerValue out;
    out.raw = raw;
    out.value = snap_integer(raw, snap_tol);
    out.snap_distance = std::abs(raw - static_cast<double>(out.value));
    return out;
}

LineBundleData tensor(const LineBundleData& l1, const LineBundleData& l2)
{
    if (!l1.cover.same_as(l2.cover)) {
        throw StructuralError("tensor product needs bundles on the same cover");
    }
    return {l1.cover, l1.q + l2.q, l1.a + l2.a};
}

LineBundleData dual(const LineBundleData& l) { return {l.cover, l.q * -1.0, l.a * -1.0}; }

LineBundleData pullback(const LineBundleData& l, const SmoothMap& f)
{
    LineBundleData out = l;
    out.cover = l.cover.pulled_back(f);
    out.q.cover = out.cover;
    out.a.cover = out.cover;
    return out;
}

LineBundleData gauge_transform(const LineBundleData& l, const CechCochain& g)
{
    if (g.p != 0 || g.q != 0) {
        throw StructuralError("gauge transformation needs a (0,0) cochain");
    }
    // (delta g)_ab = g_b - g_a.
    return {l.cover, l.q - cech_delta(g), l.a + exterior_d(g)};
}

LineBundleData refine(const LineBundleData& l, const Cover& fine, const std::vector<int>& s)
{
    return {fine, refine(l.q, fine, s), refine(l.a, fine, s)};
}

HolonomyResult holonomy(const LineBundleData& l, const ClosedPath& path, const LoopChart& chart, const Quadrature& q)
{
    double phase = 0.0;
    for (int i = 0; i < chart.n(); ++i) {
        const ChartForm& a = l.a.at({chart.label(i)}, 0);
        phase -= path.integrate(chart_sampler(l.cover, a), chart.seg_begin(i), chart.seg_end(i), q);
        Vec y = l.cover.to_target(path.eval(chart.seg_end(i)));
        phase += l.q.eval({chart.label(i), chart.label(i + 1)}, y, {});
    }
    HolonomyResult r;
    r.phase = phase;
    r.value = unit_phase(phase);
    r.chart = chart;
    return r;
}

HolonomyResult holonomy(const LineBundleData& l, const ClosedPath& path, const Quadrature& q)
{
    return holonomy(l, path, find_loop_chart(l.cover, path, ChartConvention::Line), q);
}

HolonomyResult holonomy(const LineBundleData& l, const LoopMap& loop, const Quadrature& q)
{
    return holonomy(l, ClosedPath(loop), q);
}

std::function<std::complex<double>(const LoopMap&)> transgress_line(LineBundleData l)
{
    return [l = std::move(l)](const LoopMap& loop) { return holonomy(l, loop).value; };
}

} // namespace loopgerbe
