#include "loopgerbe/gerbe.hpp"

#include <cmath>

#include "loopgerbe/error.hpp"

namespace loopgerbe {

namespace {

IVec shift_to(const Box& k, const Box& chart)
{
    auto s = k.shift_into(chart, kBoxTol);
    if (!s) {
        throw StructuralError("intersection component " + k.str() + " outside chart " + chart.str());
    }
    return *s;
}

void set_cover(GerbeData& g, const Cover& c)
{
    g.cover = c;
    g.q.cover = c;
    g.a.cover = c;
    g.F.cover = c;
}

} // namespace

GerbeData trivial_gerbe(const Cover& cover)
{
    return {cover, CechCochain::zero(cover, 2, 0, true), CechCochain::zero(cover, 1, 1),
            CechCochain::zero(cover, 0, 2)};
}

GerbeData standard_gerbe(int k, const Cover& cover)
{
    if (cover.target_dim() != 3) {
        throw StructuralError("standard gerbe lives on T^3");
    }
    GerbeData g = trivial_gerbe(cover);
    if (k == 0) {
        return g;
    }
    const int n = 3;
    const double kk = k;
    auto x = TrigPoly::coordinate(n, 0);
    auto y = TrigPoly::coordinate(n, 1);
    auto z = TrigPoly::coordinate(n, 2);
    for (int a = 0; a < cover.size(); ++a) {
        const Box& b = cover.chart(a);
        g.F.at({a}, 0) = LiftedForm::function(z * kk, b).wedge(LiftedForm::differential(n, 0, b))
                             .wedge(LiftedForm::differential(n, 1, b));
    }
    // a_ab = -m^z_ab * (k x dy) in the first chart's lift.
    for (auto& [t, vals] : g.a.values) {
        for (std::size_t c = 0; c < vals.size(); ++c) {
            const Box& kb = cover.components(t)[c];
            double mz = shift_to(kb, cover.chart(t[1]))[2];
            vals[c] = LiftedForm::function(x * (-mz * kk), kb).wedge(LiftedForm::differential(n, 1, kb));
        }
    }
    // q_abc = -m^z_bc * Q_ab with Q_ab = -k m^x_ab y.
    for (auto& [t, vals] : g.q.values) {
        for (std::size_t c = 0; c < vals.size(); ++c) {
            const Box& kb = cover.components(t)[c];
            IVec sb = shift_to(kb, cover.chart(t[1]));
            IVec sc = shift_to(kb, cover.chart(t[2]));
            double mz_bc = sc[2] - sb[2];
            double mx_ab = sb[0];
            vals[c] = LiftedForm::function(y * (mz_bc * mx_ab * kk), kb);
        }
    }
    return g;
}

DeligneClassRep gerbe_cocycle(const GerbeData& g)
{
    DeligneClassRep rep;
    rep.degree = 2;
    rep.truncation = 2;
    rep.parts = {g.q, g.a, g.F * -1.0};
    return rep;
}

GerbeAxiomReport check_gerbe_axioms(const GerbeData& g, double tol, int grid)
{
    auto r = is_cocycle(gerbe_cocycle(g), tol, grid);
    GerbeAxiomReport out;
    out.ok = r.ok;
    out.integrality = r.part_residuals.at(0);
    out.parallel = r.part_residuals.at(1);
    out.curvature = r.part_residuals.at(2);
    out.worst = r.worst;
    return out;
}

GluedForm gerbe_curvature(const GerbeData& g, double tol)
{
    std::vector<ChartForm> charts;
    for (int a = 0; a < g.cover.size(); ++a) {
        charts.push_back(g.F.at({a}, 0).d());
    }
    GluedForm r = glue(g.cover, std::move(charts));
    if (!r.exact) {
        double res = r.overlap_residual();
        if (res > tol) {
            throw StructuralError("dF disagrees on overlaps by " + std::to_string(res));
        }
    }
    return r;
}

IntegerValue dd_pairing(const GerbeData& g, double snap_tol)
{
    if (g.dim() != 3 || g.cover.pull()) {
        throw StructuralError("Dixmier-Douady pairing is computed on T^3");
    }
    double raw = integrate_glued(gerbe_curvature(g), Quadrature{8, 1});
    IntegerValue out;
    out.raw = raw;
    out.value = snap_integer(raw, snap_tol);
    out.snap_distance = std::abs(raw - static_cast<double>(out.value));
    return out;
}

GerbeData product(const GerbeData& g1, const GerbeData& g2)
{
    if (!g1.cover.same_as(g2.cover)) {
        throw StructuralError("gerbe product needs a shared cover");
    }
    return {g1.cover, g1.q + g2.q, g1.a + g2.a, g1.F + g2.F};
}

GerbeData inverse(const GerbeData& g) { return {g.cover, g.q * -1.0, g.a * -1.0, g.F * -1.0}; }

GerbeData pullback_gerbe(const GerbeData& g, const SmoothMap& f)
{
    GerbeData out = g;
    set_cover(out, g.cover.pulled_back(f));
    return out;
}

GerbeData refine(const GerbeData& g, const Cover& fine, const std::vector<int>& s)
{
    return {fine, refine(g.q, fine, s), refine(g.a, fine, s), refine(g.F, fine, s)};
}

GerbeData solve_F(const GerbeData& partial, std::shared_ptr<const PartitionOfUnity> pou)
{
    const Cover& cover = partial.cover;
    if (!pou || pou->size() != cover.size()) {
        throw StructuralError("partition of unity does not match the cover");
    }
    GerbeData out = partial;
    out.F = CechCochain::zero(cover, 0, 2);
    for (int a = 0; a < cover.size(); ++a) {
        const Box& ba = cover.chart(a);
        ChartForm acc = ChartForm::zero(cover.target_dim(), 2, ba);
        for (int c = 0; c < cover.size(); ++c) {
            if (c == a) {
                continue;
            }
            Tuple t{std::min(a, c), std::max(a, c)};
            const auto& comps = cover.components(t);
            if (comps.empty()) {
                continue;
            }
            if (comps.size() != 1) {
                throw StructuralError("partition construction failure: disconnected intersection of charts "
                                      + std::to_string(t[0]) + "," + std::to_string(t[1]));
            }
            // Component expressed in chart a's lift.
            Box k = comps[0];
            IVec s = shift_to(k, ba);
            for (int i = 0; i < k.dim; ++i) {
                k.lo[i] += s[i];
                k.hi[i] += s[i];
            }
            ChartForm a_ca = partial.a.restricted({c, a}, k);
            if (!a_ca.is_lifted()) {
                throw StructuralError("solve_F needs lifted overlap connection forms");
            }
            LiftedForm term = a_ca.base().d().with_box(ba) * -1.0;
            acc += ChartForm::weighted(pou, c, term);
        }
        out.F.at({a}, 0) = acc;
    }
    return out;
}

GerbeData solve_F(const GerbeData& partial) { return solve_F(partial, PartitionOfUnity::make(partial.cover)); }

GerbeData modify_by_line_bundles(const GerbeData& g, const CechCochain& b)
{
    if (b.p != 0 || b.q != 1) {
        throw StructuralError("chart connections form a (0,1) cochain");
    }
    // (delta b)_ab = b_b - b_a.
    return {g.cover, g.q, g.a + cech_delta(b), g.F - exterior_d(b)};
}

GerbeData modify_by_sections(const GerbeData& g, const CechCochain& h)
{
    if (h.p != 1 || h.q != 0) {
        throw StructuralError("section changes form a (1,0) cochain");
    }
    return {g.cover, g.q - cech_delta(h), g.a + exterior_d(h), g.F};
}

} // namespace loopgerbe
