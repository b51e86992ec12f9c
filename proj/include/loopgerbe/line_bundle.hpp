#pragma once

#include <complex>
#include <functional>

#include "loopgerbe/chart_form.hpp"
#include "loopgerbe/cochain.hpp"
#include "loopgerbe/loop_chart.hpp"

namespace loopgerbe {

/// Hermitean line bundle with connection in Cech form: U_ab = e^{2 pi i q_ab}
/// relates the unit sections as s_a = U_ab s_b, and A_a = 2 pi i a_a, so the
/// compatibility condition reads a_a - a_b = dq_ab.
struct LineBundleData {
    Cover cover;
    CechCochain q; ///< bidegree (1,0), U(1)
    CechCochain a; ///< bidegree (0,1)

    int dim() const { return cover.target_dim(); }
};

LineBundleData trivial_line_bundle(const Cover& cover);
/// Chern class k on the (x_i, x_j) plane: a_m = -k x_i dx_j, q_mn = k m_i x_j
/// with m_i the integer jump of the lifted x_i between the charts.
LineBundleData standard_line_bundle(int k, const Cover& cover = Cover::standard(2), int axis_i = 0, int axis_j = 1);

/// Deligne cocycle (q, -a) in the total complex of K^1.
DeligneClassRep line_cocycle(const LineBundleData& l);

struct LineAxiomReport {
    bool ok = true;
    double integrality = 0.0;    ///< delta q away from integers on triples
    double compatibility = 0.0;  ///< a_a - a_b - dq_ab on overlaps
    std::string worst;
};
LineAxiomReport check_line_axioms(const LineBundleData& l, double tol, int grid = 9);

/// Curvature 2-form da (R = 2 pi i da) glued over the charts.
GluedForm line_curvature(const LineBundleData& l);
/// First Chern form c1 = -da.
GluedForm chern_form(const LineBundleData& l);

struct IntegerValue {
    long long value = 0;
    double raw = 0.0;
    double snap_distance = 0.0;
};
/// Integral of c1 over T^2, snapped (IntegralityError beyond `snap_tol`).
IntegerValue chern_number(const LineBundleData& l, double snap_tol = 1e-6);

LineBundleData tensor(const LineBundleData& l1, const LineBundleData& l2);
LineBundleData dual(const LineBundleData& l);
LineBundleData pullback(const LineBundleData& l, const SmoothMap& f);
/// q -> q + g_a - g_b, a -> a + dg_a for a 0-cochain of phases g.
LineBundleData gauge_transform(const LineBundleData& l, const CechCochain& g);
LineBundleData refine(const LineBundleData& l, const Cover& fine, const std::vector<int>& s);

struct HolonomyResult {
    std::complex<double> value{1.0, 0.0};
    double phase = 0.0; ///< value = exp(2 pi i phase)
    LoopChart chart;
};

/// hol = prod_i exp(-2 pi i int_{seg i} a_{s(i)}) * prod_i U_{s(i)s(i+1)}(gamma(t(i+1))).
HolonomyResult holonomy(const LineBundleData& l, const ClosedPath& path, const LoopChart& chart,
                        const Quadrature& q = {});
HolonomyResult holonomy(const LineBundleData& l, const ClosedPath& path, const Quadrature& q = {});
HolonomyResult holonomy(const LineBundleData& l, const LoopMap& loop, const Quadrature& q = {});

/// T(L): loop -> hol_loop(L).
std::function<std::complex<double>(const LoopMap&)> transgress_line(LineBundleData l);

/// Unit complex exp(2 pi i phase).
std::complex<double> unit_phase(double phase);

} // namespace loopgerbe
