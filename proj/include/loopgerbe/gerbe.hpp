#pragma once

#include <memory>

#include "loopgerbe/line_bundle.hpp"
#include "loopgerbe/partition.hpp"

namespace loopgerbe {

/// Gerbe with connection in Cech form: theta_abc = e^{2 pi i q_abc},
/// A_ab = 2 pi i a_ab on L_ab, chart 2-forms F_a. Axioms:
///   delta q integer on quadruples,
///   dq_abc = -(a_ab + a_bc + a_ca)   (theta parallel),
///   F_b - F_a = -da_ab               (= c1 of L_ab).
struct GerbeData {
    Cover cover;
    CechCochain q; ///< bidegree (2,0), U(1)
    CechCochain a; ///< bidegree (1,1)
    CechCochain F; ///< bidegree (0,2)

    int dim() const { return cover.target_dim(); }
};

GerbeData trivial_gerbe(const Cover& cover);
/// Curvature k dx^dy^dz on T^3, built from the Chern class -k line bundle of
/// the xy-plane twisted along z: F_a = k z_a dx^dy.
GerbeData standard_gerbe(int k, const Cover& cover = Cover::standard(3));

/// Deligne cocycle (q, a, -F) in the total complex of K^2.
DeligneClassRep gerbe_cocycle(const GerbeData& g);

struct GerbeAxiomReport {
    bool ok = true;
    double integrality = 0.0; ///< delta q on quadruples
    double parallel = 0.0;    ///< dq + delta a on triples
    double curvature = 0.0;   ///< F_b - F_a + da_ab on overlaps
    std::string worst;
};
GerbeAxiomReport check_gerbe_axioms(const GerbeData& g, double tol, int grid = 9);

/// Glues dF_a into R; throws StructuralError if charts disagree beyond tol.
GluedForm gerbe_curvature(const GerbeData& g, double tol = 1e-8);
/// Integral of R over T^3, snapped to an integer.
IntegerValue dd_pairing(const GerbeData& g, double snap_tol = 1e-6);

GerbeData product(const GerbeData& g1, const GerbeData& g2);
GerbeData inverse(const GerbeData& g);
GerbeData pullback_gerbe(const GerbeData& g, const SmoothMap& f);
GerbeData refine(const GerbeData& g, const Cover& fine, const std::vector<int>& s);

/// F_a := sum_c rho_c (-da_ca); the input's F is ignored. Needs connected
/// pairwise intersections so each term extends by zero over the chart.
GerbeData solve_F(const GerbeData& partial, std::shared_ptr<const PartitionOfUnity> pou);
GerbeData solve_F(const GerbeData& partial);

/// Isomorphic gerbe from per-chart connections b_a (a (0,1) cochain):
/// a_ab -> a_ab - b_a + b_b, F_a -> F_a - db_a.
GerbeData modify_by_line_bundles(const GerbeData& g, const CechCochain& b);
/// Isomorphic gerbe from a change of unit sections of L_ab by e^{2 pi i h_ab}:
/// a -> a + dh, q -> q - delta h.
GerbeData modify_by_sections(const GerbeData& g, const CechCochain& h);

} // namespace loopgerbe
