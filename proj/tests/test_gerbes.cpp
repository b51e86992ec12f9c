#include <doctest.h>

#include <cmath>

#include "loopgerbe/error.hpp"
#include "loopgerbe/gerbe.hpp"
#include "loopgerbe/random.hpp"

using namespace loopgerbe;

TEST_CASE("standard gerbes")
{
    for (int k : {-2, 0, 1, 3}) {
        auto g = standard_gerbe(k);
        auto rep = check_gerbe_axioms(g, 1e-10);
        CHECK_MESSAGE(rep.ok, rep.worst);
        auto dd = dd_pairing(g);
        CHECK(dd.value == k);
        CHECK(dd.snap_distance < 1e-9);
        auto r = gerbe_curvature(g);
        REQUIRE(r.exact);
        CHECK(r.exact->component(0b111).coefficient(Monomial{}).real() == doctest::Approx(k));
    }
    CHECK(dd_pairing(product(standard_gerbe(1), standard_gerbe(2))).value == 3);
    CHECK(dd_pairing(inverse(standard_gerbe(2))).value == -2);
    auto flat = product(standard_gerbe(1), inverse(standard_gerbe(1)));
    CHECK(gerbe_curvature(flat).exact->is_zero(1e-15));
    auto triv = trivial_gerbe(Cover::standard(3));
    CHECK(check_gerbe_axioms(triv, 1e-10).integrality == 0.0);
    CHECK(is_cocycle(gerbe_cocycle(triv), 1e-10).max_residual == 0.0);
}

TEST_CASE("gerbe defects are detected")
{
    auto g = standard_gerbe(1);
    const Box& b = g.cover.chart(5);
    g.F.at({5}, 0) += ChartForm(LiftedForm::differential(3, 0, b).wedge(LiftedForm::differential(3, 2, b)) * 0.01);
    auto rep = check_gerbe_axioms(g, 1e-10);
    CHECK_FALSE(rep.ok);
    CHECK(rep.curvature == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("solve_F")
{
    auto g = standard_gerbe(2);
    auto solved = solve_F(g);
    auto rep = check_gerbe_axioms(solved, 1e-10);
    CHECK_MESSAGE(rep.ok, rep.worst);

    auto triv = trivial_gerbe(Cover::standard(3));
    auto st = solve_F(triv);
    for (const auto& [t, vals] : st.F.values) {
        CHECK(vals[0].weighted_terms().empty());
    }

    auto other = solve_F(g, PartitionOfUnity::make(g.cover, 0.5));
    CHECK(check_gerbe_axioms(other, 1e-10).ok);
    // The F-difference is one global 2-form: equal on every overlap.
    auto diff = other.F - solved.F;
    GerbeData dg{g.cover, CechCochain::zero(g.cover, 2, 0, true), CechCochain::zero(g.cover, 1, 1), diff};
    CHECK(check_gerbe_axioms(dg, 1e-10).curvature < 1e-10);
}

TEST_CASE("isomorphic data")
{
    Rng rng(3);
    auto g = standard_gerbe(1);
    auto b = random_cochain(g.cover, 0, 1, rng);
    auto h = random_cochain(g.cover, 1, 0, rng, true);
    auto g2 = modify_by_sections(modify_by_line_bundles(g, b), h);
    CHECK(check_gerbe_axioms(g2, 1e-10).ok);
    CHECK(dd_pairing(g2).value == 1);
}
