#include <doctest.h>

#include <cmath>

#include "loopgerbe/error.hpp"
#include "loopgerbe/random.hpp"
#include "loopgerbe/spectral.hpp"
#include "loopgerbe/transgression.hpp"

using namespace loopgerbe;

namespace {

SmoothMap line_path(double from, double to)
{
    return SmoothMap::poly(1, 1, {TrigPoly::constant(1, from) + TrigPoly::coordinate(1, 0) * (to - from)});
}

std::complex<double> torus_holonomy(const GerbeData& g)
{
    return surface_holonomy_composed(g, LoopOfLoops(CylinderMap(SmoothMap::identity(2)))).value;
}

} // namespace

TEST_CASE("Hurwitz zeta values")
{
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx((kTwoPi * kTwoPi / 4.0) / 6.0).epsilon(1e-13));
    CHECK(hurwitz_zeta(2.0, 0.5) == doctest::Approx((kTwoPi * kTwoPi / 4.0) / 2.0).epsilon(1e-13));
    for (double a : {0.1, 0.37, 0.9, 2.5}) {
        CHECK(std::abs(hurwitz_zeta(0.0, a) - (0.5 - a)) < 1e-13);
        double b2 = a * a - a + 1.0 / 6.0;
        CHECK(std::abs(hurwitz_zeta(-1.0, a) + b2 / 2.0) < 1e-12);
    }
    CHECK_THROWS_AS(hurwitz_zeta(1.0, 0.5), DomainError);
    CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), DomainError);
}

TEST_CASE("eta invariant and heat oracle")
{
    CHECK(eta_invariant(0.0) == 0.0);
    CHECK(eta_invariant(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(eta_invariant(0.25) - 0.5) < 1e-13);
    CHECK(std::abs(eta_invariant(1.25) - 0.5) < 1e-13);
    CHECK(std::abs(eta_invariant(-0.25) + 0.5) < 1e-13);
    Rng rng(17);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        double a = uniform(rng, 0.01, 0.99);
        auto h = eta_heat_oracle(a);
        CHECK(h.error_bound < 1e-8);
        worst = std::max(worst, std::abs(h.value - eta_invariant(a)));
    }
    CHECK(worst < 1e-6);
    CHECK(eta_heat_oracle(0.0).value == 0.0);
}

TEST_CASE("tau values")
{
    CHECK(tau(0.0) == std::complex<double>(-1.0, 0.0));
    CHECK(tau(3.0) == std::complex<double>(-1.0, 0.0));
    CHECK(std::abs(tau(0.25) - std::complex<double>(0.0, 1.0)) < 1e-13);
    CHECK(std::abs(tau(0.001) + 1.0) < 1e-2);
    CHECK(std::abs(tau(-0.001) + 1.0) < 1e-2);
    CHECK(kernel_dim(2.0) == 1);
    CHECK(kernel_dim(0.3) == 0);
}

TEST_CASE("eta jumps are absorbed by twice the spectral flow")
{
    auto fam = e1_family();
    const double start = -0.3;
    auto corrected = [&](double t) {
        return eta_invariant(t) - 2.0 * spectral_flow(fam, line_path(start, t));
    };
    for (double crossing : {0.0, 1.0}) {
        double left = corrected(crossing - 1e-7);
        double right = corrected(crossing + 1e-7);
        CHECK(std::abs(left - right) < 1e-5);
    }
    // Without the correction the jump is 2.
    CHECK(std::abs(eta_invariant(1e-7) - eta_invariant(-1e-7) - 2.0) < 1e-5);
}

TEST_CASE("spectral flow")
{
    auto e1 = e1_family();
    CHECK(spectral_flow(e1, make_loop(1, {1, 0, 0}, {}, {})) == 1);
    CHECK(spectral_flow(e1, make_loop(1, {2, 0, 0}, {0.1, 0, 0}, {{{1, 0, 0}, {0.2, 0, 0}, {0, 0, 0}}})) == 2);
    CHECK(spectral_flow(e1, make_loop(1, {-1, 0, 0}, {0.3, 0, 0}, {})) == -1);
    auto constant = make_family(1, {0, 0, 0}, 0.4);
    CHECK(spectral_flow(constant, make_loop(1, {1, 0, 0}, {}, {})) == 0);
    // Additivity and reversal along open paths.
    auto path = line_path(-0.2, 2.6);
    int whole = spectral_flow(e1, path, 0.0, 1.0);
    CHECK(whole == 3);
    CHECK(spectral_flow(e1, path, 0.0, 0.4) + spectral_flow(e1, path, 0.4, 1.0) == whole);
    CHECK(spectral_flow(e1, path, 1.0, 0.0) == -whole);
    // A wiggly phase that crosses 0 down then up twice nets zero.
    auto wiggle = make_family(1, {0, 0, 0}, 0.05, {{{2, 0, 0}, {0.0, 0, 0}, {0.3, 0, 0}}});
    CHECK(spectral_flow(wiggle, make_loop(1, {1, 0, 0}, {}, {})) == 0);
    // Tangency: phase touches 0 with zero slope.
    auto touch = make_family(1, {0, 0, 0}, -0.2, {{{1, 0, 0}, {0.2, 0, 0}, {0, 0, 0}}});
    CHECK_THROWS_AS(spectral_flow(touch, make_loop(1, {1, 0, 0}, {}, {})), DomainError);
    CHECK_THROWS_AS(spectral_flow(e1, make_loop(2, {1, 0, 0}, {}, {})), StructuralError);
}

TEST_CASE("flow cancellation by the classifying pullback")
{
    for (IVec w : {IVec{1, 0, 0}, IVec{0, 0, 0}, IVec{2, -1, 0}}) {
        auto fam = make_family(2, w, 0.13, {{{1, 1, 0}, {0.1, 0, 0}, {0, 0, 0}}});
        auto r = cancel_flow(fam);
        CHECK(r.ok);
        CHECK(r.before == std::vector<int>{w[0], w[1]});
        CHECK(r.classifying == IVec{-w[0], -w[1], 0});
        CHECK(r.after == std::vector<int>{0, 0});
    }
}

TEST_CASE("index gerbe")
{
    auto cover = Cover::standard(2);
    SUBCASE("trivial frames give a flat trivial gerbe")
    {
        auto fam = make_family(2, {1, 0, 0});
        auto g = index_gerbe_build(fam, cover, auto_cuts(fam, cover));
        CHECK(check_gerbe_axioms(g, 1e-12).ok);
        CHECK(std::abs(torus_holonomy(g) - 1.0) < 1e-12);
    }
    SUBCASE("rotating frames")
    {
        auto fam = make_family(2, {1, 0, 0}, 0.0, {}, TrigPoly::coordinate(2, 1) + TrigPoly::sine(2, {1, 1, 0}, 0.1));
        auto c1 = auto_cuts(fam, cover);
        auto g1 = index_gerbe_build(fam, cover, c1);
        auto rep = check_gerbe_axioms(g1, 1e-9);
        CHECK_MESSAGE(rep.ok, rep.worst);
        // Another admissible cut choice: the two gerbes differ by the global
        // form sum_c d rho_c ^ N_c dpsi, which is exact here, so holonomies agree.
        auto c2 = auto_cuts(fam, cover, {1, 0, -1, 0, 2, 0, 0, 1, 0});
        auto g2 = index_gerbe_build(fam, cover, c2);
        CHECK(check_gerbe_axioms(g2, 1e-9).ok);
        CHECK(std::abs(torus_holonomy(g1) - torus_holonomy(g2)) < 1e-8);
    }
    SUBCASE("per-mode rotations on a zero-winding family")
    {
        auto fam = make_family(2, {0, 0, 0}, 0.3, {{{0, 1, 0}, {0.1, 0, 0}, {0, 0, 0}}});
        fam.mode_psi[0] = TrigPoly::coordinate(2, 0) * 2.0 + TrigPoly::cosine(2, {0, 1, 0}, 0.2);
        fam.mode_psi[1] = TrigPoly::sine(2, {1, 0, 0}, 0.3);
        auto g = index_gerbe_build(fam, cover, auto_cuts(fam, cover, {0, 1, 0, 0, 0, 0, 1, 0, 0}));
        CHECK(check_gerbe_axioms(g, 1e-9).ok);
        auto mixed = make_family(2, {1, 0, 0});
        mixed.mode_psi[0] = TrigPoly::coordinate(2, 0);
        CHECK_THROWS_AS(mixed.validate(), StructuralError);
    }
    SUBCASE("gap violations are reported")
    {
        auto fam = make_family(2, {1, 0, 0});
        auto cuts = auto_cuts(fam, cover);
        cuts.c[4] = kTwoPi * fam.phase(cover.chart(4).center());
        try {
            check_cuts(fam, cover, cuts);
            FAIL("expected a gap violation");
        } catch (const DomainError& e) {
            CHECK(std::string(e.what()).find("chart 4") != std::string::npos);
        }
        CHECK_THROWS_AS(auto_cuts(make_family(2, {3, 0, 0}), cover), DomainError);
    }
}
