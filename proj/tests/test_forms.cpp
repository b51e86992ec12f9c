#include <doctest.h>

#include <cmath>

#include "loopgerbe/error.hpp"
#include "loopgerbe/quadrature.hpp"
#include "loopgerbe/random.hpp"

using namespace loopgerbe;

namespace {

Box chart2() { return Box::make(2, {-0.2, -0.2, 0}, {0.2, 0.2, 0}); }

double trapezoid_line(const LiftedForm& f, const LoopMap& loop, int n)
{
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        double t = static_cast<double>(k) / n;
        Vec x;
        Jacobian j;
        loop.map.eval_with_jacobian({t, 0, 0}, x, j);
        Vec v = j[0];
        sum += f.eval(x, std::span<const Vec>(&v, 1));
    }
    return sum / n;
}

} // namespace

TEST_CASE("eval_form examples")
{
    Box g = Box::unit(2);
    Vec e1{1, 0, 0}, e2{0, 1, 0};
    auto dx = LiftedForm::differential(2, 0, g);
    CHECK(dx.eval(Vec{0.7, 0.3, 0}, std::span<const Vec>(&e1, 1)) == doctest::Approx(1.0));

    auto xdy = LiftedForm::function(TrigPoly::coordinate(2, 0), chart2()).wedge(LiftedForm::differential(2, 1, chart2()));
    CHECK(xdy.eval(Vec{0.1, 0, 0}, std::span<const Vec>(&e2, 1)) == doctest::Approx(0.1));

    auto s = LiftedForm::from_component(2, 0b11, TrigPoly::sine(2, {1, 0, 0}), g);
    Vec v[2] = {e1, e2};
    CHECK(s.eval(Vec{0.25, 0.5, 0}, v) == doctest::Approx(1.0));

    CHECK_THROWS_AS(xdy.eval(Vec{0.5, 0.5, 0}, std::span<const Vec>(&e2, 1)), DomainError);
}

TEST_CASE("exterior derivative and wedge")
{
    auto b = chart2();
    auto xdy = LiftedForm::function(TrigPoly::coordinate(2, 0), b).wedge(LiftedForm::differential(2, 1, b));
    auto dxdy = LiftedForm::differential(2, 0, b).wedge(LiftedForm::differential(2, 1, b));
    CHECK((xdy.d() - dxdy).is_zero(1e-15));

    auto sinx = LiftedForm::function(TrigPoly::sine(2, {1, 0, 0}), Box::unit(2));
    auto expect = LiftedForm::from_component(1, 0b01, TrigPoly::cosine(2, {1, 0, 0}, kTwoPi), Box::unit(2));
    CHECK((sinx.d() - expect).is_zero(1e-12));

    Rng rng(7);
    Box b3 = Box::make(3, {-0.2, 0.1, 0.3}, {0.2, 0.5, 0.6});
    for (int i = 0; i < 10; ++i) {
        auto g = random_form(3, 0, b3, rng);
        CHECK(g.d().d().is_zero(1e-12));
        auto w = random_form(3, 1, b3, rng);
        CHECK(w.d().d().is_zero(1e-12));
    }
    for (int p = 0; p <= 3; ++p) {
        for (int q = 0; p + q <= 3; ++q) {
            auto f = random_form(3, p, b3, rng);
            auto g = random_form(3, q, b3, rng);
            double sign = ((p * q) % 2 == 0) ? 1.0 : -1.0;
            CHECK((f.wedge(g) + g.wedge(f) * -sign).is_zero(1e-12));
        }
    }
    CHECK_THROWS_AS(dxdy.wedge(LiftedForm::differential(2, 0, b)), StructuralError);
    CHECK_THROWS_AS(dxdy.d(), StructuralError);
}

TEST_CASE("full torus integrals")
{
    auto g2 = Box::unit(2);
    CHECK(integrate_full_torus(LiftedForm::from_component(2, 0b11, TrigPoly::constant(2, 4.0), g2)) == 4.0);
    CHECK(integrate_full_torus(LiftedForm::from_component(2, 0b11, TrigPoly::sine(2, {1, 0, 0}), g2)) == 0.0);
    auto c = TrigPoly::constant(3, 2.0) + TrigPoly::cosine(3, {0, 0, 1});
    CHECK(integrate_full_torus(LiftedForm::from_component(3, 0b111, c, Box::unit(3))) == doctest::Approx(2.0));
    CHECK_THROWS_AS(integrate_full_torus(LiftedForm::differential(2, 0, g2)), StructuralError);
}

TEST_CASE("line integrals")
{
    auto g = Box::unit(2);
    auto loop = make_loop(2, {1, 0, 0}, {0, 0.3, 0});
    CHECK(line_integral(LiftedForm::differential(2, 1, g), loop) == doctest::Approx(0.0));
    CHECK(line_integral(LiftedForm::differential(2, 0, g), loop) == doctest::Approx(1.0));

    // Perturbed loop inside a chart against x dy, against a dense trapezoid rule.
    FourierTerm t;
    t.freq = {1, 0, 0};
    t.amp_cos = {0.05, 0.0, 0};
    t.amp_sin = {0.0, 0.08, 0};
    auto small = make_loop(2, {0, 0, 0}, {0.02, -0.01, 0}, {t});
    auto b = chart2();
    auto xdy = LiftedForm::function(TrigPoly::coordinate(2, 0), b).wedge(LiftedForm::differential(2, 1, b));
    CHECK(std::abs(line_integral(xdy, small) - trapezoid_line(xdy, small, 1000000)) < 1e-10);

    auto leaving = make_loop(2, {1, 0, 0}, {0, 0, 0});
    CHECK_THROWS_AS(line_integral(xdy, leaving), DomainError);
}

TEST_CASE("surface and volume integrals")
{
    auto g = Box::unit(2);
    auto area = LiftedForm::differential(2, 0, g).wedge(LiftedForm::differential(2, 1, g));
    auto id = make_cylinder(2, {1, 0, 0}, {0, 1, 0}, {0, 0, 0});
    CHECK(surface_integral(area, id) == doctest::Approx(1.0));
    auto flat = cylinder_from_loop(make_loop(2, {1, 1, 0}, {0.1, 0.2, 0}));
    CHECK(surface_integral(area, flat) == 0.0);

    Rng rng(3);
    auto f = random_form(3, 2, Box::unit(3), rng, false);
    auto cyl = random_cylinder(3, {1, 0, 0}, {0, 1, 1}, rng);
    double q = surface_integral(f, cyl);
    int n = 400;
    double trap = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Vec x;
            Jacobian jac;
            cyl.map.eval_with_jacobian({(i + 0.0) / n, (j + 0.0) / n, 0}, x, jac);
            Vec v[2] = {jac[0], jac[1]};
            trap += f.eval(x, v);
        }
    }
    CHECK(std::abs(q - trap / (n * n)) < 1e-9);

    auto g3 = Box::unit(3);
    auto vol = LiftedForm::differential(3, 0, g3)
                   .wedge(LiftedForm::differential(3, 1, g3))
                   .wedge(LiftedForm::differential(3, 2, g3));
    // H(u,s,t) = (s, t, u): identity of T^3 sliced by u = z.
    HomotopyMap h(SmoothMap::poly(3, 3, {TrigPoly::coordinate(3, 1), TrigPoly::coordinate(3, 2), TrigPoly::coordinate(3, 0)}));
    CHECK(volume_integral(vol, h) == doctest::Approx(1.0));

    // Exact form over a closed 3-cycle integrates to zero.
    auto exact = random_form(3, 2, g3, rng, false).d();
    HomotopyMap closed(affine_trig_map(3, 3, {IVec{1, 0, 0}, IVec{0, 1, 0}, IVec{0, 0, 1}}, {0.1, 0.2, 0.3}, {}));
    CHECK(std::abs(volume_integral(exact, closed)) < 1e-9);
}

TEST_CASE("quadrature convergence and Stokes")
{
    Rng rng(11);
    auto f = LiftedForm::zero(2, 1, Box::unit(2));
    f.add_component(0b01, random_trig_poly(2, rng, 4, 8));
    f.add_component(0b10, random_trig_poly(2, rng, 4, 8));
    auto loop = random_loop(2, {1, 2, 0}, rng, 0.05, 3);
    Quadrature q1{64, 1}, q2{128, 1};
    CHECK(std::abs(line_integral(f, loop, 0, 1, q1) - line_integral(f, loop, 0, 1, q2)) < 1e-10);

    // Boundary of a rectangle inside a chart.
    Box b = Box::make(2, {-0.2, -0.2, 0}, {0.2, 0.2, 0});
    auto w = random_form(2, 1, b, rng);
    double x0 = -0.1, x1 = 0.15, y0 = -0.12, y1 = 0.05;
    auto edge = [&](Vec a, Vec c) {
        auto m = SmoothMap::poly(1, 2, {TrigPoly::constant(1, a[0]) + TrigPoly::coordinate(1, 0) * (c[0] - a[0]),
                                        TrigPoly::constant(1, a[1]) + TrigPoly::coordinate(1, 0) * (c[1] - a[1])});
        return line_integral(sampler(w), m, 0.0, 1.0);
    };
    double circ = edge({x0, y0}, {x1, y0}) + edge({x1, y0}, {x1, y1}) + edge({x1, y1}, {x0, y1}) + edge({x0, y1}, {x0, y0});
    auto rect = SmoothMap::poly(2, 2, {TrigPoly::constant(2, x0) + TrigPoly::coordinate(2, 0) * (x1 - x0),
                                       TrigPoly::constant(2, y0) + TrigPoly::coordinate(2, 1) * (y1 - y0)});
    double area = surface_integral(sampler(w.d()), rect, 0, 1, 0, 1);
    CHECK(std::abs(circ - area) < 1e-9);
}
