#include <doctest.h>

#include <cmath>

#include "loopgerbe/error.hpp"
#include "loopgerbe/line_bundle.hpp"
#include "loopgerbe/random.hpp"

using namespace loopgerbe;

namespace {

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

double max_abs(const TotalCochain& c)
{
    double worst = 0.0;
    for (const auto& part : c.parts) {
        for (const auto& [t, vals] : part.values) {
            for (const auto& v : vals) {
                worst = std::max(worst, v.base().max_abs_coeff());
                for (const auto& [k, f] : v.weighted_terms()) {
                    worst = std::max(worst, f.max_abs_coeff());
                }
            }
        }
    }
    return worst;
}

} // namespace

TEST_CASE("standard cover nerve")
{
    Cover c1 = Cover::standard(1);
    CHECK(c1.size() == 3);
    auto pairs = c1.tuples(2);
    CHECK(pairs.size() == 3);
    for (const auto& t : pairs) {
        REQUIRE(c1.components(t).size() == 1);
        const Box& b = c1.components(t)[0];
        CHECK(b.hi[0] - b.lo[0] == doctest::Approx(1.0 / 12.0));
    }
    CHECK(c1.tuples(3).empty());

    Cover c2 = Cover::standard(2);
    CHECK(c2.size() == 9);
    CHECK(c2.tuples(2).size() == 36);
    CHECK(c2.tuples(3).size() == 36);
    CHECK(c2.tuples(4).size() == 9);
    int euler = 9 - 36 + 36 - 9;
    CHECK(euler == 0);
    for (int len = 2; len <= 4; ++len) {
        for (const auto& t : c2.tuples(len)) {
            CHECK(c2.components(t).size() == 1);
        }
    }

    Rng rng(5);
    Cover c3 = Cover::standard(3);
    int uncovered = 0;
    for (int k = 0; k < 10000; ++k) {
        Vec y{uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)};
        bool in = false;
        for (int a = 0; a < c3.size() && !in; ++a) {
            in = c3.contains(a, y);
        }
        uncovered += in ? 0 : 1;
    }
    CHECK(uncovered == 0);
}

TEST_CASE("refinement cover")
{
    Cover fine = Cover::refined_standard(2);
    Cover coarse = Cover::standard(2);
    auto s = find_refinement(fine, coarse);
    CHECK(s.size() == 25);
    CHECK_NOTHROW(check_refinement(fine, coarse, s));
    std::vector<int> bad(25, 0);
    CHECK_THROWS_AS(check_refinement(fine, coarse, bad), StructuralError);
}

TEST_CASE("delta and d_total")
{
    Cover cover = Cover::standard(2);
    Rng rng(1);
    auto g = random_cochain(cover, 0, 0, rng);
    auto dg = cech_delta(g);
    Vec y{0.17, 0.05, 0};
    CHECK(dg.eval({0, 1}, y, {}) == doctest::Approx(g.eval({1}, y, {}) - g.eval({0}, y, {})));
    CHECK(dg.eval({1, 0}, y, {}) == doctest::Approx(-dg.eval({0, 1}, y, {})));
    CHECK(dg.eval({1, 1}, y, {}) == 0.0);

    for (int p = 0; p <= 1; ++p) {
        auto c = random_cochain(cover, p, 1, rng);
        auto dd = cech_delta(cech_delta(c));
        TotalCochain wrap{p + 2, 2, {}};
        double worst = 0.0;
        for (const auto& [t, vals] : dd.values) {
            for (const auto& v : vals) {
                worst = std::max(worst, v.base().max_abs_coeff());
            }
        }
        CHECK(worst < 1e-12);
    }
    for (int trial = 0; trial < 4; ++trial) {
        auto c = random_total(cover, 1, 2, rng);
        CHECK(max_abs(d_total(d_total(c))) < 1e-12);
        auto flipped = d_total(d_total(c, true), true);
        CHECK(max_abs(flipped) > 1e-3);
    }
    auto constant = CechCochain::zero(cover, 0, 0, true);
    for (auto& [t, vals] : constant.values) {
        for (auto& v : vals) {
            v = ChartForm(LiftedForm::function(TrigPoly::constant(2, 0.3), v.box()));
        }
    }
    TotalCochain c0{0, 1, {constant}};
    CHECK(max_abs(d_total(c0)) < 1e-15);

    TotalCochain bad{1, 1, {constant}};
    CHECK_THROWS_AS(d_total(bad), StructuralError);
}

TEST_CASE("permuted reads are sign adjusted")
{
    Cover cover = Cover::standard(2);
    Rng rng(9);
    auto c = random_cochain(cover, 3, 0, rng);
    const Tuple base = c.cover.tuples(4).front();
    const Box& k = cover.components(base)[0];
    Vec y = k.center();
    double v = c.eval(base, y, {});
    Tuple t = base;
    std::sort(t.begin(), t.end());
    int checked = 0;
    do {
        Tuple tmp = t;
        int sign = sort_tuple(tmp);
        CHECK(c.eval(t, y, {}) == doctest::Approx(sign * v));
        ++checked;
    } while (std::next_permutation(t.begin(), t.end()));
    CHECK(checked == 24);
}

TEST_CASE("line cocycles")
{
    for (int k : {-2, 0, 1, 3}) {
        auto l = standard_line_bundle(k);
        auto rep = is_cocycle(line_cocycle(l), 1e-10);
        CHECK(rep.ok);
        CHECK(rep.max_residual < 1e-10);
    }
    auto triv = trivial_line_bundle(Cover::standard(2));
    CHECK(is_cocycle(line_cocycle(triv), 1e-10).max_residual == 0.0);

    auto l = standard_line_bundle(1);
    const Box& b = l.cover.chart(4);
    l.a.at({4}, 0) += ChartForm(LiftedForm::differential(2, 1, b) * 0.01);
    auto rep = check_line_axioms(l, 1e-10);
    CHECK_FALSE(rep.ok);
    CHECK(rep.compatibility == doctest::Approx(0.01).epsilon(1e-6));

    auto l2 = standard_line_bundle(2);
    auto k0 = l2.cover.components({0, 1})[0];
    l2.q.at({0, 1}, 0) += ChartForm(LiftedForm::function(TrigPoly::constant(2, 0.01), k0));
    auto rep2 = check_line_axioms(l2, 1e-10);
    CHECK_FALSE(rep2.ok);
    CHECK(rep2.integrality == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("refinement of cocycles")
{
    auto l = standard_line_bundle(2);
    std::vector<int> id(9);
    for (int i = 0; i < 9; ++i) {
        id[i] = i;
    }
    auto same = refine(line_cocycle(l), l.cover, id);
    CHECK(max_abs(TotalCochain{1, 1, {same.parts[0] - l.q, same.parts[1] + l.a}}) == 0.0);

    Cover fine = Cover::refined_standard(2);
    auto s = find_refinement(fine, l.cover);
    auto r = refine(line_cocycle(l), fine, s);
    CHECK(is_cocycle(r, 1e-10).ok);
}
