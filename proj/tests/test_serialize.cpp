#include <doctest.h>

#include <cmath>

#include "loopgerbe/error.hpp"
#include "loopgerbe/gerbe.hpp"
#include "loopgerbe/line_bundle.hpp"
#include "loopgerbe/serialize.hpp"
#include "loopgerbe/spectral.hpp"

using namespace loopgerbe;

TEST_CASE("polynomial round trip preserves values")
{
    TrigPoly p = TrigPoly::coordinate(2, 0) * TrigPoly::cosine(2, {1, 2}, 0.5) + TrigPoly::sine(2, {0, 1}, -1.5) +
                 TrigPoly::constant(2, 0.25);
    TrigPoly r = trig_poly_from_json(to_json(p));
    CHECK(to_json(r) == to_json(p));
    for (Vec x : {Vec{0.1, 0.2}, Vec{0.77, -1.3}})
        CHECK(std::abs(r.eval(x) - p.eval(x)) < 1e-14);

    Json shorthand = {{"dim", 2}, {"terms", {{{"freq", {1, 0}}, {"cos", 2.0}}, {{"freq", {0, 1}}, {"sin", 3.0}}}}};
    TrigPoly s = trig_poly_from_json(shorthand);
    Vec x{0.3, 0.15};
    CHECK(s.eval(x) == doctest::Approx(2.0 * std::cos(kTwoPi * 0.3) + 3.0 * std::sin(kTwoPi * 0.15)));
}

TEST_CASE("maps, covers and boxes round trip")
{
    LoopMap loop = make_loop(3, {1, 0, 2}, {0.1, 0.2, 0.3}, {FourierTerm{{2}, {0.05, 0, 0}, {0, 0.02, 0}}});
    Json j = to_json(loop.map);
    CHECK(to_json(smooth_map_from_json(j)) == j);
    LoopMap back = loop_from_json(j);
    for (double t : {0.0, 0.3, 0.9})
        for (int c = 0; c < 3; ++c)
            CHECK(std::abs(back.map.eval({t})[c] - loop.map.eval({t})[c]) < 1e-14);

    for (const Cover& c : {Cover::standard(2), Cover::refined_standard(3)}) {
        Cover r = cover_from_json(to_json(c));
        CHECK(r.same_as(c));
    }
    Json unit_box = {{"unit", 2}};
    Box b = box_from_json(unit_box);
    CHECK(to_json(box_from_json(to_json(b))) == to_json(b));
}

TEST_CASE("bundles, gerbes and families round trip")
{
    LineBundleData l = standard_line_bundle(2);
    CHECK(to_json(line_bundle_from_json(to_json(l))) == to_json(l));

    GerbeData g = standard_gerbe(1);
    GerbeData h = gerbe_from_json(to_json(g));
    CHECK(to_json(h) == to_json(g));
    CHECK(check_gerbe_axioms(h, 1e-9).ok);

    Json builder = {{"builder", "standard"}, {"k", -2}};
    CHECK(dd_pairing(gerbe_from_json(builder)).value == -2);

    SpectralFamily f = make_family(2, {1, -1}, 0.2);
    SpectralFamily fb = family_from_json(to_json(f));
    CHECK(to_json(fb) == to_json(f));
    CHECK(generator_flows(fb) == generator_flows(f));
}

TEST_CASE("malformed input reports positions and fields")
{
    std::string text = "{\n  \"a\": 1,\n  \"b\": [1, 2,\n}";
    try {
        parse_json_text(text, "probe.json");
        FAIL("expected a parse error");
    } catch (const StructuralError& e) {
        CHECK(std::string(e.what()).rfind("probe.json:4:", 0) == 0);
    }
    CHECK_THROWS_AS(gerbe_from_json(Json{{"builder", "standard"}, {"k", 1}, {"cover", {{"kind", "hexagonal"}}}}),
                    StructuralError);
    CHECK_THROWS_AS(trig_poly_from_json(Json{{"terms", Json::array()}}), StructuralError);
    CHECK_THROWS_AS(load_json_file("/nonexistent/file.json"), StructuralError);
}
