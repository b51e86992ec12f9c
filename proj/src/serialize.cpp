#include "loopgerbe/serialize.hpp"

#include <fstream>
#include <sstream>

#include "loopgerbe/error.hpp"
#include "loopgerbe/random.hpp"

namespace loopgerbe {

namespace {

const Json& field(const Json& j, const char* key, const char* what)
{
    if (!j.is_object() || !j.contains(key)) {
        throw StructuralError(std::string("missing field '") + key + "' in " + what);
    }
    return j.at(key);
}

template <class T>
T value_or(const Json& j, const char* key, T fallback)
{
    return j.is_object() && j.contains(key) ? j.at(key).get<T>() : fallback;
}

Vec vec_from(const Json& j, const char* what)
{
    if (!j.is_array() || j.size() > kMaxDim) {
        throw StructuralError(std::string(what) + " must be an array of at most 3 numbers");
    }
    Vec v{};
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[i] = j[i].get<double>();
    }
    return v;
}

IVec ivec_from(const Json& j, const char* what)
{
    if (!j.is_array() || j.size() > kMaxDim) {
        throw StructuralError(std::string(what) + " must be an array of at most 3 integers");
    }
    IVec v{};
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[i] = j[i].get<int>();
    }
    return v;
}

template <class A>
Json head(const A& a, int n)
{
    Json out = Json::array();
    for (int i = 0; i < n; ++i) {
        out.push_back(a[i]);
    }
    return out;
}

std::uint8_t mask_from(const Json& axes)
{
    std::uint8_t m = 0;
    for (const auto& a : axes) {
        int k = a.get<int>();
        if (k < 0 || k >= kMaxDim || (m & (1u << k))) {
            throw StructuralError("form component axes must be distinct indices in 0..2");
        }
        m |= static_cast<std::uint8_t>(1u << k);
    }
    return m;
}

std::vector<FourierTerm> terms_from(const Json& j)
{
    std::vector<FourierTerm> out;
    for (const auto& t : j) {
        FourierTerm ft;
        ft.freq = ivec_from(field(t, "freq", "Fourier term"), "freq");
        if (t.contains("cos")) {
            ft.amp_cos = vec_from(t.at("cos"), "cos");
        }
        if (t.contains("sin")) {
            ft.amp_sin = vec_from(t.at("sin"), "sin");
        }
        out.push_back(ft);
    }
    return out;
}

Json terms_to(const std::vector<FourierTerm>& terms, int out_dim)
{
    Json out = Json::array();
    for (const auto& t : terms) {
        out.push_back({{"freq", head(t.freq, kMaxDim)}, {"cos", head(t.amp_cos, out_dim)}, {"sin", head(t.amp_sin, out_dim)}});
    }
    return out;
}

bool all_lifted(const CechCochain& c)
{
    for (const auto& [t, vals] : c.values) {
        for (const auto& v : vals) {
            if (!v.is_lifted()) {
                return false;
            }
        }
    }
    return true;
}

/// Adds the same periodic form to every chart value of a (0,q) cochain.
void add_global(CechCochain& c, const LiftedForm& w)
{
    for (int m = 0; m < c.cover.size(); ++m) {
        c.at({m}, 0) += ChartForm(w.with_box(c.cover.chart(m)));
    }
}

} // namespace

std::pair<int, int> line_column(const std::string& text, std::size_t offset)
{
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Json parse_json_text(const std::string& text, const std::string& origin)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream os;
        os << origin << ":" << line << ":" << col << ": JSON parse error: " << e.what();
        throw StructuralError(os.str());
    }
}

Json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw StructuralError("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

Json to_json(const TrigPoly& p)
{
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        terms.push_back({{"pow", head(m.pow, p.dim())}, {"freq", head(m.freq, p.dim())}, {"re", c.real()}, {"im", c.imag()}});
    }
    return {{"dim", p.dim()}, {"terms", terms}};
}

TrigPoly trig_poly_from_json(const Json& j, int dim)
{
    if (j.is_number()) {
        if (dim < 1) {
            throw StructuralError("a constant polynomial needs a known dimension");
        }
        return TrigPoly::constant(dim, j.get<double>());
    }
    int d = value_or(j, "dim", dim);
    if (d < 1 || d > kMaxDim || (dim > 0 && d != dim)) {
        throw StructuralError("polynomial dimension " + std::to_string(d) + " does not fit");
    }
    TrigPoly p(d);
    for (const auto& t : field(j, "terms", "polynomial")) {
        IVec freq = t.contains("freq") ? ivec_from(t.at("freq"), "freq") : IVec{};
        if (t.contains("cos")) {
            p += TrigPoly::cosine(d, freq, t.at("cos").get<double>());
            continue;
        }
        if (t.contains("sin")) {
            p += TrigPoly::sine(d, freq, t.at("sin").get<double>());
            continue;
        }
        Monomial m;
        m.freq = freq;
        if (t.contains("pow")) {
            IVec pw = ivec_from(t.at("pow"), "pow");
            for (int k = 0; k < kMaxDim; ++k) {
                if (pw[k] < 0 || pw[k] > 255) {
                    throw StructuralError("monomial powers must lie in 0..255");
                }
                m.pow[k] = static_cast<std::uint8_t>(pw[k]);
            }
        }
        p.add_term(m, Complex(value_or(t, "re", 0.0), value_or(t, "im", 0.0)));
    }
    return p;
}

Json to_json(const Box& b)
{
    if (b.global) {
        return {{"unit", b.dim}};
    }
    return {{"lo", head(b.lo, b.dim)}, {"hi", head(b.hi, b.dim)}};
}

Box box_from_json(const Json& j)
{
    if (j.contains("unit")) {
        return Box::unit(j.at("unit").get<int>());
    }
    const Json& lo = field(j, "lo", "box");
    const Json& hi = field(j, "hi", "box");
    if (lo.size() != hi.size() || lo.empty()) {
        throw StructuralError("box corners must have equal nonzero length");
    }
    return Box::make(static_cast<int>(lo.size()), vec_from(lo, "lo"), vec_from(hi, "hi"));
}

Json to_json(const LiftedForm& f)
{
    Json comps = Json::array();
    for (const auto& [mask, c] : f.components()) {
        Json axes = Json::array();
        for (int k = 0; k < kMaxDim; ++k) {
            if (mask & (1u << k)) {
                axes.push_back(k);
            }
        }
        comps.push_back({{"axes", axes}, {"coef", to_json(c)}});
    }
    return {{"dim", f.dim()}, {"degree", f.degree()}, {"box", to_json(f.box())}, {"components", comps}};
}

LiftedForm lifted_form_from_json(const Json& j)
{
    int dim = field(j, "dim", "form").get<int>();
    int degree = field(j, "degree", "form").get<int>();
    Box box = j.contains("box") ? box_from_json(j.at("box")) : Box::unit(dim);
    if (box.dim != dim) {
        throw StructuralError("form box dimension differs from form dimension");
    }
    LiftedForm f = LiftedForm::zero(dim, degree, box);
    for (const auto& c : value_or(j, "components", Json::array())) {
        std::uint8_t mask = mask_from(field(c, "axes", "form component"));
        if (popcount(mask) != degree) {
            throw StructuralError("form component has the wrong number of axes");
        }
        f.add_component(mask, trig_poly_from_json(field(c, "coef", "form component"), dim));
    }
    return f;
}

Json to_json(const SmoothMap& m)
{
    if (!m.is_poly()) {
        throw StructuralError("only polynomial maps can be serialized");
    }
    Json comps = Json::array();
    for (const auto& c : m.components()) {
        comps.push_back(to_json(c));
    }
    return {{"param_dim", m.param_dim()}, {"out_dim", m.out_dim()}, {"components", comps}};
}

SmoothMap smooth_map_from_json(const Json& j)
{
    if (j.contains("random_loop")) {
        const Json& r = j.at("random_loop");
        Rng rng(value_or<std::uint64_t>(r, "seed", 0));
        return random_loop(field(r, "dim", "random_loop").get<int>(), ivec_from(field(r, "winding", "random_loop"), "winding"),
                           rng, value_or(r, "amp", 0.05), value_or(r, "max_freq", 3))
            .map;
    }
    if (j.contains("random_cylinder")) {
        const Json& r = j.at("random_cylinder");
        Rng rng(value_or<std::uint64_t>(r, "seed", 0));
        return random_cylinder(field(r, "dim", "random_cylinder").get<int>(), ivec_from(field(r, "w_s", "random_cylinder"), "w_s"),
                               ivec_from(field(r, "w_t", "random_cylinder"), "w_t"), rng, value_or(r, "amp", 0.03),
                               value_or(r, "max_freq", 2))
            .map;
    }
    int pd = field(j, "param_dim", "map").get<int>();
    int od = field(j, "out_dim", "map").get<int>();
    if (j.contains("components")) {
        std::vector<TrigPoly> comps;
        for (const auto& c : j.at("components")) {
            comps.push_back(trig_poly_from_json(c, pd));
        }
        return SmoothMap::poly(pd, od, std::move(comps));
    }
    // Affine-plus-Fourier shorthand.
    std::vector<IVec> columns;
    for (const auto& c : value_or(j, "winding", Json::array())) {
        columns.push_back(ivec_from(c, "winding column"));
    }
    if (static_cast<int>(columns.size()) > pd) {
        throw StructuralError("more winding columns than parameters");
    }
    Vec offset = j.contains("offset") ? vec_from(j.at("offset"), "offset") : Vec{};
    return affine_trig_map(pd, od, columns, offset, terms_from(value_or(j, "terms", Json::array())));
}

LoopMap loop_from_json(const Json& j) { return LoopMap(smooth_map_from_json(j)); }
CylinderMap cylinder_from_json(const Json& j) { return CylinderMap(smooth_map_from_json(j)); }

Json to_json(const Cover& c)
{
    if (c.pull()) {
        throw StructuralError("pulled-back covers cannot be serialized");
    }
    if (c.same_as(Cover::standard(c.dim()))) {
        return {{"kind", "standard"}, {"dim", c.dim()}};
    }
    if (c.same_as(Cover::refined_standard(c.dim()))) {
        return {{"kind", "refined"}, {"dim", c.dim()}};
    }
    if (c.is_product()) {
        Json factors = Json::array();
        for (const auto& f : c.factor_arcs()) {
            Json arcs = Json::array();
            for (const auto& a : f) {
                arcs.push_back({a.lo, a.hi});
            }
            factors.push_back(arcs);
        }
        return {{"kind", "product"}, {"arcs", factors}};
    }
    Json boxes = Json::array();
    for (int a = 0; a < c.size(); ++a) {
        boxes.push_back(to_json(c.chart(a)));
    }
    return {{"kind", "boxes"}, {"dim", c.dim()}, {"boxes", boxes}};
}

Cover cover_from_json(const Json& j)
{
    std::string kind = value_or<std::string>(j, "kind", "standard");
    if (kind == "standard") {
        return Cover::standard(field(j, "dim", "cover").get<int>());
    }
    if (kind == "refined") {
        return Cover::refined_standard(field(j, "dim", "cover").get<int>());
    }
    if (kind == "product") {
        std::vector<std::vector<Arc>> factors;
        for (const auto& f : field(j, "arcs", "cover")) {
            std::vector<Arc> arcs;
            for (const auto& a : f) {
                arcs.push_back(Arc{a.at(0).get<double>(), a.at(1).get<double>()});
            }
            factors.push_back(arcs);
        }
        return Cover::product(factors);
    }
    if (kind == "boxes") {
        std::vector<Box> boxes;
        for (const auto& b : field(j, "boxes", "cover")) {
            boxes.push_back(box_from_json(b));
        }
        return Cover::from_boxes(field(j, "dim", "cover").get<int>(), boxes);
    }
    throw StructuralError("unknown cover kind '" + kind + "'");
}

Json to_json(const CechCochain& c)
{
    Json vals = Json::array();
    for (const auto& [t, comps] : c.values) {
        Json forms = Json::array();
        for (const auto& v : comps) {
            if (!v.is_lifted()) {
                throw StructuralError("cochain values built from a partition of unity cannot be serialized");
            }
            forms.push_back(to_json(v.base()));
        }
        vals.push_back({{"tuple", t}, {"components", forms}});
    }
    return {{"p", c.p}, {"q", c.q}, {"u1", c.u1}, {"values", vals}};
}

CechCochain cochain_from_json(const Json& j, const Cover& cover)
{
    int p = field(j, "p", "cochain").get<int>();
    int q = field(j, "q", "cochain").get<int>();
    CechCochain c = CechCochain::zero(cover, p, q, value_or(j, "u1", false));
    for (const auto& v : value_or(j, "values", Json::array())) {
        Tuple t = field(v, "tuple", "cochain value").get<Tuple>();
        if (static_cast<int>(t.size()) != p + 1 || sort_tuple(t) != 1) {
            throw StructuralError("cochain tuples must be strictly increasing with p+1 entries");
        }
        const auto& boxes = cover.components(t);
        const Json& comps = field(v, "components", "cochain value");
        if (comps.size() != boxes.size()) {
            throw StructuralError("cochain value has " + std::to_string(comps.size()) + " components, the intersection has " +
                                  std::to_string(boxes.size()));
        }
        for (std::size_t k = 0; k < boxes.size(); ++k) {
            LiftedForm f = lifted_form_from_json(comps[k]);
            if (f.degree() != q) {
                throw StructuralError("cochain value has the wrong form degree");
            }
            c.at(t, static_cast<int>(k)) = ChartForm(f.with_box(boxes[k]));
        }
    }
    return c;
}

Json to_json(const LineBundleData& l)
{
    return {{"type", "line_bundle"}, {"cover", to_json(l.cover)}, {"q", to_json(l.q)}, {"a", to_json(l.a)}};
}

LineBundleData line_bundle_from_json(const Json& j)
{
    LineBundleData l;
    if (j.contains("tensor")) {
        const Json& parts = j.at("tensor");
        if (!parts.is_array() || parts.empty()) {
            throw StructuralError("tensor needs a nonempty list of bundles");
        }
        l = line_bundle_from_json(parts[0]);
        for (std::size_t i = 1; i < parts.size(); ++i) {
            l = tensor(l, line_bundle_from_json(parts[i]));
        }
    } else if (j.contains("dual")) {
        l = dual(line_bundle_from_json(j.at("dual")));
    } else {
        Cover cover = j.contains("cover") ? cover_from_json(j.at("cover")) : Cover::standard(2);
        std::string builder = value_or<std::string>(j, "builder", "explicit");
        if (builder == "standard") {
            auto axes = value_or(j, "axes", std::vector<int>{0, 1});
            if (axes.size() != 2) {
                throw StructuralError("standard line bundle needs two axes");
            }
            l = standard_line_bundle(field(j, "k", "line bundle").get<int>(), cover, axes[0], axes[1]);
        } else if (builder == "trivial") {
            l = trivial_line_bundle(cover);
        } else if (builder == "explicit") {
            l.cover = cover;
            l.q = cochain_from_json(field(j, "q", "line bundle"), cover);
            l.a = cochain_from_json(field(j, "a", "line bundle"), cover);
        } else {
            throw StructuralError("unknown line bundle builder '" + builder + "'");
        }
    }
    if (j.contains("global_form")) {
        add_global(l.a, lifted_form_from_json(j.at("global_form")));
    }
    if (j.contains("gauge")) {
        const Json& g = j.at("gauge");
        Rng rng(value_or<std::uint64_t>(g, "seed", 0));
        l = gauge_transform(l, random_cochain(l.cover, 0, 0, rng, true) * value_or(g, "scale", 1.0));
    }
    return l;
}

Json to_json(const GerbeData& g)
{
    Json out{{"type", "gerbe"}, {"cover", to_json(g.cover)}, {"q", to_json(g.q)}, {"a", to_json(g.a)}};
    out["F"] = all_lifted(g.F) ? to_json(g.F) : Json("solve");
    return out;
}

GerbeData gerbe_from_json(const Json& j)
{
    GerbeData g;
    if (j.contains("product")) {
        const Json& parts = j.at("product");
        if (!parts.is_array() || parts.empty()) {
            throw StructuralError("product needs a nonempty list of gerbes");
        }
        g = gerbe_from_json(parts[0]);
        for (std::size_t i = 1; i < parts.size(); ++i) {
            g = product(g, gerbe_from_json(parts[i]));
        }
    } else if (j.contains("inverse")) {
        g = inverse(gerbe_from_json(j.at("inverse")));
    } else {
        std::string builder = value_or<std::string>(j, "builder", "explicit");
        if (builder == "standard") {
            Cover cover = j.contains("cover") ? cover_from_json(j.at("cover")) : Cover::standard(3);
            g = standard_gerbe(field(j, "k", "gerbe").get<int>(), cover);
        } else if (builder == "trivial") {
            g = trivial_gerbe(j.contains("cover") ? cover_from_json(j.at("cover")) : Cover::standard(3));
        } else if (builder == "index") {
            SpectralFamily fam = family_from_json(field(j, "family", "index gerbe"));
            Cover cover = j.contains("cover") ? cover_from_json(j.at("cover")) : Cover::standard(fam.base_dim);
            SpectralCut cuts = cuts_from_json(value_or(j, "cuts", Json{{"auto", true}}), fam, cover);
            g = index_gerbe_build(fam, cover, cuts);
        } else if (builder == "explicit") {
            g.cover = cover_from_json(field(j, "cover", "gerbe"));
            g.q = cochain_from_json(field(j, "q", "gerbe"), g.cover);
            g.a = cochain_from_json(field(j, "a", "gerbe"), g.cover);
            const Json& f = field(j, "F", "gerbe");
            if (f.is_string()) {
                if (f.get<std::string>() != "solve") {
                    throw StructuralError("gerbe F must be a cochain or \"solve\"");
                }
                g.F = CechCochain::zero(g.cover, 0, 2);
                g = solve_F(g);
            } else {
                g.F = cochain_from_json(f, g.cover);
            }
        } else {
            throw StructuralError("unknown gerbe builder '" + builder + "'");
        }
    }
    for (const auto& m : value_or(j, "modify", Json::array())) {
        std::string kind = field(m, "kind", "gerbe modification").get<std::string>();
        Rng rng(value_or<std::uint64_t>(m, "seed", 0));
        double scale = value_or(m, "scale", 1.0);
        if (kind == "line_bundles") {
            g = modify_by_line_bundles(g, random_cochain(g.cover, 0, 1, rng) * scale);
        } else if (kind == "sections") {
            g = modify_by_sections(g, random_cochain(g.cover, 1, 0, rng, true) * scale);
        } else if (kind == "global_form") {
            add_global(g.F, lifted_form_from_json(field(m, "form", "global_form modification")));
        } else {
            throw StructuralError("unknown gerbe modification '" + kind + "'");
        }
    }
    return g;
}

Json to_json(const SpectralFamily& f)
{
    Json modes = Json::array();
    for (const auto& [n, p] : f.mode_psi) {
        modes.push_back({{"n", n}, {"psi", to_json(p)}});
    }
    return {{"type", "family"},
            {"base_dim", f.base_dim},
            {"phi", to_json(f.phi)},
            {"psi", to_json(f.psi.dim() == 0 ? TrigPoly(f.base_dim) : f.psi)},
            {"mode_psi", modes},
            {"n_max", f.n_max}};
}

SpectralFamily family_from_json(const Json& j)
{
    SpectralFamily f;
    f.base_dim = field(j, "base_dim", "family").get<int>();
    if (j.contains("phi")) {
        f.phi = smooth_map_from_json(j.at("phi"));
    } else {
        IVec w = ivec_from(value_or(j, "winding", Json::array()), "winding");
        f = make_family(f.base_dim, w, value_or(j, "offset", 0.0), terms_from(value_or(j, "terms", Json::array())));
    }
    f.psi = j.contains("psi") ? trig_poly_from_json(j.at("psi"), f.base_dim) : TrigPoly(f.base_dim);
    for (const auto& m : value_or(j, "mode_psi", Json::array())) {
        f.mode_psi[field(m, "n", "mode rotation").get<int>()] = trig_poly_from_json(field(m, "psi", "mode rotation"), f.base_dim);
    }
    f.n_max = value_or(j, "n_max", 4096);
    f.validate();
    return f;
}

Json to_json(const SpectralCut& c) { return {{"c", c.c}, {"delta", c.delta}}; }

SpectralCut cuts_from_json(const Json& j, const SpectralFamily& fam, const Cover& cover)
{
    if (value_or(j, "auto", false)) {
        return auto_cuts(fam, cover, value_or(j, "shift", std::vector<int>{}));
    }
    SpectralCut c;
    c.c = field(j, "c", "cuts").get<std::vector<double>>();
    c.delta = field(j, "delta", "cuts").get<std::vector<double>>();
    return c;
}

} // namespace loopgerbe
