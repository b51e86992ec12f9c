#include "loopgerbe/cochain.hpp"

#include <cmath>
#include <sstream>

#include "loopgerbe/error.hpp"
#include "loopgerbe/parallel.hpp"

namespace loopgerbe {

namespace {

std::string tuple_str(const Tuple& t)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < t.size(); ++i) {
        os << (i ? "," : "") << t[i];
    }
    os << ')';
    return os.str();
}

void check_same(const CechCochain& a, const CechCochain& b)
{
    if (a.p != b.p || a.q != b.q || !a.cover.same_as(b.cover)) {
        throw StructuralError("cochains differ in bidegree or cover");
    }
}

} // namespace

CechCochain CechCochain::zero(const Cover& cover, int p, int q, bool u1)
{
    if (p < 0 || p > 3 || q < 0 || q > cover.target_dim()) {
        throw StructuralError("cochain bidegree out of range");
    }
    if (u1 && q != 0) {
        throw StructuralError("U(1) cochains have form degree 0");
    }
    CechCochain c;
    c.cover = cover;
    c.p = p;
    c.q = q;
    c.u1 = u1;
    for (const auto& t : cover.tuples(p + 1)) {
        auto& vals = c.values[t];
        for (const auto& k : cover.components(t)) {
            vals.push_back(ChartForm::zero(cover.target_dim(), q, k));
        }
    }
    return c;
}

ChartForm& CechCochain::at(const Tuple& sorted, int component)
{
    auto it = values.find(sorted);
    if (it == values.end() || component >= static_cast<int>(it->second.size())) {
        throw StructuralError("missing cochain value on " + tuple_str(sorted));
    }
    return it->second[component];
}

const ChartForm& CechCochain::at(const Tuple& sorted, int component) const
{
    return const_cast<CechCochain*>(this)->at(sorted, component);
}

ChartForm CechCochain::restricted(const Tuple& tuple, const Box& k) const
{
    Tuple t = tuple;
    int sign = sort_tuple(t);
    if (sign == 0) {
        return ChartForm::zero(cover.target_dim(), q, k);
    }
    const auto& comps = cover.components(t);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (k.shift_into(comps[i], kBoxTol)) {
            ChartForm v = at(t, static_cast<int>(i)).reboxed(k);
            return sign > 0 ? v : v * -1.0;
        }
    }
    throw StructuralError("box " + k.str() + " lies in no component of " + tuple_str(t));
}

double CechCochain::eval(const Tuple& tuple, const Vec& y, std::span<const Vec> vectors) const
{
    Tuple t = tuple;
    int sign = sort_tuple(t);
    if (sign == 0) {
        return 0.0;
    }
    int comp = cover.locate(t, y);
    if (comp < 0) {
        throw DomainError("point outside the intersection " + tuple_str(t));
    }
    return sign * at(t, comp).eval(y, vectors);
}

CechCochain CechCochain::operator+(const CechCochain& o) const
{
    check_same(*this, o);
    CechCochain r = *this;
    for (auto& [t, vals] : r.values) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            vals[i] += o.at(t, static_cast<int>(i));
        }
    }
    return r;
}

CechCochain CechCochain::operator-(const CechCochain& o) const { return *this + o * -1.0; }

CechCochain CechCochain::operator*(double s) const
{
    CechCochain r = *this;
    for (auto& [t, vals] : r.values) {
        for (auto& v : vals) {
            v = v * s;
        }
    }
    return r;
}

CechCochain cech_delta(const CechCochain& c)
{
    CechCochain out = CechCochain::zero(c.cover, c.p + 1, c.q, c.u1);
    std::vector<std::pair<Tuple, int>> slots;
    for (const auto& [t, vals] : out.values) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            slots.emplace_back(t, static_cast<int>(i));
        }
    }
    std::vector<ChartForm> results(slots.size());
    parallel_for(slots.size(), [&](std::size_t n) {
        const auto& [t, comp] = slots[n];
        const Box& k = c.cover.components(t)[comp];
        ChartForm acc = ChartForm::zero(c.cover.target_dim(), c.q, k);
        for (std::size_t j = 0; j < t.size(); ++j) {
            Tuple face;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (i != j) {
                    face.push_back(t[i]);
                }
            }
            ChartForm v = c.restricted(face, k);
            acc += (j % 2 == 0) ? v : v * -1.0;
        }
        results[n] = std::move(acc);
    });
    for (std::size_t n = 0; n < slots.size(); ++n) {
        out.at(slots[n].first, slots[n].second) = std::move(results[n]);
    }
    return out;
}

CechCochain exterior_d(const CechCochain& c)
{
    if (c.q >= c.cover.target_dim()) {
        throw StructuralError("exterior derivative of a top-degree cochain");
    }
    CechCochain out;
    out.cover = c.cover;
    out.p = c.p;
    out.q = c.q + 1;
    for (const auto& [t, vals] : c.values) {
        auto& ov = out.values[t];
        for (const auto& v : vals) {
            ov.push_back(v.d());
        }
    }
    return out;
}

TotalCochain d_total(const TotalCochain& c, bool flip_sign)
{
    int k = c.degree, top = c.truncation;
    if (static_cast<int>(c.parts.size()) != std::min(k, top) + 1) {
        throw StructuralError("total cochain has the wrong number of parts");
    }
    for (int j = 0; j < static_cast<int>(c.parts.size()); ++j) {
        if (c.parts[j].p != k - j || c.parts[j].q != j) {
            throw StructuralError("total cochain part has the wrong bidegree");
        }
    }
    if (k + 1 > 3) {
        throw StructuralError("total degree exceeds the stored nerve");
    }
    TotalCochain out;
    out.degree = k + 1;
    out.truncation = top;
    int nparts = std::min(k + 1, top) + 1;
    for (int j = 0; j < nparts; ++j) {
        std::optional<CechCochain> part;
        if (j < static_cast<int>(c.parts.size())) {
            part = cech_delta(c.parts[j]);
        }
        if (j >= 1) {
            const CechCochain& src = c.parts[j - 1];
            int sign = (src.p % 2 == 0 || flip_sign) ? 1 : -1;
            CechCochain dpart = exterior_d(src) * static_cast<double>(sign);
            part = part ? *part + dpart : dpart;
        }
        part->u1 = (j == 0) && c.parts[0].u1;
        out.parts.push_back(std::move(*part));
    }
    return out;
}

ResidualReport vanishing_report(const TotalCochain& c, double tol, int grid)
{
    struct Slot {
        int part;
        Tuple tuple;
        int comp;
    };
    std::vector<Slot> slots;
    for (int j = 0; j < static_cast<int>(c.parts.size()); ++j) {
        for (const auto& [t, vals] : c.parts[j].values) {
            for (std::size_t i = 0; i < vals.size(); ++i) {
                slots.push_back({j, t, static_cast<int>(i)});
            }
        }
    }
    std::vector<std::pair<double, Vec>> worst(slots.size(), {0.0, Vec{}});
    parallel_for(slots.size(), [&](std::size_t n) {
        const Slot& s = slots[n];
        const CechCochain& part = c.parts[s.part];
        const ChartForm& v = part.at(s.tuple, s.comp);
        const Box& b = v.box();
        int dim = b.dim;
        int total = 1;
        for (int i = 0; i < dim; ++i) {
            total *= grid;
        }
        auto probe = [&](const Vec& x) {
            double r;
            if (part.u1) {
                double val = v.eval_lifted(x, {});
                r = std::abs(val - std::round(val));
            } else {
                r = max_component_lifted(v, x);
            }
            if (r > worst[n].first || std::isnan(r)) {
                worst[n] = {std::isnan(r) ? INFINITY : r, x};
            }
        };
        for (int g = 0; g < total; ++g) {
            Vec x{};
            int rest = g;
            for (int i = 0; i < dim; ++i) {
                double f = (rest % grid + 1.0) / (grid + 1.0);
                rest /= grid;
                x[i] = b.lo[i] + f * (b.hi[i] - b.lo[i]);
            }
            probe(x);
        }
        probe(b.center());
    });
    ResidualReport rep;
    rep.part_residuals.assign(c.parts.size(), 0.0);
    for (std::size_t n = 0; n < slots.size(); ++n) {
        double r = worst[n].first;
        auto& pr = rep.part_residuals[slots[n].part];
        pr = std::max(pr, r);
        if (r > rep.max_residual) {
            rep.max_residual = r;
            std::ostringstream os;
            const Vec& x = worst[n].second;
            os << "part " << slots[n].part << " tuple " << tuple_str(slots[n].tuple) << " at (";
            for (int i = 0; i < c.parts[slots[n].part].cover.target_dim(); ++i) {
                os << (i ? "," : "") << x[i];
            }
            os << ")";
            rep.worst = os.str();
        }
    }
    rep.ok = rep.max_residual < tol;
    return rep;
}

ResidualReport is_cocycle(const DeligneClassRep& rep, double tol, int grid)
{
    return vanishing_report(d_total(rep), tol, grid);
}

CechCochain refine(const CechCochain& c, const Cover& fine, const std::vector<int>& s)
{
    check_refinement(fine, c.cover, s);
    CechCochain out = CechCochain::zero(fine, c.p, c.q, c.u1);
    for (auto& [t, vals] : out.values) {
        Tuple image;
        for (int m : t) {
            image.push_back(s[m]);
        }
        for (std::size_t i = 0; i < vals.size(); ++i) {
            vals[i] = c.restricted(image, fine.components(t)[i]);
        }
    }
    return out;
}

DeligneClassRep refine(const DeligneClassRep& rep, const Cover& fine, const std::vector<int>& s)
{
    DeligneClassRep out = rep;
    for (auto& part : out.parts) {
        part = refine(part, fine, s);
    }
    return out;
}

long long snap_integer(double x, double tol)
{
    double r = std::round(x);
    if (!(std::abs(x - r) <= tol)) {
        throw IntegralityError("value " + std::to_string(x) + " is not within " + std::to_string(tol)
                               + " of an integer");
    }
    return static_cast<long long>(r);
}

} // namespace loopgerbe
