#include "loopgerbe/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "loopgerbe/error.hpp"

namespace loopgerbe {

namespace {

/// Truncated Taylor jet of order 3 in one variable.
struct Jet {
    std::array<double, 4> v{};

    static Jet var(double x) { return Jet{{x, 1.0, 0.0, 0.0}}; }
    static Jet constant(double c) { return Jet{{c, 0.0, 0.0, 0.0}}; }

    Jet operator+(const Jet& o) const
    {
        Jet r;
        for (int i = 0; i < 4; ++i) {
            r.v[i] = v[i] + o.v[i];
        }
        return r;
    }
    Jet operator-(const Jet& o) const
    {
        Jet r;
        for (int i = 0; i < 4; ++i) {
            r.v[i] = v[i] - o.v[i];
        }
        return r;
    }
    Jet operator*(const Jet& o) const
    {
        const auto& a = v;
        const auto& b = o.v;
        return Jet{{a[0] * b[0], a[1] * b[0] + a[0] * b[1], a[2] * b[0] + 2 * a[1] * b[1] + a[0] * b[2],
                    a[3] * b[0] + 3 * a[2] * b[1] + 3 * a[1] * b[2] + a[0] * b[3]}};
    }
};

/// f(g(x)) for a scalar function given by its derivatives f0..f3 at g(x).
Jet compose(const std::array<double, 4>& f, const Jet& g)
{
    double g1 = g.v[1], g2 = g.v[2], g3 = g.v[3];
    return Jet{{f[0], f[1] * g1, f[2] * g1 * g1 + f[1] * g2, f[3] * g1 * g1 * g1 + 3 * f[2] * g1 * g2 + f[1] * g3}};
}

Jet reciprocal(const Jet& g)
{
    double x = g.v[0];
    return compose({1 / x, -1 / (x * x), 2 / (x * x * x), -6 / (x * x * x * x)}, g);
}

} // namespace

std::array<double, 4> smooth_step_jet(double s)
{
    if (s <= 0.0) {
        return {0.0, 0.0, 0.0, 0.0};
    }
    if (s >= 1.0) {
        return {1.0, 0.0, 0.0, 0.0};
    }
    // sigma = 1 / (1 + e^v), v = 1/s - 1/(1-s).
    Jet x = Jet::var(s);
    Jet v = reciprocal(x) - reciprocal(Jet::constant(1.0) - x);
    if (std::abs(v.v[0]) > 600.0) {
        return {v.v[0] > 0 ? 0.0 : 1.0, 0.0, 0.0, 0.0};
    }
    double e = std::exp(v.v[0]);
    Jet ev = compose({e, e, e, e}, v);
    Jet sig = reciprocal(Jet::constant(1.0) + ev);
    return sig.v;
}

struct PartitionOfUnity::Factor {
    struct ArcData {
        double lo = 0, hi = 0;
        double rise0 = 0, rise1 = 0; ///< rising window, lifted into the arc
        double fall0 = 0, fall1 = 0; ///< falling window, lifted into the arc
    };
    std::vector<ArcData> arcs;

    std::array<double, 4> jet(int i, double x) const
    {
        const ArcData& a = arcs[i];
        double xl = x - std::floor(x - a.lo);
        if (xl <= a.lo || xl >= a.hi) {
            return {0.0, 0.0, 0.0, 0.0};
        }
        if (xl < a.rise1) {
            double len = a.rise1 - a.rise0;
            auto j = smooth_step_jet((xl - a.rise0) / len);
            return {j[0], j[1] / len, j[2] / (len * len), j[3] / (len * len * len)};
        }
        if (xl > a.fall0) {
            double len = a.fall1 - a.fall0;
            auto j = smooth_step_jet((xl - a.fall0) / len);
            return {1.0 - j[0], -j[1] / len, -j[2] / (len * len), -j[3] / (len * len * len)};
        }
        return {1.0, 0.0, 0.0, 0.0};
    }
};

namespace {

std::shared_ptr<const PartitionOfUnity::Factor> make_factor(const std::vector<Arc>& arcs, double window)
{
    int m = static_cast<int>(arcs.size());
    if (m < 2) {
        throw StructuralError("partition of unity needs at least two arcs per factor");
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int i) { return wrap_unit(0.5 * (arcs[i].lo + arcs[i].hi)); };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });

    auto f = std::make_shared<PartitionOfUnity::Factor>();
    f->arcs.resize(m);
    for (int i = 0; i < m; ++i) {
        f->arcs[i].lo = arcs[i].lo;
        f->arcs[i].hi = arcs[i].hi;
    }
    for (int r = 0; r < m; ++r) {
        int i = order[r];
        int j = order[(r + 1) % m];
        const Arc& ai = arcs[i];
        const Arc& aj = arcs[j];
        // Lift arc j so that its start lies inside arc i.
        double shift = std::ceil(ai.lo - aj.lo);
        double jlo = aj.lo + shift;
        if (!(jlo > ai.lo && jlo < ai.hi)) {
            throw StructuralError("arcs of a factor do not form a cyclic chain");
        }
        double o0 = jlo, o1 = std::min(ai.hi, aj.hi + shift);
        double c = 0.5 * (o0 + o1), h = 0.5 * window * (o1 - o0);
        f->arcs[i].fall0 = c - h;
        f->arcs[i].fall1 = c + h;
        f->arcs[j].rise0 = c - h - shift;
        f->arcs[j].rise1 = c + h - shift;
    }
    for (const auto& a : f->arcs) {
        if (!(a.rise1 < a.fall0)) {
            throw StructuralError("transition windows overlap: a factor has triple overlaps");
        }
    }
    return f;
}

} // namespace

std::shared_ptr<const PartitionOfUnity> PartitionOfUnity::make(const Cover& cover, double window)
{
    if (!cover.is_product()) {
        throw StructuralError("partition of unity requires a product arc cover");
    }
    if (!(window > 0.0 && window <= 1.0)) {
        throw StructuralError("transition window must lie in (0,1]");
    }
    auto p = std::make_shared<PartitionOfUnity>();
    p->dim_ = cover.target_dim();
    p->window_ = window;
    for (const auto& arcs : cover.factor_arcs()) {
        p->factors_.push_back(make_factor(arcs, window));
    }
    for (int a = 0; a < cover.size(); ++a) {
        p->charts_.push_back(cover.chart_factors(a));
    }
    return p;
}

double PartitionOfUnity::weight(int a, const Vec& y, const Deriv& deriv) const
{
    double w = 1.0;
    for (int i = 0; i < dim_; ++i) {
        if (deriv[i] > 3) {
            throw StructuralError("partition weights carry at most third derivatives");
        }
        w *= factors_[i]->jet(charts_.at(a)[i], y[i])[deriv[i]];
        if (w == 0.0) {
            return 0.0;
        }
    }
    return w;
}

} // namespace loopgerbe
