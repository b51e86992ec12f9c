#include "loopgerbe/chart_form.hpp"

#include <cmath>
#include <vector>

#include "loopgerbe/error.hpp"

namespace loopgerbe {

ChartForm::ChartForm(const LiftedForm& f) : base_(f) {}

ChartForm ChartForm::zero(int dim, int degree, const Box& box) { return ChartForm(LiftedForm::zero(dim, degree, box)); }

ChartForm ChartForm::weighted(std::shared_ptr<const PartitionOfUnity> pou, int chart, const LiftedForm& f)
{
    if (!pou || pou->dim() != f.dim()) {
        throw StructuralError("partition dimension does not match the form");
    }
    ChartForm out = zero(f.dim(), f.degree(), f.box());
    out.terms_.emplace(WeightKey{std::move(pou), chart, {}}, f);
    return out;
}

ChartForm ChartForm::operator+(const ChartForm& o) const
{
    ChartForm r = *this;
    r += o;
    return r;
}

ChartForm ChartForm::operator-(const ChartForm& o) const { return *this + o * -1.0; }

ChartForm ChartForm::operator*(double s) const
{
    ChartForm r = *this;
    r.base_ = r.base_ * s;
    for (auto& [k, f] : r.terms_) {
        f = f * s;
    }
    return r;
}

ChartForm& ChartForm::operator+=(const ChartForm& o)
{
    if (!(box() == o.box())) {
        throw StructuralError("adding chart forms on different boxes: " + box().str() + " vs " + o.box().str());
    }
    base_ = base_ + o.base_;
    for (const auto& [k, f] : o.terms_) {
        add_weighted(k, f);
    }
    return *this;
}

ChartForm ChartForm::d() const
{
    ChartForm r(base_.d());
    for (const auto& [k, f] : terms_) {
        r.add_weighted(k, f.d());
        // d(rho) = sum_i d_i rho dx_i
        for (int i = 0; i < dim(); ++i) {
            WeightKey dk = k;
            ++dk.deriv[i];
            r.add_weighted(dk, LiftedForm::differential(dim(), i, box()).wedge(f));
        }
    }
    return r;
}

void ChartForm::add_weighted(const WeightKey& key, const LiftedForm& f)
{
    if (f.is_zero()) {
        return;
    }
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, f);
    } else {
        it->second = it->second + f;
    }
}

ChartForm ChartForm::wedge(const LiftedForm& g) const
{
    ChartForm r(base_.wedge(g));
    for (const auto& [k, f] : terms_) {
        r.terms_.emplace(k, f.wedge(g));
    }
    return r;
}

ChartForm ChartForm::reboxed(const Box& inner) const
{
    ChartForm r(base_.reboxed(inner));
    for (const auto& [k, f] : terms_) {
        r.terms_.emplace(k, f.reboxed(inner));
    }
    return r;
}

double ChartForm::eval_lifted(const Vec& x, std::span<const Vec> vectors) const
{
    double v = base_.eval_lifted(x, vectors);
    for (const auto& [k, f] : terms_) {
        double w = k.pou->weight(k.chart, x, k.deriv);
        if (w != 0.0) {
            v += w * f.eval_lifted(x, vectors);
        }
    }
    return v;
}

double ChartForm::eval(const Vec& y, std::span<const Vec> vectors) const
{
    auto x = box().lift(y);
    if (!x) {
        throw DomainError("point outside chart box " + box().str());
    }
    return eval_lifted(*x, vectors);
}

double max_component_lifted(const ChartForm& f, const Vec& x)
{
    int n = f.dim(), p = f.degree();
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (popcount(static_cast<std::uint8_t>(mask)) != p) {
            continue;
        }
        std::vector<Vec> vecs;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                Vec e{};
                e[i] = 1.0;
                vecs.push_back(e);
            }
        }
        best = std::max(best, std::abs(f.eval_lifted(x, vecs)));
    }
    return best;
}

double ChartForm::max_component(const Vec& y) const
{
    auto x = box().lift(y);
    if (!x) {
        throw DomainError("point outside chart box " + box().str());
    }
    return max_component_lifted(*this, *x);
}

ChartForm ChartForm::pruned(double tol) const
{
    ChartForm r(base_.pruned(tol));
    for (const auto& [k, f] : terms_) {
        LiftedForm g = f.pruned(tol);
        if (!g.is_zero()) {
            r.terms_.emplace(k, g);
        }
    }
    return r;
}

} // namespace loopgerbe

namespace loopgerbe {

namespace {

double depth(const Box& b, const Vec& y)
{
    if (b.global) {
        return 1.0;
    }
    Vec c = b.center();
    double d = 1e300;
    for (int i = 0; i < b.dim; ++i) {
        double off = y[i] - c[i];
        off -= std::round(off);
        d = std::min(d, 0.5 * (b.hi[i] - b.lo[i]) - std::abs(off));
    }
    return d;
}

} // namespace

double GluedForm::eval(const Vec& y, std::span<const Vec> vectors) const
{
    if (exact) {
        return exact->eval(y, vectors);
    }
    int best = -1;
    double best_depth = 0.0;
    for (int a = 0; a < static_cast<int>(charts.size()); ++a) {
        double d = depth(charts[a].box(), y);
        if (d > best_depth) {
            best = a;
            best_depth = d;
        }
    }
    if (best < 0) {
        throw DomainError("point lies in no chart of the glued form");
    }
    return charts[best].eval(y, vectors);
}

double GluedForm::overlap_residual(int grid) const
{
    double worst = 0.0;
    for (const auto& t : cover.tuples(2)) {
        for (const auto& k : cover.components(t)) {
            ChartForm diff = charts[t[0]].reboxed(k) - charts[t[1]].reboxed(k);
            int total = 1;
            for (int i = 0; i < k.dim; ++i) {
                total *= grid;
            }
            for (int g = 0; g < total; ++g) {
                Vec x{};
                int rest = g;
                for (int i = 0; i < k.dim; ++i) {
                    x[i] = k.lo[i] + (rest % grid + 1.0) / (grid + 1.0) * (k.hi[i] - k.lo[i]);
                    rest /= grid;
                }
                worst = std::max(worst, max_component_lifted(diff, x));
            }
        }
    }
    return worst;
}

GluedForm glue(const Cover& cover, std::vector<ChartForm> charts)
{
    if (static_cast<int>(charts.size()) != cover.size()) {
        throw StructuralError("glued form needs one value per chart");
    }
    GluedForm g;
    g.cover = cover;
    g.charts = std::move(charts);
    bool uniform = true;
    const LiftedForm& first = g.charts[0].base();
    for (const auto& c : g.charts) {
        if (!c.is_lifted() || c.base().has_monomials()) {
            uniform = false;
            break;
        }
        LiftedForm diff = c.base().with_box(first.box()) - first;
        if (!diff.is_zero(1e-13)) {
            uniform = false;
            break;
        }
    }
    if (uniform) {
        g.exact = first.with_box(Box::unit(first.dim())).pruned(0.0);
    }
    return g;
}

double integrate_glued(const GluedForm& f, const Quadrature& q)
{
    int n = f.cover.target_dim();
    if (f.degree() != n) {
        throw StructuralError("full-torus integration needs a top-degree form");
    }
    if (f.exact) {
        return integrate_full_torus(*f.exact);
    }
    std::array<Vec, kMaxDim> e{};
    for (int i = 0; i < n; ++i) {
        e[i][i] = 1.0;
    }
    std::span<const Vec> basis(e.data(), n);
    switch (n) {
    case 1:
        return integrate_1d([&](double x) { return f.eval({x, 0, 0}, basis); }, 0, 1, q);
    case 2:
        return integrate_2d([&](double x, double y) { return f.eval({x, y, 0}, basis); }, 0, 1, 0, 1, q);
    default:
        return integrate_3d([&](double x, double y, double z) { return f.eval({x, y, z}, basis); }, {0, 0, 0},
                            {1, 1, 1}, q);
    }
}

} // namespace loopgerbe
