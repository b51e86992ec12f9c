#include "loopgerbe/cover.hpp"

#include <algorithm>
#include <cmath>

#include "loopgerbe/error.hpp"

namespace loopgerbe {

struct Cover::Data {
    int dim = 0;
    std::vector<Box> charts;
    std::vector<std::vector<Arc>> factor_arcs;
    std::map<Tuple, std::vector<Box>> nerve;
};

namespace {

constexpr double kMinOverlap = 1e-12;

std::vector<Box> intersect(const Box& k, const Box& b)
{
    std::vector<std::vector<std::pair<double, double>>> axes(k.dim);
    for (int i = 0; i < k.dim; ++i) {
        for (int s = -2; s <= 2; ++s) {
            double lo = std::max(k.lo[i], b.lo[i] + s);
            double hi = std::min(k.hi[i], b.hi[i] + s);
            if (hi - lo > kMinOverlap) {
                axes[i].emplace_back(lo, hi);
            }
        }
        if (axes[i].empty()) {
            return {};
        }
    }
    std::vector<Box> out{Box{}};
    out[0].dim = k.dim;
    for (int i = 0; i < k.dim; ++i) {
        std::vector<Box> next;
        for (const auto& partial : out) {
            for (const auto& [lo, hi] : axes[i]) {
                Box nb = partial;
                nb.lo[i] = lo;
                nb.hi[i] = hi;
                next.push_back(nb);
            }
        }
        out = std::move(next);
    }
    return out;
}

std::shared_ptr<Cover::Data> build(int dim, std::vector<Box> charts)
{
    auto d = std::make_shared<Cover::Data>();
    d->dim = dim;
    d->charts = std::move(charts);
    int n = static_cast<int>(d->charts.size());
    for (int a = 0; a < n; ++a) {
        if (d->charts[a].dim != dim) {
            throw StructuralError("chart box dimension mismatch");
        }
        d->nerve[{a}] = {d->charts[a]};
    }
    std::vector<Tuple> frontier;
    for (int a = 0; a < n; ++a) {
        frontier.push_back({a});
    }
    for (int len = 2; len <= 4; ++len) {
        std::vector<Tuple> next;
        for (const auto& t : frontier) {
            const auto& comps = d->nerve.at(t);
            for (int c = t.back() + 1; c < n; ++c) {
                std::vector<Box> out;
                for (const auto& k : comps) {
                    auto parts = intersect(k, d->charts[c]);
                    out.insert(out.end(), parts.begin(), parts.end());
                }
                if (!out.empty()) {
                    Tuple nt = t;
                    nt.push_back(c);
                    d->nerve[nt] = std::move(out);
                    next.push_back(std::move(nt));
                }
            }
        }
        frontier = std::move(next);
    }
    return d;
}

} // namespace

int sort_tuple(Tuple& t)
{
    int sign = 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = 0; j + 1 < t.size() - i; ++j) {
            if (t[j] > t[j + 1]) {
                std::swap(t[j], t[j + 1]);
                sign = -sign;
            }
        }
    }
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (t[i] == t[i + 1]) {
            return 0;
        }
    }
    return sign;
}

Cover Cover::product(std::vector<std::vector<Arc>> factor_arcs)
{
    int dim = static_cast<int>(factor_arcs.size());
    if (dim < 1 || dim > kMaxDim) {
        throw StructuralError("product cover dimension must be 1..3");
    }
    std::vector<Box> charts;
    std::size_t total = 1;
    for (const auto& f : factor_arcs) {
        total *= f.size();
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vec lo{}, hi{};
        std::size_t rest = idx;
        for (int i = 0; i < dim; ++i) {
            const Arc& arc = factor_arcs[i][rest % factor_arcs[i].size()];
            rest /= factor_arcs[i].size();
            lo[i] = arc.lo;
            hi[i] = arc.hi;
        }
        charts.push_back(Box::make(dim, lo, hi));
    }
    auto d = build(dim, std::move(charts));
    d->factor_arcs = std::move(factor_arcs);
    Cover c;
    c.data_ = std::move(d);
    return c;
}

Cover Cover::from_boxes(int dim, std::vector<Box> boxes)
{
    Cover c;
    c.data_ = build(dim, std::move(boxes));
    return c;
}

std::vector<Arc> Cover::standard_arcs()
{
    const double half = 5.0 / 24.0;
    return {{-half, half}, {1.0 / 3.0 - half, 1.0 / 3.0 + half}, {2.0 / 3.0 - half, 2.0 / 3.0 + half}};
}

std::vector<Arc> Cover::refined_arcs()
{
    const double u = 1.0 / 24.0;
    return {{-4.8 * u, 4.8 * u}, {3.12 * u, 8.16 * u}, {7.92 * u, 12.96 * u}, {11.28 * u, 16.8 * u},
            {16.56 * u, 20.88 * u}};
}

Cover Cover::standard(int dim)
{
    if (dim < 1 || dim > kMaxDim) {
        throw StructuralError("standard cover dimension must be 1..3");
    }
    return product(std::vector<std::vector<Arc>>(dim, standard_arcs()));
}

Cover Cover::refined_standard(int dim)
{
    return product(std::vector<std::vector<Arc>>(dim, refined_arcs()));
}

int Cover::dim() const { return pull_ ? pull_->param_dim() : data_->dim; }
int Cover::target_dim() const { return data_->dim; }
int Cover::size() const { return data_ ? static_cast<int>(data_->charts.size()) : 0; }
const Box& Cover::chart(int a) const { return data_->charts.at(a); }
bool Cover::is_product() const { return !data_->factor_arcs.empty(); }
const std::vector<std::vector<Arc>>& Cover::factor_arcs() const { return data_->factor_arcs; }

std::vector<int> Cover::chart_factors(int a) const
{
    std::vector<int> out;
    int rest = a;
    for (const auto& f : data_->factor_arcs) {
        out.push_back(rest % static_cast<int>(f.size()));
        rest /= static_cast<int>(f.size());
    }
    return out;
}

const std::vector<Box>& Cover::components(const Tuple& tuple) const
{
    static const std::vector<Box> empty;
    auto it = data_->nerve.find(tuple);
    return it == data_->nerve.end() ? empty : it->second;
}

std::vector<Tuple> Cover::tuples(int length) const
{
    std::vector<Tuple> out;
    for (const auto& [t, comps] : data_->nerve) {
        if (static_cast<int>(t.size()) == length) {
            out.push_back(t);
        }
    }
    return out;
}

const std::optional<SmoothMap>& Cover::pull() const { return pull_; }

Cover Cover::pulled_back(const SmoothMap& f) const
{
    if (f.out_dim() != dim()) {
        throw StructuralError("pullback map does not land in the covered torus");
    }
    Cover c = *this;
    c.pull_ = pull_ ? SmoothMap::compose(*pull_, f) : f;
    return c;
}

bool Cover::same_as(const Cover& o) const
{
    if (data_ != o.data_) {
        if (!data_ || !o.data_ || data_->charts.size() != o.data_->charts.size()) {
            return false;
        }
        for (std::size_t i = 0; i < data_->charts.size(); ++i) {
            if (!(data_->charts[i] == o.data_->charts[i])) {
                return false;
            }
        }
    }
    if (pull_.has_value() != o.pull_.has_value()) {
        return false;
    }
    if (!pull_) {
        return true;
    }
    if (pull_->param_dim() != o.pull_->param_dim()) {
        return false;
    }
    // Maps compared on a fixed sample set.
    for (int k = 0; k < 7; ++k) {
        Vec p{};
        for (int i = 0; i < pull_->param_dim(); ++i) {
            p[i] = std::fmod(0.137 * (k + 1) + 0.291 * i * (k + 2), 1.0);
        }
        Vec a = pull_->eval(p), b = o.pull_->eval(p);
        for (int i = 0; i < pull_->out_dim(); ++i) {
            double diff = a[i] - b[i];
            if (std::abs(diff - std::round(diff)) > 1e-12) {
                return false;
            }
        }
    }
    return true;
}

Vec Cover::to_target(const Vec& x) const { return pull_ ? pull_->eval(x) : x; }

Vec Cover::to_target(const Vec& x, std::span<Vec> vectors) const
{
    if (!pull_) {
        return x;
    }
    Vec y;
    Jacobian j;
    pull_->eval_with_jacobian(x, y, j);
    for (auto& v : vectors) {
        Vec w{};
        for (int i = 0; i < pull_->out_dim(); ++i) {
            for (int k = 0; k < pull_->param_dim(); ++k) {
                w[i] += j[k][i] * v[k];
            }
        }
        v = w;
    }
    return y;
}

bool Cover::contains(int a, const Vec& x, double tol) const
{
    return data_->charts[a].lift(to_target(x), tol).has_value();
}

int Cover::locate(const Tuple& tuple, const Vec& y, double tol) const
{
    const auto& comps = components(tuple);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].lift(y, tol)) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

std::vector<int> find_refinement(const Cover& fine, const Cover& coarse)
{
    std::vector<int> s;
    for (int m = 0; m < fine.size(); ++m) {
        int found = -1;
        for (int a = 0; a < coarse.size() && found < 0; ++a) {
            if (fine.chart(m).shift_into(coarse.chart(a), kBoxTol)) {
                found = a;
            }
        }
        if (found < 0) {
            throw StructuralError("chart " + std::to_string(m) + " is not inside any coarse chart");
        }
        s.push_back(found);
    }
    return s;
}

void check_refinement(const Cover& fine, const Cover& coarse, const std::vector<int>& s)
{
    if (static_cast<int>(s.size()) != fine.size()) {
        throw StructuralError("refinement map has wrong length");
    }
    for (int m = 0; m < fine.size(); ++m) {
        if (s[m] < 0 || s[m] >= coarse.size() || !fine.chart(m).shift_into(coarse.chart(s[m]), kBoxTol)) {
            throw StructuralError("refinement map sends chart " + std::to_string(m) + " outside chart "
                                  + std::to_string(s[m]));
        }
    }
}

} // namespace loopgerbe
