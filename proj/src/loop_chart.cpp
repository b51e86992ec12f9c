#include "loopgerbe/loop_chart.hpp"

#include <algorithm>
#include <cmath>

#include "loopgerbe/chart_form.hpp"
#include "loopgerbe/error.hpp"

namespace loopgerbe {

ClosedPath::ClosedPath(const LoopMap& loop) : dim_(loop.dim()), loop_(true), pieces_{loop.map} {}

ClosedPath::ClosedPath(std::vector<SmoothMap> pieces) : pieces_(std::move(pieces))
{
    if (pieces_.empty()) {
        throw StructuralError("closed path needs at least one piece");
    }
    dim_ = pieces_[0].out_dim();
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
        const auto& p = pieces_[j];
        if (p.param_dim() != 1 || p.out_dim() != dim_) {
            throw StructuralError("path pieces must be one-parameter maps into one torus");
        }
        Vec end = p.eval({1.0, 0, 0});
        Vec start = pieces_[(j + 1) % pieces_.size()].eval({0.0, 0, 0});
        for (int i = 0; i < dim_; ++i) {
            double d = end[i] - start[i];
            if (std::abs(d - std::round(d)) > 1e-9) {
                throw StructuralError("path pieces do not close up at piece " + std::to_string(j));
            }
        }
    }
}

Vec ClosedPath::eval(double t) const
{
    if (loop_) {
        return pieces_[0].eval({t, 0, 0});
    }
    double m = static_cast<double>(pieces_.size());
    double u = (t - std::floor(t)) * m;
    int j = std::min(static_cast<int>(u), static_cast<int>(pieces_.size()) - 1);
    return pieces_[j].eval({u - j, 0, 0});
}

double ClosedPath::integrate(const FormSampler& f, double t0, double t1, const Quadrature& q) const
{
    if (loop_) {
        return line_integral(f, pieces_[0], t0, t1, q);
    }
    int m = static_cast<int>(pieces_.size());
    // Split [t0,t1] at piece boundaries k/m; each part is integrated in its piece's own parameter.
    double acc = 0.0;
    double a = t0 * m, b = t1 * m;
    double k = std::floor(a);
    while (a < b) {
        double e = std::min(b, k + 1.0);
        if (e - a > 0.0) {
            int j = static_cast<int>(((static_cast<long long>(k) % m) + m) % m);
            acc += line_integral(f, pieces_[j], a - k, e - k, q);
        }
        a = e;
        k += 1.0;
    }
    return acc;
}

double LoopChart::seg_begin(int i) const
{
    int nn = n();
    int r = ((i % nn) + nn) % nn;
    return t[r] + std::floor(static_cast<double>(i) / nn);
}

double LoopChart::seg_end(int i) const { return seg_begin(i + 1); }

int LoopChart::label(int i) const
{
    int nn = n();
    return s[((i % nn) + nn) % nn];
}

namespace {

/// Signed distance to the chart walls measured per axis (negative inside).
double signed_outside(const Box& b, const Vec& y)
{
    if (b.global) {
        return -1.0;
    }
    Vec c = b.center();
    double worst = -1e300;
    for (int i = 0; i < b.dim; ++i) {
        double d = y[i] - c[i];
        d -= std::round(d);
        worst = std::max(worst, std::abs(d) - 0.5 * (b.hi[i] - b.lo[i]));
    }
    return worst;
}

/// Smallest chart index keeping every point at least `margin` inside.
int best_chart(const Cover& cover, const std::vector<Vec>& pts, double margin, bool high)
{
    for (int r = 0; r < cover.size(); ++r) {
        int a = high ? cover.size() - 1 - r : r;
        bool ok = std::all_of(pts.begin(), pts.end(),
                              [&](const Vec& y) { return signed_outside(cover.chart(a), y) < -margin; });
        if (ok) {
            return a;
        }
    }
    return -1;
}

std::vector<Vec> samples(const Cover& cover, const ClosedPath& path, double a, double b, int count)
{
    std::vector<Vec> pts;
    for (int k = 0; k < count; ++k) {
        double t = a + (b - a) * k / (count - 1);
        pts.push_back(cover.to_target(path.eval(t)));
    }
    return pts;
}

} // namespace

double box_violation(const Box& b, const Vec& y) { return std::max(0.0, signed_outside(b, y)); }

double box_signed_distance(const Box& b, const Vec& y) { return signed_outside(b, y); }

LoopChart find_loop_chart(const Cover& cover, const ClosedPath& path, ChartConvention conv, const ChartSearch& opts)
{
    if (path.dim() != cover.dim()) {
        throw StructuralError("path and cover live on different tori");
    }
    for (int n = std::max(1, opts.min_n); n <= opts.max_n; ++n) {
        for (int o = 0; o < opts.offsets; ++o) {
            double off = static_cast<double>(o) / (opts.offsets * n);
            LoopChart c;
            for (int i = 0; i < n; ++i) {
                c.t.push_back(off + static_cast<double>(i) / n);
            }
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) {
                double a = c.seg_begin(i);
                // Loop-space charts must contain segments i and i+1.
                double b = conv == ChartConvention::Line ? c.seg_end(i) : c.seg_begin(i + 2);
                if (conv == ChartConvention::LoopSpace && n == 1) {
                    b = a + 1.0;
                }
                int count = conv == ChartConvention::Line ? opts.samples : 2 * opts.samples - 1;
                int lab = best_chart(cover, samples(cover, path, a, b, count), opts.margin, opts.prefer_high);
                if (lab < 0) {
                    ok = false;
                }
                c.s.push_back(lab);
            }
            if (ok) {
                return c;
            }
        }
    }
    throw ChartError("no loop chart with at most " + std::to_string(opts.max_n) + " segments");
}

double chart_violation(const Cover& cover, const ClosedPath& path, const LoopChart& chart, ChartConvention conv,
                       int count)
{
    double worst = 0.0;
    for (int i = 0; i < chart.n(); ++i) {
        auto pts = samples(cover, path, chart.seg_begin(i), chart.seg_end(i), count);
        for (const auto& y : pts) {
            worst = std::max(worst, box_violation(cover.chart(chart.label(i)), y));
            if (conv == ChartConvention::LoopSpace) {
                worst = std::max(worst, box_violation(cover.chart(chart.label(i - 1)), y));
            }
        }
    }
    return worst;
}

FormSampler chart_sampler(const Cover& cover, const ChartForm& f)
{
    return [&cover, &f](const Vec& x, std::span<const Vec> vectors) {
        if (!cover.pull()) {
            return f.eval(x, vectors);
        }
        std::array<Vec, kMaxDim> pushed{};
        std::copy(vectors.begin(), vectors.end(), pushed.begin());
        Vec y = cover.to_target(x, std::span<Vec>(pushed.data(), vectors.size()));
        return f.eval(y, std::span<const Vec>(pushed.data(), vectors.size()));
    };
}

} // namespace loopgerbe
