#include "loopgerbe/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "loopgerbe/error.hpp"
#include "loopgerbe/parallel.hpp"

namespace loopgerbe {

namespace {

constexpr int kNodes = 16;

struct Rule {
    std::vector<double> x; // on [-1,1]
    std::vector<double> w;
};

const Rule& rule()
{
    static const Rule r = [] {
        using G = boost::math::quadrature::gauss<double, kNodes>;
        Rule out;
        const auto& abs = G::abscissa();
        const auto& wts = G::weights();
        // Boost stores the non-negative half of a symmetric rule.
        for (std::size_t i = abs.size(); i-- > 0;) {
            if (abs[i] != 0.0) {
                out.x.push_back(-abs[i]);
                out.w.push_back(wts[i]);
            }
        }
        for (std::size_t i = 0; i < abs.size(); ++i) {
            out.x.push_back(abs[i]);
            out.w.push_back(wts[i]);
        }
        return out;
    }();
    return r;
}

struct Nodes {
    std::vector<double> x;
    std::vector<double> w;
};

Nodes composite(double a, double b, const Quadrature& q)
{
    Nodes n;
    if (a == b) {
        return n;
    }
    const Rule& r = rule();
    int m = q.intervals_for(std::abs(b - a));
    double h = (b - a) / m;
    for (int k = 0; k < m; ++k) {
        double c = a + (k + 0.5) * h;
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            n.x.push_back(c + 0.5 * h * r.x[i]);
            n.w.push_back(0.5 * h * r.w[i]);
        }
    }
    return n;
}

std::string param_str(std::initializer_list<double> ps)
{
    std::ostringstream os;
    os.precision(10);
    os << "(";
    bool first = true;
    for (double p : ps) {
        os << (first ? "" : ",") << p;
        first = false;
    }
    os << ")";
    return os.str();
}

} // namespace

int Quadrature::intervals_for(double length) const
{
    return std::max(min_intervals, static_cast<int>(std::ceil(length * per_unit - 1e-9)));
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, const Quadrature& q)
{
    Nodes n = composite(a, b, q);
    double acc = 0.0;
    for (std::size_t i = 0; i < n.x.size(); ++i) {
        acc += n.w[i] * f(n.x[i]);
    }
    return acc;
}

double integrate_2d(const std::function<double(double, double)>& f, double a0, double b0, double a1, double b1,
                    const Quadrature& q)
{
    Nodes n0 = composite(a0, b0, q);
    Nodes n1 = composite(a1, b1, q);
    std::vector<double> rows(n0.x.size(), 0.0);
    parallel_for(n0.x.size(), [&](std::size_t i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n1.x.size(); ++j) {
            row += n1.w[j] * f(n0.x[i], n1.x[j]);
        }
        rows[i] = row;
    });
    double acc = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        acc += n0.w[i] * rows[i];
    }
    return acc;
}

double integrate_3d(const std::function<double(double, double, double)>& f, const Vec& lo, const Vec& hi,
                    const Quadrature& q)
{
    Nodes n0 = composite(lo[0], hi[0], q);
    Nodes n1 = composite(lo[1], hi[1], q);
    Nodes n2 = composite(lo[2], hi[2], q);
    std::vector<double> slabs(n0.x.size(), 0.0);
    parallel_for(n0.x.size(), [&](std::size_t i) {
        double slab = 0.0;
        for (std::size_t j = 0; j < n1.x.size(); ++j) {
            double row = 0.0;
            for (std::size_t k = 0; k < n2.x.size(); ++k) {
                row += n2.w[k] * f(n0.x[i], n1.x[j], n2.x[k]);
            }
            slab += n1.w[j] * row;
        }
        slabs[i] = slab;
    });
    double acc = 0.0;
    for (std::size_t i = 0; i < slabs.size(); ++i) {
        acc += n0.w[i] * slabs[i];
    }
    return acc;
}

FormSampler sampler(const LiftedForm& f)
{
    return [f](const Vec& x, std::span<const Vec> v) { return f.eval(x, v); };
}

double integrate_full_torus(const LiftedForm& f)
{
    if (f.degree() != f.dim()) {
        throw StructuralError("full-torus integration needs a top-degree form");
    }
    auto mask = static_cast<std::uint8_t>((1u << f.dim()) - 1);
    return f.component(mask).coefficient(Monomial{}).real();
}

double line_integral(const FormSampler& f, const SmoothMap& curve, double a, double b, const Quadrature& q)
{
    return integrate_1d(
        [&](double t) {
            Vec x;
            Jacobian j;
            curve.eval_with_jacobian(Vec{t, 0.0, 0.0}, x, j);
            try {
                return f(x, std::span<const Vec>(j.data(), 1));
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " at curve parameter t=" + param_str({t}));
            }
        },
        a, b, q);
}

double line_integral(const LiftedForm& f, const LoopMap& loop, double a, double b, const Quadrature& q)
{
    if (f.degree() != 1) {
        throw StructuralError("line integral needs a 1-form");
    }
    return line_integral(sampler(f), loop.map, a, b, q);
}

double surface_integral(const FormSampler& f, const SmoothMap& surf, double s0, double s1, double t0, double t1,
                        const Quadrature& q)
{
    return integrate_2d(
        [&](double s, double t) {
            Vec x;
            Jacobian j;
            surf.eval_with_jacobian(Vec{s, t, 0.0}, x, j);
            if (j[0] == Vec{} || j[1] == Vec{}) {
                return 0.0;
            }
            try {
                return f(x, std::span<const Vec>(j.data(), 2));
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " at surface parameter (s,t)=" + param_str({s, t}));
            }
        },
        s0, s1, t0, t1, q);
}

double surface_integral(const LiftedForm& f, const CylinderMap& cyl, double s0, double s1, double t0, double t1,
                        const Quadrature& q)
{
    if (f.degree() != 2) {
        throw StructuralError("surface integral needs a 2-form");
    }
    return surface_integral(sampler(f), cyl.map, s0, s1, t0, t1, q);
}

double volume_integral(const FormSampler& f, const SmoothMap& h, const Vec& lo, const Vec& hi, const Quadrature& q)
{
    return integrate_3d(
        [&](double u, double s, double t) {
            Vec x;
            Jacobian j;
            h.eval_with_jacobian(Vec{u, s, t}, x, j);
            try {
                return f(x, std::span<const Vec>(j.data(), 3));
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " at volume parameter (u,s,t)=" + param_str({u, s, t}));
            }
        },
        lo, hi, q);
}

double volume_integral(const LiftedForm& f, const HomotopyMap& h, const Quadrature& q)
{
    if (f.degree() != 3) {
        throw StructuralError("volume integral needs a 3-form");
    }
    return volume_integral(sampler(f), h.map, Vec{0.0, 0.0, 0.0}, Vec{1.0, 1.0, 1.0}, q);
}

} // namespace loopgerbe
