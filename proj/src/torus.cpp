#include "loopgerbe/torus.hpp"

#include <sstream>

#include "loopgerbe/error.hpp"

namespace loopgerbe {

double wrap_unit(double x)
{
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

TorusPoint::TorusPoint(int dim, const Vec& x) : dim_(dim)
{
    if (dim < 1 || dim > kMaxDim) {
        throw StructuralError("torus dimension must be 1, 2 or 3");
    }
    for (int i = 0; i < dim; ++i) {
        coords_[i] = wrap_unit(x[i]);
    }
}

Box Box::unit(int dim)
{
    Box b;
    b.dim = dim;
    for (int i = 0; i < dim; ++i) {
        b.lo[i] = 0.0;
        b.hi[i] = 1.0;
    }
    b.global = true;
    return b;
}

Box Box::make(int dim, const Vec& lo, const Vec& hi)
{
    Box b;
    b.dim = dim;
    for (int i = 0; i < dim; ++i) {
        if (!(hi[i] > lo[i]) || hi[i] - lo[i] >= 1.0) {
            throw StructuralError("box edges must have length in (0,1)");
        }
        b.lo[i] = lo[i];
        b.hi[i] = hi[i];
    }
    return b;
}

Vec Box::center() const
{
    Vec c{};
    for (int i = 0; i < dim; ++i) {
        c[i] = 0.5 * (lo[i] + hi[i]);
    }
    return c;
}

bool Box::contains(const Vec& x, double tol) const
{
    for (int i = 0; i < dim; ++i) {
        if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) {
            return false;
        }
    }
    return true;
}

std::optional<Vec> Box::lift(const Vec& x, double tol) const
{
    Vec y{};
    for (int i = 0; i < dim; ++i) {
        if (global) {
            y[i] = wrap_unit(x[i]);
            continue;
        }
        double k = std::ceil(lo[i] - tol - x[i]);
        double v = x[i] + k;
        if (v > hi[i] + tol) {
            return std::nullopt;
        }
        y[i] = v;
    }
    return y;
}

std::optional<std::array<int, kMaxDim>> Box::shift_into(const Box& outer, double tol) const
{
    std::array<int, kMaxDim> k{};
    for (int i = 0; i < dim; ++i) {
        if (outer.global) {
            k[i] = 0;
            continue;
        }
        double s = std::round(outer.lo[i] - lo[i] + 0.5 * ((outer.hi[i] - outer.lo[i]) - (hi[i] - lo[i])));
        if (lo[i] + s < outer.lo[i] - tol || hi[i] + s > outer.hi[i] + tol) {
            return std::nullopt;
        }
        k[i] = static_cast<int>(s);
    }
    return k;
}

bool Box::operator==(const Box& o) const
{
    if (dim != o.dim || global != o.global) {
        return false;
    }
    for (int i = 0; i < dim; ++i) {
        if (lo[i] != o.lo[i] || hi[i] != o.hi[i]) {
            return false;
        }
    }
    return true;
}

std::string Box::str() const
{
    std::ostringstream os;
    for (int i = 0; i < dim; ++i) {
        os << (i ? "x" : "") << "(" << lo[i] << "," << hi[i] << ")";
    }
    return os.str();
}

} // namespace loopgerbe
