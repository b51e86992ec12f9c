#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "loopgerbe/chart_form.hpp"
#include "loopgerbe/cover.hpp"

namespace loopgerbe {

/// Cech cochain of bidegree (p,q): for every nonempty strictly increasing
/// (p+1)-tuple and every component of its intersection, a q-form on that
/// component's box. With `u1` set (q = 0) values are additive phases of
/// U(1)-valued functions, so they only matter modulo integers.
struct CechCochain {
    Cover cover;
    int p = 0;
    int q = 0;
    bool u1 = false;
    std::map<Tuple, std::vector<ChartForm>> values;

    /// All values zero on every nonempty intersection.
    static CechCochain zero(const Cover& cover, int p, int q, bool u1 = false);

    /// Mutable value on a component of a sorted tuple; the tuple must be nonempty.
    ChartForm& at(const Tuple& sorted, int component);
    const ChartForm& at(const Tuple& sorted, int component) const;

    /// Value for any index order restricted to the box `k` (lifted in the
    /// first index's chart of the sorted tuple), with the permutation sign.
    ChartForm restricted(const Tuple& tuple, const Box& k) const;
    /// Value at a target point for any index order.
    double eval(const Tuple& tuple, const Vec& y, std::span<const Vec> vectors) const;

    CechCochain operator+(const CechCochain& o) const;
    CechCochain operator-(const CechCochain& o) const;
    CechCochain operator*(double s) const;
};

/// (delta X)_{i0..i(p+1)} = sum_j (-1)^j X_{i0..^ij..i(p+1)}.
CechCochain cech_delta(const CechCochain& c);
/// Componentwise exterior derivative.
CechCochain exterior_d(const CechCochain& c);

/// Element of the total complex of K^P in total degree k:
/// parts[j] has bidegree (k-j, j) for j = 0..min(k, P).
struct TotalCochain {
    int degree = 0;
    int truncation = 0;
    std::vector<CechCochain> parts;
};
using DeligneClassRep = TotalCochain;

/// d_tot c^{p,q} = delta c^{p,q} + (-1)^p d c^{p,q}, dropping form degrees
/// above the truncation. `flip_sign` flips the sign on odd Cech degrees,
/// i.e. uses delta + d (an injected defect: the result no longer squares to 0).
TotalCochain d_total(const TotalCochain& c, bool flip_sign = false);

struct ResidualReport {
    bool ok = true;
    double max_residual = 0.0;
    std::vector<double> part_residuals;
    std::string worst; ///< where the largest residual occurred
};

/// Samples every part on a grid^n interior grid plus the centre of each
/// component box. U(1) parts count the distance to the nearest integer.
ResidualReport vanishing_report(const TotalCochain& c, double tol, int grid = 9);
ResidualReport is_cocycle(const DeligneClassRep& rep, double tol, int grid = 9);

/// Restrict along a refinement map s: fine -> coarse.
CechCochain refine(const CechCochain& c, const Cover& fine, const std::vector<int>& s);
DeligneClassRep refine(const DeligneClassRep& rep, const Cover& fine, const std::vector<int>& s);

/// Nearest integer to x, or IntegralityError if farther than tol.
long long snap_integer(double x, double tol = 1e-8);

} // namespace loopgerbe
