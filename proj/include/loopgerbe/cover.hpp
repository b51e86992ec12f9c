#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "loopgerbe/smooth_map.hpp"
#include "loopgerbe/torus.hpp"

namespace loopgerbe {

/// Lifted open interval of the circle, length < 1.
struct Arc {
    double lo = 0.0;
    double hi = 0.0;
};

using Tuple = std::vector<int>;

/// Finite cover of T^n by coordinate boxes, with its nerve up to quadruple
/// intersections. Each nonempty intersection is stored as a list of
/// connected components, each a box lifted inside the first chart's box.
///
/// A cover may be pulled back along a smooth torus map f: T^m -> T^n; it is
/// then a cover of T^m whose chart U_a is f^{-1}(box_a). Data living on such a
/// cover is still expressed in target coordinates.
class Cover {
public:
    Cover() = default;

    /// Product cover; chart index runs over factors with the first factor fastest.
    static Cover product(std::vector<std::vector<Arc>> factor_arcs);
    static Cover from_boxes(int dim, std::vector<Box> boxes);
    /// Three arcs per circle factor, length 5/12, centres 0, 1/3, 2/3.
    static Cover standard(int dim);
    /// Five arcs per factor, each inside one standard arc.
    static Cover refined_standard(int dim);
    static std::vector<Arc> standard_arcs();
    static std::vector<Arc> refined_arcs();

    int dim() const;        ///< dimension of the covered torus
    int target_dim() const; ///< dimension of the chart boxes
    int size() const;
    const Box& chart(int a) const;
    bool is_product() const;
    const std::vector<std::vector<Arc>>& factor_arcs() const;
    /// Arc index per factor of a product chart.
    std::vector<int> chart_factors(int a) const;

    /// Components of the intersection of a strictly increasing tuple.
    const std::vector<Box>& components(const Tuple& tuple) const;
    /// All nonempty strictly increasing tuples of the given length (1..4).
    std::vector<Tuple> tuples(int length) const;

    const std::optional<SmoothMap>& pull() const;
    Cover pulled_back(const SmoothMap& f) const;
    bool same_as(const Cover& o) const;

    /// Point of the covered torus mapped to chart coordinates.
    Vec to_target(const Vec& x) const;
    /// Push tangent vectors forward to chart coordinates (in place).
    Vec to_target(const Vec& x, std::span<Vec> vectors) const;
    bool contains(int a, const Vec& x, double tol = kBoxTol) const;
    /// Component index of a tuple intersection containing the target point y.
    int locate(const Tuple& tuple, const Vec& y, double tol = kBoxTol) const;

    struct Data; // implementation detail

private:
    std::shared_ptr<const Data> data_;
    std::optional<SmoothMap> pull_;
};

/// Chart-wise refinement map fine -> coarse: each fine chart inside the
/// image chart. Returns the lowest admissible index per chart.
std::vector<int> find_refinement(const Cover& fine, const Cover& coarse);
/// Throws StructuralError unless `s` is a refinement map.
void check_refinement(const Cover& fine, const Cover& coarse, const std::vector<int>& s);

/// Sorts a tuple, returning the permutation sign; 0 if an index repeats.
int sort_tuple(Tuple& t);

} // namespace loopgerbe
