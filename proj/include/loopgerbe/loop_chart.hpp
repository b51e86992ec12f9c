#pragma once

#include <vector>

#include "loopgerbe/cover.hpp"
#include "loopgerbe/quadrature.hpp"
#include "loopgerbe/smooth_map.hpp"

namespace loopgerbe {

/// Closed path t in [0,1) -> T^n: a single loop, or a closed chain of m
/// smooth pieces, piece j running over t in [j/m, (j+1)/m].
class ClosedPath {
public:
    ClosedPath() = default;
    explicit ClosedPath(const LoopMap& loop);
    /// Pieces with one parameter in [0,1]; consecutive end/start points must agree mod Z^n.
    explicit ClosedPath(std::vector<SmoothMap> pieces);

    int dim() const { return dim_; }
    int pieces() const { return static_cast<int>(pieces_.size()); }
    bool single_loop() const { return loop_; }

    /// Point at parameter t (taken mod 1).
    Vec eval(double t) const;
    /// Integral of a 1-form over the parameter interval [t0,t1] (t1 may exceed 1).
    double integrate(const FormSampler& f, double t0, double t1, const Quadrature& q = {}) const;

private:
    int dim_ = 0;
    bool loop_ = false;
    std::vector<SmoothMap> pieces_;
};

/// Subdivision t(0) < ... < t(n-1) < t(0)+1 of the circle with chart labels.
/// Segment i is [t(i), t(i+1)].
struct LoopChart {
    std::vector<double> t;
    std::vector<int> s;

    int n() const { return static_cast<int>(t.size()); }
    double seg_begin(int i) const;
    double seg_end(int i) const; ///< t(i+1), lifted past t(i)
    int label(int i) const;      ///< s(i mod n)
};

enum class ChartConvention {
    Line,     ///< segment i inside U_{s(i)}
    LoopSpace ///< segment i inside U_{s(i-1)} and U_{s(i)}
};

struct ChartSearch {
    int min_n = 1;
    int max_n = 256;
    int offsets = 8;
    int samples = 33;         ///< samples per segment, endpoints included
    double margin = 1e-4;     ///< required distance from chart walls
    bool prefer_high = false; ///< tie-break by highest chart index instead
};

/// Greedy search: smallest n, then offset, lowest chart index per segment.
LoopChart find_loop_chart(const Cover& cover, const ClosedPath& path, ChartConvention conv,
                          const ChartSearch& opts = {});
/// Largest wall violation over the samples (0 when every sample is inside).
double chart_violation(const Cover& cover, const ClosedPath& path, const LoopChart& chart, ChartConvention conv,
                       int samples = 65);

/// Distance by which a target point lies outside a chart box (0 if inside).
double box_violation(const Box& b, const Vec& y);
/// Largest per-axis signed distance to the walls (negative inside).
double box_signed_distance(const Box& b, const Vec& y);

/// Sampler of a chart form read through the cover's pull map.
FormSampler chart_sampler(const Cover& cover, const class ChartForm& f);

} // namespace loopgerbe
