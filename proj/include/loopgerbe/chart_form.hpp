#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "loopgerbe/lifted_form.hpp"
#include "loopgerbe/partition.hpp"
#include "loopgerbe/quadrature.hpp"

namespace loopgerbe {

/// Partial derivative of one partition weight.
struct WeightKey {
    std::shared_ptr<const PartitionOfUnity> pou;
    int chart = 0;
    Deriv deriv{};

    auto operator<=>(const WeightKey&) const = default;
    bool operator==(const WeightKey&) const = default;
};

/// Form on a chart box: a lifted form plus a finite sum of partition weight
/// derivatives times lifted forms. Closed under d, sums and restriction, so
/// data built from a partition of unity stays symbolic.
class ChartForm {
public:
    ChartForm() = default;
    ChartForm(const LiftedForm& f); // NOLINT: implicit by design

    static ChartForm zero(int dim, int degree, const Box& box);
    /// rho_chart * f
    static ChartForm weighted(std::shared_ptr<const PartitionOfUnity> pou, int chart, const LiftedForm& f);

    int dim() const { return base_.dim(); }
    int degree() const { return base_.degree(); }
    const Box& box() const { return base_.box(); }
    const LiftedForm& base() const { return base_; }
    const std::map<WeightKey, LiftedForm>& weighted_terms() const { return terms_; }
    bool is_lifted() const { return terms_.empty(); }

    ChartForm operator+(const ChartForm& o) const;
    ChartForm operator-(const ChartForm& o) const;
    ChartForm operator*(double s) const;
    ChartForm operator-() const { return *this * -1.0; }
    ChartForm& operator+=(const ChartForm& o);

    ChartForm d() const;
    /// Wedge with a lifted form on the right.
    ChartForm wedge(const LiftedForm& g) const;
    ChartForm reboxed(const Box& inner) const;

    double eval(const Vec& y, std::span<const Vec> vectors) const;
    double eval_lifted(const Vec& x, std::span<const Vec> vectors) const;
    /// Largest absolute component coefficient at a point (all basis vectors).
    double max_component(const Vec& y) const;

    ChartForm pruned(double tol) const;

private:
    void add_weighted(const WeightKey& key, const LiftedForm& f);

    LiftedForm base_;
    std::map<WeightKey, LiftedForm> terms_;
};

/// Evaluates every basis component of a p-form at a lifted point.
double max_component_lifted(const ChartForm& f, const Vec& x);

} // namespace loopgerbe

namespace loopgerbe {

/// Global form given chart by chart (a glued Cech 0-cochain); `exact` holds a
/// single periodic representative when all charts carry the same lifted form.
struct GluedForm {
    Cover cover;
    std::vector<ChartForm> charts;
    std::optional<LiftedForm> exact;

    int degree() const { return charts.empty() ? 0 : charts[0].degree(); }
    /// Evaluates at a target point, using the chart in which it is deepest.
    double eval(const Vec& y, std::span<const Vec> vectors) const;
    /// Largest disagreement between charts over sampled overlap points.
    double overlap_residual(int grid = 9) const;
};

GluedForm glue(const Cover& cover, std::vector<ChartForm> charts);

/// Integral of a top-degree glued form over the target torus: exact when a
/// periodic representative exists, otherwise composite quadrature.
double integrate_glued(const GluedForm& f, const Quadrature& q);

} // namespace loopgerbe
