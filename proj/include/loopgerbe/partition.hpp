#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "loopgerbe/cover.hpp"

namespace loopgerbe {

using Deriv = std::array<std::uint8_t, kMaxDim>; ///< partial derivative orders per axis

/// Smooth partition of unity subordinate to a product arc cover. On each
/// circle factor the arcs form a cyclic chain; inside every overlap a C^inf
/// transition (built from e^{-1/s}) occupies a centred window whose length is
/// `window` times the overlap. Chart weights are products over factors.
class PartitionOfUnity {
public:
    static std::shared_ptr<const PartitionOfUnity> make(const Cover& cover, double window = 0.8);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(charts_.size()); }
    double window() const { return window_; }

    /// Partial derivative of the weight of chart a at a target point.
    double weight(int a, const Vec& y, const Deriv& deriv = {}) const;

    struct Factor;

private:
    int dim_ = 0;
    double window_ = 0.8;
    std::vector<std::vector<int>> charts_; ///< arc index per factor
    std::vector<std::shared_ptr<const Factor>> factors_;
};

/// Value and first three derivatives of the C^inf step rising on [0,1].
std::array<double, 4> smooth_step_jet(double s);

} // namespace loopgerbe
