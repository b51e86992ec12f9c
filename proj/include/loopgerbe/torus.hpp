#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

namespace loopgerbe {

inline constexpr int kMaxDim = 3;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kBoxTol = 1e-12;

using Vec = std::array<double, kMaxDim>;

/// Point of T^n = R^n / Z^n, coordinates kept in [0,1).
class TorusPoint {
public:
    TorusPoint() = default;
    TorusPoint(int dim, const Vec& x);

    int dim() const { return dim_; }
    double operator[](int i) const { return coords_[i]; }
    const Vec& coords() const { return coords_; }

private:
    int dim_ = 0;
    Vec coords_{};
};

double wrap_unit(double x);

/// Product of open intervals in R^n with every edge shorter than 1; a lift
/// domain for chart data. The global box [0,1)^n has edges of length 1 and is
/// only used for forms without lifted monomials.
struct Box {
    int dim = 0;
    Vec lo{};
    Vec hi{};
    bool global = false;

    static Box unit(int dim);
    static Box make(int dim, const Vec& lo, const Vec& hi);

    Vec center() const;
    bool contains(const Vec& x, double tol = kBoxTol) const;
    /// Unique representative of x mod Z^n inside the box, if any.
    std::optional<Vec> lift(const Vec& x, double tol = kBoxTol) const;
    /// Integer shift k with (*this + k) inside `outer` (within tolerance).
    std::optional<std::array<int, kMaxDim>> shift_into(const Box& outer, double tol = 1e-9) const;
    bool operator==(const Box& o) const;
    std::string str() const;
};

} // namespace loopgerbe
