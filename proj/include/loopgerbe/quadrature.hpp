#pragma once

#include <functional>
#include <span>

#include "loopgerbe/lifted_form.hpp"
#include "loopgerbe/smooth_map.hpp"

namespace loopgerbe {

/// Composite Gauss-Legendre settings: `nodes` points per subinterval (fixed at
/// 16) and `per_unit` subintervals per unit parameter length.
struct Quadrature {
    int per_unit = 64;
    int min_intervals = 1;

    int intervals_for(double length) const;
};

/// Fixed-order composite Gauss-Legendre sum of f over [a,b].
double integrate_1d(const std::function<double(double)>& f, double a, double b, const Quadrature& q = {});
/// Tensor-product rule over [a0,b0] x [a1,b1].
double integrate_2d(const std::function<double(double, double)>& f, double a0, double b0, double a1, double b1,
                    const Quadrature& q = {});
double integrate_3d(const std::function<double(double, double, double)>& f, const Vec& lo, const Vec& hi,
                    const Quadrature& q = {});

/// Evaluates a form at a point with tangent vectors; the point is given as
/// an unwrapped lift, `param` is reported in errors.
using FormSampler = std::function<double(const Vec& x, std::span<const Vec> vectors)>;

FormSampler sampler(const LiftedForm& f);

/// Exact integral of a top-degree global form over T^n: the constant
/// Fourier coefficient of its only component.
double integrate_full_torus(const LiftedForm& f);

/// Integral of a 1-form along t -> loop(t), t in [a,b].
double line_integral(const FormSampler& f, const SmoothMap& curve, double a, double b, const Quadrature& q = {});
double line_integral(const LiftedForm& f, const LoopMap& loop, double a = 0.0, double b = 1.0,
                     const Quadrature& q = {});

/// Integral of a 2-form over the parameter rectangle [s0,s1] x [t0,t1] of a
/// two-parameter map, oriented by (s,t).
double surface_integral(const FormSampler& f, const SmoothMap& surf, double s0, double s1, double t0, double t1,
                        const Quadrature& q = {});
double surface_integral(const LiftedForm& f, const CylinderMap& cyl, double s0 = 0.0, double s1 = 1.0,
                        double t0 = 0.0, double t1 = 1.0, const Quadrature& q = {});

/// Coarser default for 3D rules: 128 nodes per unit length and axis.
inline constexpr Quadrature kVolumeQuadrature{8, 1};

/// Integral of a 3-form over [0,1] x T^2 through H(u,s,t), oriented by (u,s,t).
double volume_integral(const FormSampler& f, const SmoothMap& h, const Vec& lo, const Vec& hi,
                       const Quadrature& q = kVolumeQuadrature);
double volume_integral(const LiftedForm& f, const HomotopyMap& h, const Quadrature& q = kVolumeQuadrature);

} // namespace loopgerbe
