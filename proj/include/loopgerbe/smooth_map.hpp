#pragma once

#include <memory>
#include <vector>

#include "loopgerbe/lifted_form.hpp"

namespace loopgerbe {

using Jacobian = std::array<Vec, kMaxDim>; ///< columns d/dp_k

/// Smooth map R^d -> R^n (read mod Z^n) given by TrigPoly components in the
/// parameters, or a composition of such maps. Immutable; copies share state.
class SmoothMap {
public:
    SmoothMap() = default;

    static SmoothMap poly(int param_dim, int out_dim, std::vector<TrigPoly> comps);
    static SmoothMap identity(int dim);
    /// outer o inner; outer must be a torus map (integer linear part).
    static SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);
    /// outer o inner where inner lands in outer's parameter domain (values unwrapped).
    static SmoothMap restrict(const SmoothMap& outer, const SmoothMap& inner);

    int param_dim() const;
    int out_dim() const;

    Vec eval(const Vec& p) const;
    Jacobian jacobian(const Vec& p) const;
    void eval_with_jacobian(const Vec& p, Vec& x, Jacobian& jac) const;

    /// True when x(p + e_axis) - x(p) is a constant integer vector.
    bool periodic_in(int axis) const;
    /// Integer translation x(p + e_axis) - x(p) (only for periodic axes).
    IVec winding(int axis) const;

    bool is_poly() const;
    const std::vector<TrigPoly>& components() const;
    /// Composite maps expose their factors (outer, inner); empty otherwise.
    std::pair<const SmoothMap*, const SmoothMap*> factors() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Loop S^1 -> T^n.
struct LoopMap {
    SmoothMap map;
    explicit LoopMap(SmoothMap m);
    LoopMap() = default;
    int dim() const { return map.out_dim(); }
};

/// Map T^2 -> T^n with parameters (s,t); t is the loop parameter.
struct CylinderMap {
    SmoothMap map;
    explicit CylinderMap(SmoothMap m);
    CylinderMap() = default;
    int dim() const { return map.out_dim(); }
};

/// Family H(u,s,t) of cylinder maps, u in [0,1].
struct HomotopyMap {
    SmoothMap map;
    explicit HomotopyMap(SmoothMap m);
    HomotopyMap() = default;
    int dim() const { return map.out_dim(); }
};

/// One Fourier mode of a perturbation: amp_cos*cos(2 pi f.p) + amp_sin*sin(2 pi f.p).
struct FourierTerm {
    IVec freq{};
    Vec amp_cos{};
    Vec amp_sin{};
};

/// x(p) = offset + W p + sum of Fourier terms (+ u-polynomial terms for homotopies).
SmoothMap affine_trig_map(int param_dim, int out_dim, const std::vector<IVec>& winding_columns,
                          const Vec& offset, const std::vector<FourierTerm>& terms);

LoopMap make_loop(int dim, const IVec& winding, const Vec& offset, const std::vector<FourierTerm>& terms = {});
CylinderMap make_cylinder(int dim, const IVec& w_s, const IVec& w_t, const Vec& offset,
                          const std::vector<FourierTerm>& terms = {});

/// Constant-in-s cylinder built from a loop.
CylinderMap cylinder_from_loop(const LoopMap& loop);
/// Loop t -> Gamma(s0, t).
LoopMap loop_slice(const CylinderMap& cyl, double s0);
/// Reparametrize a loop: t -> gamma(phi(t)) with phi a degree-one circle map.
LoopMap reparametrized(const LoopMap& loop, const SmoothMap& phi);

} // namespace loopgerbe
