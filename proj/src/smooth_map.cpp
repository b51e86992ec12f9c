#include "loopgerbe/smooth_map.hpp"

#include <cmath>
#include <variant>

#include "loopgerbe/error.hpp"

namespace loopgerbe {

struct SmoothMap::Impl {
    int param_dim = 0;
    int out_dim = 0;
    std::vector<TrigPoly> comps;
    // partials[k][i] = d comps[i] / d p_k
    std::vector<std::vector<TrigPoly>> partials;
    SmoothMap outer;
    SmoothMap inner;
    bool composite = false;
    bool torus_outer = false; ///< outer has integer linear part, so periodicity passes through
};

SmoothMap SmoothMap::poly(int param_dim, int out_dim, std::vector<TrigPoly> comps)
{
    if (param_dim < 1 || param_dim > kMaxDim || out_dim < 1 || out_dim > kMaxDim) {
        throw StructuralError("map dimensions must lie in 1..3");
    }
    if (static_cast<int>(comps.size()) != out_dim) {
        throw StructuralError("map needs one component per target coordinate");
    }
    auto impl = std::make_shared<Impl>();
    impl->param_dim = param_dim;
    impl->out_dim = out_dim;
    for (auto& c : comps) {
        if (c.dim() == 0) {
            c = TrigPoly(param_dim);
        }
        if (c.dim() != param_dim) {
            throw StructuralError("map component has wrong parameter dimension");
        }
    }
    impl->comps = std::move(comps);
    impl->partials.resize(param_dim);
    for (int k = 0; k < param_dim; ++k) {
        for (const auto& c : impl->comps) {
            impl->partials[k].push_back(c.derivative(k));
        }
    }
    SmoothMap m;
    m.impl_ = std::move(impl);
    return m;
}

SmoothMap SmoothMap::identity(int dim)
{
    std::vector<TrigPoly> comps;
    for (int i = 0; i < dim; ++i) {
        comps.push_back(TrigPoly::coordinate(dim, i));
    }
    return poly(dim, dim, std::move(comps));
}

SmoothMap SmoothMap::compose(const SmoothMap& outer, const SmoothMap& inner)
{
    if (outer.param_dim() != inner.out_dim()) {
        throw StructuralError("composition dimension mismatch");
    }
    for (int k = 0; k < outer.param_dim(); ++k) {
        if (!outer.periodic_in(k)) {
            throw StructuralError("outer map of a composition must be a torus map");
        }
    }
    SmoothMap m = restrict(outer, inner);
    std::const_pointer_cast<Impl>(m.impl_)->torus_outer = true;
    return m;
}

SmoothMap SmoothMap::restrict(const SmoothMap& outer, const SmoothMap& inner)
{
    if (outer.param_dim() != inner.out_dim()) {
        throw StructuralError("composition dimension mismatch");
    }
    auto impl = std::make_shared<Impl>();
    impl->param_dim = inner.param_dim();
    impl->out_dim = outer.out_dim();
    impl->outer = outer;
    impl->inner = inner;
    impl->composite = true;
    SmoothMap m;
    m.impl_ = std::move(impl);
    return m;
}

int SmoothMap::param_dim() const { return impl_ ? impl_->param_dim : 0; }
int SmoothMap::out_dim() const { return impl_ ? impl_->out_dim : 0; }
bool SmoothMap::is_poly() const { return impl_ && !impl_->composite; }
const std::vector<TrigPoly>& SmoothMap::components() const { return impl_->comps; }

std::pair<const SmoothMap*, const SmoothMap*> SmoothMap::factors() const
{
    if (!impl_ || !impl_->composite) {
        return {nullptr, nullptr};
    }
    return {&impl_->outer, &impl_->inner};
}

void SmoothMap::eval_with_jacobian(const Vec& p, Vec& x, Jacobian& jac) const
{
    x = Vec{};
    jac = Jacobian{};
    if (impl_->composite) {
        Vec y;
        Jacobian jin, jout;
        impl_->inner.eval_with_jacobian(p, y, jin);
        impl_->outer.eval_with_jacobian(y, x, jout);
        for (int k = 0; k < impl_->param_dim; ++k) {
            for (int i = 0; i < impl_->out_dim; ++i) {
                double acc = 0.0;
                for (int m = 0; m < impl_->outer.param_dim(); ++m) {
                    acc += jout[m][i] * jin[k][m];
                }
                jac[k][i] = acc;
            }
        }
        return;
    }
    for (int i = 0; i < impl_->out_dim; ++i) {
        x[i] = impl_->comps[i].eval(p);
    }
    for (int k = 0; k < impl_->param_dim; ++k) {
        for (int i = 0; i < impl_->out_dim; ++i) {
            jac[k][i] = impl_->partials[k][i].eval(p);
        }
    }
}

Vec SmoothMap::eval(const Vec& p) const
{
    if (impl_->composite) {
        return impl_->outer.eval(impl_->inner.eval(p));
    }
    Vec x{};
    for (int i = 0; i < impl_->out_dim; ++i) {
        x[i] = impl_->comps[i].eval(p);
    }
    return x;
}

Jacobian SmoothMap::jacobian(const Vec& p) const
{
    Vec x;
    Jacobian j;
    eval_with_jacobian(p, x, j);
    return j;
}

bool SmoothMap::periodic_in(int axis) const
{
    if (impl_->composite) {
        return impl_->torus_outer && impl_->inner.periodic_in(axis);
    }
    for (const auto& c : impl_->comps) {
        for (const auto& [m, coef] : c.terms()) {
            if (m.pow[axis] == 0) {
                continue;
            }
            bool linear_only = m.pow[axis] == 1 && m.freq == IVec{};
            for (int k = 0; k < kMaxDim; ++k) {
                if (k != axis && m.pow[k] != 0) {
                    linear_only = false;
                }
            }
            if (!linear_only || coef.imag() != 0.0 || coef.real() != std::round(coef.real())) {
                return false;
            }
        }
    }
    return true;
}

IVec SmoothMap::winding(int axis) const
{
    IVec w{};
    Vec zero{};
    Vec e{};
    e[axis] = 1.0;
    Vec a = eval(zero);
    Vec b = eval(e);
    for (int i = 0; i < out_dim(); ++i) {
        w[i] = static_cast<int>(std::lround(b[i] - a[i]));
    }
    return w;
}

LoopMap::LoopMap(SmoothMap m) : map(std::move(m))
{
    if (map.param_dim() != 1 || !map.periodic_in(0)) {
        throw StructuralError("a loop must be a periodic map of one parameter");
    }
}

CylinderMap::CylinderMap(SmoothMap m) : map(std::move(m))
{
    if (map.param_dim() != 2 || !map.periodic_in(0) || !map.periodic_in(1)) {
        throw StructuralError("a cylinder map must be doubly periodic in (s,t)");
    }
}

HomotopyMap::HomotopyMap(SmoothMap m) : map(std::move(m))
{
    if (map.param_dim() != 3 || !map.periodic_in(1) || !map.periodic_in(2)) {
        throw StructuralError("a homotopy must be periodic in (s,t) for every u");
    }
}

SmoothMap affine_trig_map(int param_dim, int out_dim, const std::vector<IVec>& winding_columns,
                          const Vec& offset, const std::vector<FourierTerm>& terms)
{
    std::vector<TrigPoly> comps;
    for (int i = 0; i < out_dim; ++i) {
        TrigPoly c = TrigPoly::constant(param_dim, offset[i]);
        for (int k = 0; k < static_cast<int>(winding_columns.size()); ++k) {
            if (winding_columns[k][i] != 0) {
                c += TrigPoly::coordinate(param_dim, k) * static_cast<double>(winding_columns[k][i]);
            }
        }
        for (const auto& t : terms) {
            if (t.amp_cos[i] != 0.0) {
                c += TrigPoly::cosine(param_dim, t.freq, t.amp_cos[i]);
            }
            if (t.amp_sin[i] != 0.0) {
                c += TrigPoly::sine(param_dim, t.freq, t.amp_sin[i]);
            }
        }
        comps.push_back(std::move(c));
    }
    return SmoothMap::poly(param_dim, out_dim, std::move(comps));
}

LoopMap make_loop(int dim, const IVec& winding, const Vec& offset, const std::vector<FourierTerm>& terms)
{
    return LoopMap(affine_trig_map(1, dim, {winding}, offset, terms));
}

CylinderMap make_cylinder(int dim, const IVec& w_s, const IVec& w_t, const Vec& offset,
                          const std::vector<FourierTerm>& terms)
{
    return CylinderMap(affine_trig_map(2, dim, {w_s, w_t}, offset, terms));
}

CylinderMap cylinder_from_loop(const LoopMap& loop)
{
    auto inner = SmoothMap::poly(2, 1, {TrigPoly::coordinate(2, 1)});
    return CylinderMap(SmoothMap::compose(loop.map, inner));
}

LoopMap loop_slice(const CylinderMap& cyl, double s0)
{
    auto inner = SmoothMap::poly(1, 2, {TrigPoly::constant(1, s0), TrigPoly::coordinate(1, 0)});
    return LoopMap(SmoothMap::compose(cyl.map, inner));
}

LoopMap reparametrized(const LoopMap& loop, const SmoothMap& phi)
{
    if (phi.param_dim() != 1 || phi.out_dim() != 1 || phi.winding(0)[0] != 1) {
        throw StructuralError("reparametrization must be a degree-one circle map");
    }
    return LoopMap(SmoothMap::compose(loop.map, phi));
}

} // namespace loopgerbe
