#include "loopgerbe/lifted_form.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "loopgerbe/error.hpp"

namespace loopgerbe {

namespace {

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

double ipow(double x, int p)
{
    double r = 1.0;
    for (int i = 0; i < p; ++i) {
        r *= x;
    }
    return r;
}

} // namespace

int popcount(std::uint8_t m) { return std::popcount(static_cast<unsigned>(m)); }

int wedge_sign(std::uint8_t a, std::uint8_t b)
{
    int inversions = 0;
    for (int i = 0; i < kMaxDim; ++i) {
        if (!(a & (1u << i))) {
            continue;
        }
        for (int j = 0; j < i; ++j) {
            if (b & (1u << j)) {
                ++inversions;
            }
        }
    }
    return (inversions % 2) ? -1 : 1;
}

double mask_minor(std::uint8_t mask, std::span<const Vec> vectors)
{
    std::array<int, kMaxDim> idx{};
    int p = 0;
    for (int i = 0; i < kMaxDim; ++i) {
        if (mask & (1u << i)) {
            idx[p++] = i;
        }
    }
    if (static_cast<int>(vectors.size()) < p) {
        throw StructuralError("not enough tangent vectors for form degree");
    }
    auto m = [&](int r, int c) { return vectors[c][idx[r]]; };
    switch (p) {
    case 0:
        return 1.0;
    case 1:
        return m(0, 0);
    case 2:
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default:
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
             - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
             + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
}

// ---------------------------------------------------------------- TrigPoly

TrigPoly TrigPoly::constant(int dim, double c)
{
    TrigPoly f(dim);
    f.add_term(Monomial{}, c);
    return f;
}

TrigPoly TrigPoly::coordinate(int dim, int axis)
{
    TrigPoly f(dim);
    Monomial m;
    m.pow[axis] = 1;
    f.add_term(m, 1.0);
    return f;
}

TrigPoly TrigPoly::cosine(int dim, const IVec& freq, double amp)
{
    TrigPoly f(dim);
    Monomial plus, minus;
    plus.freq = freq;
    for (int i = 0; i < kMaxDim; ++i) {
        minus.freq[i] = -freq[i];
    }
    f.add_term(plus, 0.5 * amp);
    f.add_term(minus, 0.5 * amp);
    return f;
}

TrigPoly TrigPoly::sine(int dim, const IVec& freq, double amp)
{
    TrigPoly f(dim);
    Monomial plus, minus;
    plus.freq = freq;
    for (int i = 0; i < kMaxDim; ++i) {
        minus.freq[i] = -freq[i];
    }
    f.add_term(plus, Complex(0.0, -0.5 * amp));
    f.add_term(minus, Complex(0.0, 0.5 * amp));
    return f;
}

TrigPoly TrigPoly::monomial(int dim, const Monomial& m, Complex c)
{
    TrigPoly f(dim);
    f.add_term(m, c);
    return f;
}

void TrigPoly::add_term(const Monomial& m, Complex c)
{
    if (c == Complex(0.0, 0.0)) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0.0, 0.0)) {
            terms_.erase(it);
        }
    }
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o)
{
    if (dim_ == 0) {
        dim_ = o.dim_;
    }
    for (const auto& [m, c] : o.terms_) {
        add_term(m, c);
    }
    return *this;
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const
{
    TrigPoly r = *this;
    r += o;
    return r;
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const { return *this + o * -1.0; }

TrigPoly TrigPoly::operator*(double s) const
{
    TrigPoly r(dim_);
    if (s == 0.0) {
        return r;
    }
    for (const auto& [m, c] : terms_) {
        r.terms_.emplace(m, c * s);
    }
    return r;
}

TrigPoly TrigPoly::operator*(const TrigPoly& o) const
{
    TrigPoly r(std::max(dim_, o.dim_));
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m;
            for (int i = 0; i < kMaxDim; ++i) {
                m.pow[i] = static_cast<std::uint8_t>(ma.pow[i] + mb.pow[i]);
                m.freq[i] = ma.freq[i] + mb.freq[i];
            }
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

TrigPoly TrigPoly::derivative(int axis) const
{
    TrigPoly r(dim_);
    for (const auto& [m, c] : terms_) {
        if (m.pow[axis] > 0) {
            Monomial lower = m;
            lower.pow[axis] = static_cast<std::uint8_t>(m.pow[axis] - 1);
            r.add_term(lower, c * static_cast<double>(m.pow[axis]));
        }
        if (m.freq[axis] != 0) {
            r.add_term(m, c * Complex(0.0, kTwoPi * m.freq[axis]));
        }
    }
    return r;
}

double TrigPoly::eval(const Vec& x) const
{
    double acc = 0.0;
    for (const auto& [m, c] : terms_) {
        double mono = 1.0;
        double phase = 0.0;
        for (int i = 0; i < dim_; ++i) {
            mono *= ipow(x[i], m.pow[i]);
            phase += m.freq[i] * x[i];
        }
        if (phase == 0.0) {
            acc += c.real() * mono;
        } else {
            double arg = kTwoPi * phase;
            acc += mono * (c.real() * std::cos(arg) - c.imag() * std::sin(arg));
        }
    }
    return acc;
}

TrigPoly TrigPoly::shifted(const IVec& k) const
{
    bool trivial = true;
    for (int i = 0; i < dim_; ++i) {
        trivial = trivial && k[i] == 0;
    }
    if (trivial) {
        return *this;
    }
    TrigPoly r(dim_);
    for (const auto& [m, c] : terms_) {
        // Expand prod_i (x_i + k_i)^{p_i}.
        std::vector<std::pair<Monomial, double>> parts{{Monomial{{}, m.freq}, 1.0}};
        for (int i = 0; i < dim_; ++i) {
            std::vector<std::pair<Monomial, double>> next;
            for (const auto& [pm, pc] : parts) {
                for (int j = 0; j <= m.pow[i]; ++j) {
                    double w = binomial(m.pow[i], j) * ipow(static_cast<double>(k[i]), m.pow[i] - j);
                    if (w == 0.0) {
                        continue;
                    }
                    Monomial nm = pm;
                    nm.pow[i] = static_cast<std::uint8_t>(j);
                    next.emplace_back(nm, pc * w);
                }
            }
            parts = std::move(next);
        }
        for (const auto& [pm, pc] : parts) {
            r.add_term(pm, c * pc);
        }
    }
    return r;
}

TrigPoly TrigPoly::embedded(int new_dim, std::span<const int> axes) const
{
    TrigPoly r(new_dim);
    for (const auto& [m, c] : terms_) {
        Monomial nm;
        for (int i = 0; i < dim_; ++i) {
            nm.pow[axes[i]] = m.pow[i];
            nm.freq[axes[i]] = m.freq[i];
        }
        r.add_term(nm, c);
    }
    return r;
}

bool TrigPoly::has_monomials() const
{
    for (const auto& [m, c] : terms_) {
        for (int i = 0; i < kMaxDim; ++i) {
            if (m.pow[i] != 0) {
                return true;
            }
        }
    }
    return false;
}

Complex TrigPoly::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Complex{} : it->second;
}

double TrigPoly::max_abs_coeff() const
{
    double r = 0.0;
    for (const auto& [m, c] : terms_) {
        r = std::max(r, std::abs(c));
    }
    return r;
}

TrigPoly TrigPoly::pruned(double tol) const
{
    TrigPoly r(dim_);
    for (const auto& [m, c] : terms_) {
        if (std::abs(c) > tol) {
            r.terms_.emplace(m, c);
        }
    }
    return r;
}

// -------------------------------------------------------------- LiftedForm

LiftedForm::LiftedForm(int dim, int degree, Box box) : dim_(dim), degree_(degree), box_(box)
{
    if (dim < 1 || dim > kMaxDim || degree < 0 || degree > dim) {
        throw StructuralError("invalid form degree " + std::to_string(degree) + " on T^" + std::to_string(dim));
    }
    if (box_.dim != dim) {
        throw StructuralError("chart box dimension mismatch");
    }
}

LiftedForm LiftedForm::zero(int dim, int degree, const Box& box) { return LiftedForm(dim, degree, box); }

LiftedForm LiftedForm::function(const TrigPoly& f, const Box& box)
{
    LiftedForm r(box.dim, 0, box);
    r.add_component(0, f);
    return r;
}

LiftedForm LiftedForm::differential(int dim, int axis, const Box& box)
{
    LiftedForm r(dim, 1, box);
    r.add_component(static_cast<std::uint8_t>(1u << axis), TrigPoly::constant(dim, 1.0));
    return r;
}

LiftedForm LiftedForm::from_component(int degree, std::uint8_t mask, const TrigPoly& c, const Box& box)
{
    LiftedForm r(box.dim, degree, box);
    r.add_component(mask, c);
    return r;
}

TrigPoly LiftedForm::component(std::uint8_t mask) const
{
    auto it = comps_.find(mask);
    return it == comps_.end() ? TrigPoly(dim_) : it->second;
}

void LiftedForm::add_component(std::uint8_t mask, const TrigPoly& c)
{
    if (popcount(mask) != degree_ || mask >= (1u << dim_)) {
        throw StructuralError("component mask does not match form degree");
    }
    TrigPoly& slot = comps_.try_emplace(mask, TrigPoly(dim_)).first->second;
    slot += c;
    if (slot.empty()) {
        comps_.erase(mask);
    }
}

LiftedForm LiftedForm::operator+(const LiftedForm& o) const
{
    if (dim_ != o.dim_ || degree_ != o.degree_) {
        throw StructuralError("adding forms of different degree or dimension");
    }
    LiftedForm r = *this;
    for (const auto& [mask, c] : o.comps_) {
        r.add_component(mask, c);
    }
    return r;
}

LiftedForm LiftedForm::operator-(const LiftedForm& o) const { return *this + o * -1.0; }

LiftedForm LiftedForm::operator*(double s) const
{
    LiftedForm r(dim_, degree_, box_);
    for (const auto& [mask, c] : comps_) {
        r.add_component(mask, c * s);
    }
    return r;
}

LiftedForm LiftedForm::times(const TrigPoly& f) const
{
    LiftedForm r(dim_, degree_, box_);
    for (const auto& [mask, c] : comps_) {
        r.add_component(mask, c * f);
    }
    return r;
}

LiftedForm LiftedForm::wedge(const LiftedForm& o) const
{
    if (dim_ != o.dim_) {
        throw StructuralError("wedge of forms on different tori");
    }
    if (degree_ + o.degree_ > dim_) {
        throw StructuralError("wedge degree overflow");
    }
    if (!(box_ == o.box_) && !box_.global && !o.box_.global) {
        throw StructuralError("wedge of forms on different charts");
    }
    Box b = box_.global ? o.box_ : box_;
    LiftedForm r(dim_, degree_ + o.degree_, b);
    for (const auto& [ma, ca] : comps_) {
        for (const auto& [mb, cb] : o.comps_) {
            if (ma & mb) {
                continue;
            }
            r.add_component(static_cast<std::uint8_t>(ma | mb), (ca * cb) * static_cast<double>(wedge_sign(ma, mb)));
        }
    }
    return r;
}

LiftedForm LiftedForm::d() const
{
    if (degree_ >= dim_) {
        throw StructuralError("exterior derivative of a top-degree form");
    }
    LiftedForm r(dim_, degree_ + 1, box_);
    for (const auto& [mask, c] : comps_) {
        for (int k = 0; k < dim_; ++k) {
            auto bit = static_cast<std::uint8_t>(1u << k);
            if (mask & bit) {
                continue;
            }
            r.add_component(static_cast<std::uint8_t>(mask | bit),
                            c.derivative(k) * static_cast<double>(wedge_sign(bit, mask)));
        }
    }
    return r;
}

double LiftedForm::eval_lifted(const Vec& x, std::span<const Vec> vectors) const
{
    double acc = 0.0;
    for (const auto& [mask, c] : comps_) {
        double minor = mask_minor(mask, vectors);
        if (minor != 0.0) {
            acc += c.eval(x) * minor;
        }
    }
    return acc;
}

double LiftedForm::eval(const Vec& x, std::span<const Vec> vectors) const
{
    auto lifted = box_.lift(x);
    if (!lifted) {
        throw DomainError("point outside chart box " + box_.str());
    }
    return eval_lifted(*lifted, vectors);
}

double LiftedForm::eval(const TorusPoint& p, std::span<const Vec> vectors) const
{
    return eval(p.coords(), vectors);
}

LiftedForm LiftedForm::reboxed(const Box& inner) const
{
    if (box_.global) {
        if (has_monomials()) {
            throw StructuralError("global form carries lifted monomials");
        }
        return with_box(inner);
    }
    auto k = inner.shift_into(box_);
    if (!k) {
        throw DomainError("box " + inner.str() + " is not inside chart " + box_.str());
    }
    LiftedForm r(dim_, degree_, inner);
    for (const auto& [mask, c] : comps_) {
        r.add_component(mask, c.shifted(*k));
    }
    return r;
}

LiftedForm LiftedForm::embedded_into(std::span<const int> axes, const Box& target) const
{
    Box proj;
    proj.dim = dim_;
    proj.global = box_.global;
    for (int i = 0; i < dim_; ++i) {
        proj.lo[i] = target.lo[axes[i]];
        proj.hi[i] = target.hi[axes[i]];
    }
    LiftedForm local = box_.global ? *this : reboxed(proj);
    LiftedForm r(target.dim, degree_, target);
    for (const auto& [mask, c] : local.comps_) {
        std::uint8_t nm = 0;
        for (int i = 0; i < dim_; ++i) {
            if (mask & (1u << i)) {
                nm = static_cast<std::uint8_t>(nm | (1u << axes[i]));
            }
        }
        // Axis relabelling may permute the dx factors.
        int sign = 1;
        std::vector<int> order;
        for (int i = 0; i < dim_; ++i) {
            if (mask & (1u << i)) {
                order.push_back(axes[i]);
            }
        }
        for (std::size_t a = 0; a < order.size(); ++a) {
            for (std::size_t b = a + 1; b < order.size(); ++b) {
                if (order[a] > order[b]) {
                    sign = -sign;
                }
            }
        }
        r.add_component(nm, c.embedded(target.dim, axes) * static_cast<double>(sign));
    }
    return r;
}

bool LiftedForm::has_monomials() const
{
    return std::any_of(comps_.begin(), comps_.end(), [](const auto& kv) { return kv.second.has_monomials(); });
}

double LiftedForm::max_abs_coeff() const
{
    double r = 0.0;
    for (const auto& [mask, c] : comps_) {
        r = std::max(r, c.max_abs_coeff());
    }
    return r;
}

LiftedForm LiftedForm::pruned(double tol) const
{
    LiftedForm r(dim_, degree_, box_);
    for (const auto& [mask, c] : comps_) {
        auto p = c.pruned(tol);
        if (!p.empty()) {
            r.comps_.emplace(mask, p);
        }
    }
    return r;
}

LiftedForm LiftedForm::with_box(const Box& b) const
{
    LiftedForm r = *this;
    r.box_ = b;
    return r;
}

} // namespace loopgerbe
