#include "loopgerbe/random.hpp"

namespace loopgerbe {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

IVec random_freq(int dim, Rng& rng, int max_freq)
{
    IVec f{};
    for (int i = 0; i < dim; ++i) {
        f[i] = uniform_int(rng, -max_freq, max_freq);
    }
    return f;
}

} // namespace

TrigPoly random_trig_poly(int dim, Rng& rng, int terms, int max_freq, bool monomials, double amp)
{
    TrigPoly f(dim);
    for (int k = 0; k < terms; ++k) {
        IVec freq = random_freq(dim, rng, max_freq);
        TrigPoly mode = TrigPoly::cosine(dim, freq, uniform(rng, -amp, amp))
                        + TrigPoly::sine(dim, freq, uniform(rng, -amp, amp));
        if (monomials) {
            Monomial m;
            for (int i = 0; i < dim; ++i) {
                m.pow[i] = static_cast<std::uint8_t>(uniform_int(rng, 0, 1));
            }
            mode = mode * TrigPoly::monomial(dim, m, 1.0);
        }
        f += mode;
    }
    return f;
}

LiftedForm random_form(int dim, int degree, const Box& box, Rng& rng, bool monomials)
{
    LiftedForm out = LiftedForm::zero(dim, degree, box);
    if (box.global) {
        monomials = false;
    }
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
        if (popcount(static_cast<std::uint8_t>(mask)) == degree) {
            out.add_component(static_cast<std::uint8_t>(mask), random_trig_poly(dim, rng, 2, 2, monomials));
        }
    }
    return out;
}

CechCochain random_cochain(const Cover& cover, int p, int q, Rng& rng, bool u1)
{
    CechCochain c = CechCochain::zero(cover, p, q, u1);
    for (auto& [t, vals] : c.values) {
        for (auto& v : vals) {
            v = ChartForm(random_form(cover.target_dim(), q, v.box(), rng));
        }
    }
    return c;
}

LoopMap random_loop(int dim, const IVec& winding, Rng& rng, double amp, int max_freq)
{
    Vec offset{};
    for (int i = 0; i < dim; ++i) {
        offset[i] = uniform(rng, 0.0, 1.0);
    }
    std::vector<FourierTerm> terms;
    for (int f = 1; f <= max_freq; ++f) {
        FourierTerm t;
        t.freq = {f, 0, 0};
        for (int i = 0; i < dim; ++i) {
            t.amp_cos[i] = uniform(rng, -amp, amp) / f;
            t.amp_sin[i] = uniform(rng, -amp, amp) / f;
        }
        terms.push_back(t);
    }
    return make_loop(dim, winding, offset, terms);
}

CylinderMap random_cylinder(int dim, const IVec& w_s, const IVec& w_t, Rng& rng, double amp, int max_freq)
{
    Vec offset{};
    for (int i = 0; i < dim; ++i) {
        offset[i] = uniform(rng, 0.0, 1.0);
    }
    std::vector<FourierTerm> terms;
    for (int fs = -max_freq; fs <= max_freq; ++fs) {
        for (int ft = 0; ft <= max_freq; ++ft) {
            if ((ft == 0 && fs <= 0)) {
                continue;
            }
            FourierTerm t;
            t.freq = {fs, ft, 0};
            double scale = 1.0 / (std::abs(fs) + ft);
            for (int i = 0; i < dim; ++i) {
                t.amp_cos[i] = uniform(rng, -amp, amp) * scale;
                t.amp_sin[i] = uniform(rng, -amp, amp) * scale;
            }
            terms.push_back(t);
        }
    }
    return make_cylinder(dim, w_s, w_t, offset, terms);
}

SmoothMap random_reparametrization(Rng& rng, double amp)
{
    std::vector<FourierTerm> terms;
    for (int f = 1; f <= 2; ++f) {
        FourierTerm t;
        t.freq = {f, 0, 0};
        // |phi' - 1| <= 2 pi f * amp / f^2 keeps phi monotone for amp < 0.1.
        t.amp_sin[0] = uniform(rng, -amp, amp) / (kTwoPi * f);
        terms.push_back(t);
    }
    return affine_trig_map(1, 1, {IVec{1, 0, 0}}, Vec{uniform(rng, -0.1, 0.1), 0, 0}, terms);
}

} // namespace loopgerbe
