#include "loopgerbe/spectral.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loopgerbe/error.hpp"
#include "loopgerbe/quadrature.hpp"

namespace loopgerbe {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;

double frac(double x) { return x - std::floor(x); }

std::string point_str(const Vec& b, int dim)
{
    std::ostringstream os;
    os.precision(6);
    os << "(";
    for (int i = 0; i < dim; ++i) {
        os << (i ? "," : "") << b[i];
    }
    os << ")";
    return os.str();
}

/// Number of integers in the open interval (lo, hi).
long long integers_between(double lo, double hi)
{
    if (hi <= lo) {
        return 0;
    }
    return std::max(0LL, static_cast<long long>(std::ceil(hi)) - static_cast<long long>(std::floor(lo)) - 1);
}

} // namespace

double hurwitz_zeta(double s, double a)
{
    if (!(a > 0.0)) {
        throw DomainError("Hurwitz zeta needs a > 0");
    }
    if (s == 1.0) {
        throw DomainError("Hurwitz zeta has a pole at s = 1");
    }
    // Euler-Maclaurin after N direct terms.
    constexpr int kDirect = 16;
    constexpr int kBernoulli = 12;
    double sum = 0.0;
    for (int k = 0; k < kDirect; ++k) {
        sum += std::pow(k + a, -s);
    }
    const double x = kDirect + a;
    sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    double poch = s;
    double xpow = std::pow(x, -s - 1.0);
    double fact = 2.0;
    for (int j = 1; j <= kBernoulli; ++j) {
        sum += boost::math::bernoulli_b2n<double>(j) / fact * poch * xpow;
        poch *= (s + 2 * j - 1) * (s + 2 * j);
        xpow /= x * x;
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    return sum;
}

double eta_invariant(double a)
{
    double r = frac(a);
    if (r == 0.0) {
        return 0.0; // symmetric spectrum, kernel excluded
    }
    // Positive part 2pi(n+r), n >= 0; negative part -2pi(n+1-r), n >= 0.
    return hurwitz_zeta(0.0, r) - hurwitz_zeta(0.0, 1.0 - r);
}

HeatEta eta_heat_oracle(double a, int n_max)
{
    if (n_max < 1) {
        throw DomainError("heat series needs n_max >= 1");
    }
    HeatEta out;
    out.n_max = n_max;
    const double r = frac(a);
    if (r == 0.0) {
        return out; // terms cancel in +-n pairs
    }
    const double lam_min = kTwoPi * std::min(r, 1.0 - r);
    // In v = sqrt(u): eta = (2/sqrt(pi)) int_0^inf sum_n lambda_n exp(-v^2 lambda_n^2) dv.
    const double v_lo = 0.05;
    const double v_hi = 7.0 / lam_min;
    auto lambda = [r](long long n) { return kTwoPi * (static_cast<double>(n) + r); };
    auto series = [&](double v) {
        double acc = 0.0;
        // Modes outward from zero; later terms underflow to exactly 0.
        for (long long n = 0; n <= n_max; ++n) {
            double l = lambda(n);
            if (v * v * l * l > 800.0) {
                break;
            }
            acc += l * std::exp(-v * v * l * l);
        }
        for (long long n = -1; n >= -n_max; --n) {
            double l = lambda(n);
            if (v * v * l * l > 800.0) {
                break;
            }
            acc += l * std::exp(-v * v * l * l);
        }
        return acc;
    };
    double total = 0.0;
    for (double lo = v_lo; lo < v_hi;) {
        double hi = std::min(v_hi, lo * 1.25);
        total += integrate_1d(series, lo, hi, Quadrature{1, 1});
        lo = hi;
    }
    out.value = 2.0 / kSqrtPi * total;
    // [0, v_lo]: Poisson summation gives |series| <= exp(-1/(4u)) / (sqrt(pi) u^{3/2}).
    const double u = v_lo * v_lo;
    double low = 2.0 / kSqrtPi * v_lo * std::exp(-0.25 / u) / (kSqrtPi * u * std::sqrt(u));
    // [v_hi, inf): sum_n erfc(v_hi |lambda_n|).
    double high = 0.0;
    for (long long n = -n_max; n <= n_max; ++n) {
        double e = std::erfc(v_hi * std::abs(lambda(n)));
        high += e;
        if (e == 0.0 && n > 0) {
            break;
        }
    }
    // Truncated modes |n| > n_max, bounded at the smallest v.
    double trunc = 4.0 * std::erfc(v_lo * kTwoPi * (n_max - 1.0));
    out.error_bound = low + high + trunc;
    return out;
}

int kernel_dim(double a) { return frac(a) == 0.0 ? 1 : 0; }

std::complex<double> tau(double a)
{
    double e = eta_invariant(a) + kernel_dim(a);
    // + 0.0 turns a signed zero into +0.
    return {boost::math::cos_pi(e) + 0.0, boost::math::sin_pi(e) + 0.0};
}

void SpectralFamily::validate() const
{
    if (base_dim != 1 && base_dim != 2) {
        throw StructuralError("spectral family base dimension must be 1 or 2");
    }
    if (phi.param_dim() != base_dim || phi.out_dim() != 1) {
        throw StructuralError("phi must map the base torus to R");
    }
    for (int k = 0; k < base_dim; ++k) {
        if (!phi.periodic_in(k)) {
            throw StructuralError("phi must have integer winding (eigenvalue set periodic on the base)");
        }
    }
    if (psi.dim() != 0 && psi.dim() != base_dim) {
        throw StructuralError("frame rotation psi has the wrong dimension");
    }
    for (const auto& [n, p] : mode_psi) {
        if (p.dim() != base_dim) {
            throw StructuralError("mode rotation psi_" + std::to_string(n) + " has the wrong dimension");
        }
    }
    if (!mode_psi.empty() && winding() != IVec{}) {
        throw StructuralError("per-mode frame rotations need a family without spectral winding");
    }
    if (n_max < 1) {
        throw StructuralError("truncation n_max must be positive");
    }
}

double SpectralFamily::eigenvalue(int n, const Vec& b) const { return kTwoPi * (n + phase(b)); }

IVec SpectralFamily::winding() const
{
    IVec w{};
    for (int k = 0; k < base_dim; ++k) {
        w[k] = phi.winding(k)[0];
    }
    return w;
}

TrigPoly SpectralFamily::psi_n(int n) const
{
    TrigPoly p = psi.dim() == 0 ? TrigPoly(base_dim) : psi;
    auto it = mode_psi.find(n);
    if (it != mode_psi.end()) {
        p += it->second;
    }
    return p;
}

SpectralFamily make_family(int base_dim, const IVec& winding, double offset, const std::vector<FourierTerm>& terms,
                           TrigPoly psi)
{
    std::vector<IVec> columns;
    for (int k = 0; k < base_dim; ++k) {
        columns.push_back(IVec{winding[k], 0, 0});
    }
    SpectralFamily f;
    f.base_dim = base_dim;
    f.phi = affine_trig_map(base_dim, 1, columns, Vec{offset, 0, 0}, terms);
    f.psi = psi.dim() == 0 ? TrigPoly(base_dim) : std::move(psi);
    f.validate();
    return f;
}

SpectralFamily e1_family() { return make_family(1, {1, 0, 0}); }

int spectral_flow(const SpectralFamily& fam, const SmoothMap& path, double t0, double t1)
{
    fam.validate();
    if (path.param_dim() != 1 || path.out_dim() != fam.base_dim) {
        throw StructuralError("spectral-flow path must map one parameter into the base");
    }
    if (t1 < t0) {
        return -spectral_flow(fam, path, t1, t0);
    }
    auto g = [&](double t) { return fam.phase(path.eval({t, 0, 0})); };
    auto slope = [&](double t) {
        Vec b;
        Jacobian jp;
        path.eval_with_jacobian({t, 0, 0}, b, jp);
        Jacobian jf = fam.phi.jacobian(b);
        double acc = 0.0;
        for (int k = 0; k < fam.base_dim; ++k) {
            acc += jf[k][0] * jp[0][k];
        }
        return acc;
    };
    // Mode n has eigenvalue >= 0 iff phase >= -n: crossings are integer
    // levels k = -n passed by the phase.
    const int samples = 2048;
    int flow = 0;
    double prev = g(t0);
    for (int i = 1; i <= samples; ++i) {
        double ta = t0 + (t1 - t0) * (i - 1) / samples;
        double tb = t0 + (t1 - t0) * i / samples;
        double cur = g(tb);
        long long fa = static_cast<long long>(std::floor(prev));
        long long fb = static_cast<long long>(std::floor(cur));
        for (long long k = std::min(fa, fb) + 1; k <= std::max(fa, fb); ++k) {
            if (std::llabs(k) > fam.n_max) {
                continue;
            }
            // Root of g - k in [ta, tb] by bisection, then the transversality check.
            double lo = ta, hi = tb;
            bool up = fb > fa;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                bool above = g(mid) >= static_cast<double>(k);
                if (above == up) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            double tr = 0.5 * (lo + hi);
            if (std::abs(slope(tr)) < 1e-6) {
                std::ostringstream os;
                os.precision(10);
                os << "eigenvalue of mode " << -k << " is tangent to 0 at t=" << tr;
                throw DomainError(os.str());
            }
            flow += up ? 1 : -1;
        }
        prev = cur;
    }
    return flow;
}

int spectral_flow(const SpectralFamily& fam, const LoopMap& loop) { return spectral_flow(fam, loop.map, 0.0, 1.0); }

std::vector<int> generator_flows(const SpectralFamily& fam)
{
    std::vector<int> out;
    for (int k = 0; k < fam.base_dim; ++k) {
        std::vector<TrigPoly> comps;
        for (int i = 0; i < fam.base_dim; ++i) {
            comps.push_back(i == k ? TrigPoly::coordinate(1, 0) : TrigPoly::constant(1, 0.0));
        }
        out.push_back(spectral_flow(fam, SmoothMap::poly(1, fam.base_dim, comps)));
    }
    return out;
}

FlowCancellation cancel_flow(const SpectralFamily& fam)
{
    FlowCancellation r;
    r.before = generator_flows(fam);
    for (int k = 0; k < fam.base_dim; ++k) {
        r.classifying[k] = -r.before[k];
    }
    // S^* E_1: phase S(b) = S . b.
    SpectralFamily pulled = make_family(fam.base_dim, r.classifying);
    r.pulled = generator_flows(pulled);
    // Disjoint union: the spectra add, so crossings are recounted per member.
    auto again = generator_flows(fam);
    r.ok = true;
    for (int k = 0; k < fam.base_dim; ++k) {
        r.after.push_back(again[k] + r.pulled[k]);
        r.ok = r.ok && r.after.back() == 0;
    }
    return r;
}

SpectralCut auto_cuts(const SpectralFamily& fam, const Cover& cover, const std::vector<int>& shift)
{
    fam.validate();
    if (cover.dim() != fam.base_dim) {
        throw StructuralError("cover and family base dimensions differ");
    }
    SpectralCut cuts;
    const int grid = 33;
    for (int a = 0; a < cover.size(); ++a) {
        const Box& b = cover.chart(a);
        double lo = 1e300, hi = -1e300;
        int total = 1;
        for (int k = 0; k < fam.base_dim; ++k) {
            total *= grid;
        }
        for (int idx = 0; idx < total; ++idx) {
            Vec p{};
            int rest = idx;
            for (int k = 0; k < fam.base_dim; ++k) {
                int c = rest % grid;
                rest /= grid;
                p[k] = b.lo[k] + (b.hi[k] - b.lo[k]) * c / (grid - 1);
            }
            double v = fam.phase(p);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        double gap = 1.0 - (hi - lo);
        if (gap <= 0.05) {
            throw DomainError("no spectral gap over chart " + std::to_string(a) + ": phase range " +
                              std::to_string(hi - lo));
        }
        int s = a < static_cast<int>(shift.size()) ? shift[a] : 0;
        // Cut opposite the phase range: eigenvalues 2pi(n+phi) stay away from it.
        cuts.c.push_back(kTwoPi * (hi + 0.5 * gap + s));
        cuts.delta.push_back(kTwoPi * 0.4 * gap);
    }
    return cuts;
}

void check_cuts(const SpectralFamily& fam, const Cover& cover, const SpectralCut& cuts, int grid)
{
    fam.validate();
    if (static_cast<int>(cuts.c.size()) != cover.size() || cuts.delta.size() != cuts.c.size()) {
        throw StructuralError("one spectral cut per chart required");
    }
    grid = std::max(2, grid);
    for (int a = 0; a < cover.size(); ++a) {
        if (!(cuts.delta[a] > 0.0)) {
            throw DomainError("gap radius of chart " + std::to_string(a) + " must be positive");
        }
        const Box& b = cover.chart(a);
        int total = 1;
        for (int k = 0; k < fam.base_dim; ++k) {
            total *= grid;
        }
        for (int idx = 0; idx < total; ++idx) {
            Vec p{};
            int rest = idx;
            for (int k = 0; k < fam.base_dim; ++k) {
                int c = rest % grid;
                rest /= grid;
                p[k] = b.lo[k] + (b.hi[k] - b.lo[k]) * c / (grid - 1);
            }
            // Distance from the cut to the lattice 2pi(Z + phi).
            double x = cuts.c[a] / kTwoPi - fam.phase(p);
            double d = kTwoPi * std::abs(x - std::round(x));
            if (d < cuts.delta[a]) {
                throw DomainError("spectral cut of chart " + std::to_string(a) + " violates its gap at b=" +
                                  point_str(p, fam.base_dim));
            }
        }
    }
}

GerbeData index_gerbe_build(const SpectralFamily& fam, const Cover& cover, const SpectralCut& cuts)
{
    if (fam.base_dim != 2 || cover.target_dim() != 2) {
        throw StructuralError("index gerbe is built over T^2");
    }
    check_cuts(fam, cover, cuts);
    GerbeData g = trivial_gerbe(cover);
    for (auto& [t, vals] : g.a.values) {
        const int ia = t[0], ib = t[1];
        for (std::size_t c = 0; c < vals.size(); ++c) {
            const Box& kb = cover.components(t)[c];
            // Modes between the cuts are constant on the component (gap condition).
            double x = fam.phase(kb.center());
            double ca = cuts.c[ia] / kTwoPi, cb = cuts.c[ib] / kTwoPi;
            double sign = ca < cb ? 1.0 : -1.0;
            double lo = std::min(ca, cb) - x, hi = std::max(ca, cb) - x;
            long long count = integers_between(lo, hi);
            TrigPoly rot = (fam.psi.dim() == 0 ? TrigPoly(fam.base_dim) : fam.psi) * (sign * static_cast<double>(count));
            for (const auto& [n, p] : fam.mode_psi) {
                if (n > lo && n < hi) {
                    rot += p * sign;
                }
            }
            vals[c] = ChartForm(LiftedForm::function(rot, kb).d());
        }
    }
    return solve_F(g);
}

} // namespace loopgerbe
