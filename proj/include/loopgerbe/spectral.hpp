#pragma once

#include <complex>
#include <map>
#include <vector>

#include "loopgerbe/gerbe.hpp"
#include "loopgerbe/smooth_map.hpp"

namespace loopgerbe {

/// Hurwitz zeta for real s != 1 and a > 0 (Euler-Maclaurin continuation).
double hurwitz_zeta(double s, double a);

/// Eta invariant of the spectrum {2 pi (n + a)} from Hurwitz zeta values at s = 0.
double eta_invariant(double a);

struct HeatEta {
    double value = 0.0;
    double error_bound = 0.0; ///< truncation + both quadrature tails (analytic bounds)
    int n_max = 0;
};

/// Independent oracle: truncated heat-kernel series integrated in u.
HeatEta eta_heat_oracle(double a, int n_max = 10000);

int kernel_dim(double a);

/// tau = exp(pi i (eta + dim ker)); exact at half-integer exponents.
std::complex<double> tau(double a);

/// S^1-fiber family with eigenvalues 2 pi (n + phi(b)) and eigenframes
/// exp(2 pi i (n theta + psi_n(b))).
struct SpectralFamily {
    int base_dim = 1;
    SmoothMap phi;                  ///< T^m -> R with integer winding
    TrigPoly psi;                   ///< frame rotation shared by all modes; linear terms allowed
    std::map<int, TrigPoly> mode_psi; ///< extra per-mode rotation (zero-winding families only)
    int n_max = 4096;

    void validate() const;
    double phase(const Vec& b) const { return phi.eval(b)[0]; }
    double eigenvalue(int n, const Vec& b) const;
    IVec winding() const;
    TrigPoly psi_n(int n) const;
};

/// phi(b) = w.b + offset + Fourier terms.
SpectralFamily make_family(int base_dim, const IVec& winding, double offset = 0.0,
                           const std::vector<FourierTerm>& terms = {}, TrigPoly psi = {});
/// The model family over S^1 with phi(b) = b.
SpectralFamily e1_family();

/// Signed count of zero crossings of the eigenvalues along path([t0,t1])
/// (a map from one parameter into the base torus). Upward crossings count +1.
int spectral_flow(const SpectralFamily& fam, const SmoothMap& path, double t0 = 0.0, double t1 = 1.0);
int spectral_flow(const SpectralFamily& fam, const LoopMap& loop);
/// Flows along the coordinate loops of the base.
std::vector<int> generator_flows(const SpectralFamily& fam);

struct FlowCancellation {
    IVec classifying{};          ///< S(b) = S . b, the classifying covector of -sf
    std::vector<int> before;     ///< flows of the family
    std::vector<int> pulled;     ///< flows of S^* E_1
    std::vector<int> after;      ///< recounted flows of the disjoint union
    bool ok = false;
};
FlowCancellation cancel_flow(const SpectralFamily& fam);

/// Per-chart spectral cuts c_a with gap radii delta_a.
struct SpectralCut {
    std::vector<double> c;
    std::vector<double> delta;
};

/// Cuts placed opposite each chart's phase range; `shift[a]` moves cut a by
/// 2 pi shift[a] (another valid choice).
SpectralCut auto_cuts(const SpectralFamily& fam, const Cover& cover, const std::vector<int>& shift = {});
/// Throws DomainError naming chart and base point on a gap violation.
void check_cuts(const SpectralFamily& fam, const Cover& cover, const SpectralCut& cuts, int grid = 17);

/// Index gerbe: L_ab = det E+ (x) det E-^{-1} over the modes between the cuts,
/// theta = 1, a_ab from the frame rotation, F from solve_F.
GerbeData index_gerbe_build(const SpectralFamily& fam, const Cover& cover, const SpectralCut& cuts);

} // namespace loopgerbe
