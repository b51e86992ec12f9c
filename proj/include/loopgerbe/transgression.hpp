#pragma once

#include <complex>
#include <vector>

#include "loopgerbe/gerbe.hpp"

namespace loopgerbe {

/// Grid cells are small: one 16-node panel per cell and segment suffices.
inline constexpr Quadrature kCellQuadrature{16, 1};

/// Loop in LB: a closed chain of P pieces (tau,t) -> T^n, each 1-periodic in
/// t (mod Z^n), piece j covering u in [j/P, (j+1)/P] with tau = uP - j.
/// A cylinder map is the one-piece case with u = s.
class LoopOfLoops {
public:
    LoopOfLoops() = default;
    explicit LoopOfLoops(const CylinderMap& cyl);
    explicit LoopOfLoops(std::vector<SmoothMap> pieces);

    int dim() const { return dim_; }
    int pieces() const { return static_cast<int>(pieces_.size()); }
    const SmoothMap& piece(int j) const { return pieces_.at(j); }
    Vec eval(double u, double t) const;
    /// The loop t -> Gamma(u, t); u = 1 is the end of the last piece.
    ClosedPath loop_at(double u) const;
    /// Piece index and local tau for u (u = j/P maps to the start of piece j
    /// unless `end_of_piece`).
    std::pair<int, double> locate(double u, bool end_of_piece = false) const;

private:
    int dim_ = 0;
    std::vector<SmoothMap> pieces_;
};

/// Loop-space chart: segment i inside U_{s(i-1)} and U_{s(i)}.
using LoopSpaceChart = LoopChart;

LoopSpaceChart find_loopspace_chart(const GerbeData& g, const ClosedPath& loop, const ChartSearch& opts = {});

/// Phase of the transition from chart `from` to chart `to` (same
/// subdivision t): the frame of `to` equals exp(2 pi i phase) times the
/// frame of `from`.
double tg_transition_phase(const GerbeData& g, const ClosedPath& loop, const LoopSpaceChart& from,
                           const LoopSpaceChart& to, const Quadrature& q = kCellQuadrature);
std::complex<double> tg_transition(const GerbeData& g, const ClosedPath& loop, const LoopSpaceChart& from,
                                   const LoopSpaceChart& to, const Quadrature& q = kCellQuadrature);

/// Parallel transport of T(G) along u in [u0,u1] (inside one piece) in a
/// fixed loop-space chart, as a phase.
double tg_transport_phase(const GerbeData& g, const LoopOfLoops& path, double u0, double u1,
                          const LoopSpaceChart& chart, const Quadrature& q = kCellQuadrature);
std::complex<double> tg_parallel_transport(const GerbeData& g, const LoopOfLoops& path, double u0, double u1,
                                           const LoopSpaceChart& chart, const Quadrature& q = kCellQuadrature);

/// Grid u(0..m-1) x t(0..n-1) with labels s_i(j): every cell
/// [u_i,u_{i+1}] x [t_j,t_{j+1}] lies in U_{s_i(j-1)} and U_{s_i(j)}.
struct CylinderChart {
    std::vector<double> u;
    std::vector<double> t;
    std::vector<std::vector<int>> s;

    int m() const { return static_cast<int>(u.size()); }
    int n() const { return static_cast<int>(t.size()); }
    double u_end(int i) const { return i + 1 < m() ? u[i + 1] : u[0] + 1.0; }
    double t_at(int j) const; ///< t_j for any integer j (periodic lift)
    int label(int i, int j) const;
    LoopSpaceChart slice(int i) const;
};

struct CylinderSearch {
    int max_cells = 0;       ///< bound on m and n; 0 picks one from the cover's overlaps
    int min_m = 1;
    int min_n = 1;
    int samples = 6;         ///< samples per cell edge (36 per cell)
    double margin = 1e-4;
    bool prefer_high = false;
};

CylinderChart find_cylinder_chart(const Cover& cover, const LoopOfLoops& path, const CylinderSearch& opts = {});

struct SurfaceHolonomy {
    std::complex<double> value{1.0, 0.0};
    double phase = 0.0;
    CylinderChart chart;
};

/// Composition of transports over the u-segments with transition factors
/// at the seams.
SurfaceHolonomy surface_holonomy_composed(const GerbeData& g, const LoopOfLoops& path, const CylinderChart& chart,
                                          const Quadrature& q = kCellQuadrature);
SurfaceHolonomy surface_holonomy_composed(const GerbeData& g, const LoopOfLoops& path, const Quadrature& q = kCellQuadrature);
/// Explicit product over grid cells, corners and edges. By default it uses
/// its own finer grid with reversed chart tie-breaking.
SurfaceHolonomy surface_holonomy_direct(const GerbeData& g, const LoopOfLoops& path, const CylinderChart& chart,
                                        const Quadrature& q = kCellQuadrature);
SurfaceHolonomy surface_holonomy_direct(const GerbeData& g, const LoopOfLoops& path, const Quadrature& q = kCellQuadrature);

/// (T omega)_gamma(X[,Y]) = int_0^1 omega(gamma', X, Y) dt for a glued
/// 2- or 3-form; X and Y are one-parameter maps t -> R^n.
double transgress_form(const GluedForm& omega, const LoopMap& loop, const SmoothMap& x,
                       const SmoothMap* y = nullptr, const Quadrature& q = kCellQuadrature);

struct CurvatureCheck {
    double lhs = 0.0;    ///< -(1/eps^2) arg hol around the parallelogram
    double rhs = 0.0;    ///< -2 pi (T R)(X,Y)
    double defect = 0.0;
};

/// Loop-space parallelogram gamma -> gamma+eX -> gamma+eX+eY -> gamma+eY.
LoopOfLoops parallelogram(const LoopMap& loop, const SmoothMap& x, const SmoothMap& y, double eps);
CurvatureCheck tg_curvature_check(const GerbeData& g, const LoopMap& loop, const SmoothMap& x, const SmoothMap& y,
                                  double eps, const Quadrature& q = kCellQuadrature);

/// Vector field t -> sum of Fourier terms (winding zero).
SmoothMap vector_field(int dim, const Vec& constant, const std::vector<FourierTerm>& terms = {});

} // namespace loopgerbe
