#include "loopgerbe/transgression.hpp"

#include <algorithm>
#include <cmath>

#include "loopgerbe/error.hpp"
#include "loopgerbe/parallel.hpp"

namespace loopgerbe {

namespace {

constexpr double kSnap = 1e-12;

bool close_mod_z(const Vec& a, const Vec& b, int dim, double tol = 1e-9)
{
    for (int i = 0; i < dim; ++i) {
        double d = a[i] - b[i];
        if (std::abs(d - std::round(d)) > tol) {
            return false;
        }
    }
    return true;
}

/// Sampler of the overlap form a_{bd} (any order, zero when b == d).
FormSampler pair_sampler(const GerbeData& g, int b, int d)
{
    return [&g, b, d](const Vec& x, std::span<const Vec> v) {
        if (b == d) {
            return 0.0;
        }
        std::array<Vec, kMaxDim> pushed{};
        std::copy(v.begin(), v.end(), pushed.begin());
        Vec y = g.cover.to_target(x, std::span<Vec>(pushed.data(), v.size()));
        return g.a.eval({b, d}, y, std::span<const Vec>(pushed.data(), v.size()));
    };
}

double q_at(const GerbeData& g, int a, int b, int c, const Vec& x)
{
    return g.q.eval({a, b, c}, g.cover.to_target(x), {});
}

/// Piece and local tau range for a u-interval inside one piece.
struct PieceRange {
    int piece;
    double tau0;
    double tau1;
};

PieceRange piece_range(const LoopOfLoops& path, double u0, double u1)
{
    int p = path.pieces();
    double v0 = u0 * p;
    double base = std::floor(v0 + kSnap);
    PieceRange r;
    r.piece = static_cast<int>(((static_cast<long long>(base) % p) + p) % p);
    r.tau0 = v0 - base;
    r.tau1 = r.tau0 + (u1 - u0) * p;
    if (p > 1 && r.tau1 > 1.0 + 1e-9) {
        throw StructuralError("u-interval crosses a piece boundary of the loop of loops");
    }
    return r;
}

/// One-parameter map tau -> piece(tau, t0).
SmoothMap u_edge(const SmoothMap& piece, double t0)
{
    return SmoothMap::restrict(piece, SmoothMap::poly(1, 2, {TrigPoly::coordinate(1, 0), TrigPoly::constant(1, t0)}));
}

double edge_integral(const GerbeData& g, const LoopOfLoops& path, double u0, double u1, double t0, int b, int d,
                     const Quadrature& q)
{
    if (b == d) {
        return 0.0;
    }
    PieceRange r = piece_range(path, u0, u1);
    return line_integral(pair_sampler(g, b, d), u_edge(path.piece(r.piece), t0), r.tau0, r.tau1, q);
}

double cell_integral(const GerbeData& g, const LoopOfLoops& path, double u0, double u1, double t0, double t1, int s,
                     const Quadrature& q)
{
    PieceRange r = piece_range(path, u0, u1);
    return surface_integral(chart_sampler(g.cover, g.F.at({s}, 0)), path.piece(r.piece), r.tau0, r.tau1, t0, t1, q);
}

} // namespace

LoopOfLoops::LoopOfLoops(const CylinderMap& cyl) : LoopOfLoops(std::vector<SmoothMap>{cyl.map}) {}

LoopOfLoops::LoopOfLoops(std::vector<SmoothMap> pieces) : pieces_(std::move(pieces))
{
    if (pieces_.empty()) {
        throw StructuralError("a loop of loops needs at least one piece");
    }
    dim_ = pieces_[0].out_dim();
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
        const auto& p = pieces_[j];
        if (p.param_dim() != 2 || p.out_dim() != dim_) {
            throw StructuralError("loop-of-loops pieces must be two-parameter maps into one torus");
        }
        const auto& next = pieces_[(j + 1) % pieces_.size()];
        for (double t : {0.0, 0.37, 0.71}) {
            if (!close_mod_z(p.eval({1.0, t, 0}), next.eval({0.0, t, 0}), dim_)) {
                throw StructuralError("pieces of the loop of loops do not close up at piece " + std::to_string(j));
            }
            for (double tau : {0.0, 0.5, 1.0}) {
                if (!close_mod_z(p.eval({tau, t, 0}), p.eval({tau, t + 1.0, 0}), dim_)) {
                    throw StructuralError("loop-of-loops piece " + std::to_string(j) + " is not periodic in t");
                }
            }
        }
    }
}

std::pair<int, double> LoopOfLoops::locate(double u, bool end_of_piece) const
{
    int p = pieces();
    double v = (u - std::floor(u)) * p;
    double base = std::floor(v + kSnap);
    double tau = v - base;
    int j = static_cast<int>(base) % p;
    if (end_of_piece && std::abs(tau) < kSnap) {
        return {(j + p - 1) % p, 1.0};
    }
    return {j, std::max(0.0, tau)};
}

Vec LoopOfLoops::eval(double u, double t) const
{
    auto [j, tau] = locate(u);
    return pieces_[j].eval({tau, t, 0});
}

ClosedPath LoopOfLoops::loop_at(double u) const
{
    auto [j, tau] = locate(u);
    return ClosedPath(std::vector<SmoothMap>{
        SmoothMap::restrict(pieces_[j], SmoothMap::poly(1, 2, {TrigPoly::constant(1, tau), TrigPoly::coordinate(1, 0)}))});
}

LoopSpaceChart find_loopspace_chart(const GerbeData& g, const ClosedPath& loop, const ChartSearch& opts)
{
    return find_loop_chart(g.cover, loop, ChartConvention::LoopSpace, opts);
}

double tg_transition_phase(const GerbeData& g, const ClosedPath& loop, const LoopSpaceChart& from,
                           const LoopSpaceChart& to, const Quadrature& q)
{
    if (from.n() != to.n() || from.t != to.t) {
        throw StructuralError("transition needs two charts with the same subdivision");
    }
    double phase = 0.0;
    for (int i = 0; i < from.n(); ++i) {
        int a = from.label(i - 1), b = from.label(i);
        int c = to.label(i - 1), d = to.label(i);
        Vec x = loop.eval(from.seg_begin(i));
        phase -= q_at(g, a, c, d, x) + q_at(g, a, d, b, x);
        if (b != d) {
            phase -= loop.integrate(pair_sampler(g, b, d), from.seg_begin(i), from.seg_end(i), q);
        }
    }
    return phase;
}

std::complex<double> tg_transition(const GerbeData& g, const ClosedPath& loop, const LoopSpaceChart& from,
                                   const LoopSpaceChart& to, const Quadrature& q)
{
    return unit_phase(tg_transition_phase(g, loop, from, to, q));
}

double tg_transport_phase(const GerbeData& g, const LoopOfLoops& path, double u0, double u1,
                          const LoopSpaceChart& chart, const Quadrature& q)
{
    double phase = 0.0;
    for (int j = 0; j < chart.n(); ++j) {
        double t0 = chart.seg_begin(j), t1 = chart.seg_end(j);
        phase += edge_integral(g, path, u0, u1, t0, chart.label(j - 1), chart.label(j), q);
        phase += cell_integral(g, path, u0, u1, t0, t1, chart.label(j), q);
    }
    return phase;
}

std::complex<double> tg_parallel_transport(const GerbeData& g, const LoopOfLoops& path, double u0, double u1,
                                           const LoopSpaceChart& chart, const Quadrature& q)
{
    return unit_phase(tg_transport_phase(g, path, u0, u1, chart, q));
}

double CylinderChart::t_at(int j) const
{
    int nn = n();
    int r = ((j % nn) + nn) % nn;
    return t[r] + std::floor(static_cast<double>(j) / nn);
}

int CylinderChart::label(int i, int j) const
{
    int mm = m(), nn = n();
    return s[((i % mm) + mm) % mm][((j % nn) + nn) % nn];
}

LoopSpaceChart CylinderChart::slice(int i) const
{
    LoopSpaceChart c;
    c.t = t;
    c.s = s[((i % m()) + m()) % m()];
    return c;
}

namespace {

/// Tries one grid size; fills `out` on success.
bool try_cylinder_grid(const Cover& cover, const LoopOfLoops& path, const CylinderSearch& opts, int m, int n,
                       CylinderChart& out)
{
    const int p = path.pieces();
    const int ns = std::max(2, opts.samples);
    const int nc = cover.size();
    std::vector<double> u_offsets = {0.0};
    if (p == 1) {
        u_offsets.push_back(0.5 / m);
    }
    for (double ou : u_offsets) {
        for (double ot : {0.0, 0.5 / n}) {
            // Charts containing cell (i,j) with margin, computed on demand.
            std::vector<std::vector<char>> member(static_cast<std::size_t>(m) * n);
            auto cell = [&](int i, int j) -> const std::vector<char>& {
                auto& mem = member[static_cast<std::size_t>(i) * n + j];
                if (!mem.empty()) {
                    return mem;
                }
                double u0 = ou + static_cast<double>(i) / m, u1 = u0 + 1.0 / m;
                double t0 = ot + static_cast<double>(j) / n, t1 = t0 + 1.0 / n;
                std::vector<Vec> pts;
                for (int a = 0; a < ns; ++a) {
                    double uu = u0 + (u1 - u0) * a / (ns - 1);
                    if (p > 1 && a == ns - 1) {
                        uu = u1 - 1e-14; // stay inside the piece
                    }
                    for (int b = 0; b < ns; ++b) {
                        pts.push_back(cover.to_target(path.eval(uu, t0 + (t1 - t0) * b / (ns - 1))));
                    }
                }
                mem.assign(nc, 0);
                for (int c = 0; c < nc; ++c) {
                    mem[c] = std::all_of(pts.begin(), pts.end(), [&](const Vec& y) {
                        return box_signed_distance(cover.chart(c), y) < -opts.margin;
                    });
                }
                return mem;
            };
            CylinderChart chart;
            bool ok = true;
            for (int i = 0; i < m && ok; ++i) {
                std::vector<int> col;
                for (int j = 0; j < n && ok; ++j) {
                    const auto& here = cell(i, j);
                    const auto& next = cell(i, (j + 1) % n);
                    int pick = -1;
                    for (int r = 0; r < nc && pick < 0; ++r) {
                        int c = opts.prefer_high ? nc - 1 - r : r;
                        if (here[c] && next[c]) {
                            pick = c;
                        }
                    }
                    ok = pick >= 0;
                    col.push_back(pick);
                }
                chart.s.push_back(std::move(col));
            }
            if (ok) {
                for (int i = 0; i < m; ++i) {
                    chart.u.push_back(ou + static_cast<double>(i) / m);
                }
                for (int j = 0; j < n; ++j) {
                    chart.t.push_back(ot + static_cast<double>(j) / n);
                }
                out = std::move(chart);
                return true;
            }
        }
    }
    return false;
}

/// Two adjacent cells may have to sit in a single arc overlap, so the
/// t-grid must resolve the thinnest overlap.
int auto_max_cells(const Cover& cover)
{
    int cells = 48;
    if (!cover.is_product()) {
        return cells;
    }
    for (const auto& arcs : cover.factor_arcs()) {
        for (std::size_t i = 0; i < arcs.size() && arcs.size() > 1; ++i) {
            const Arc& a = arcs[i];
            const Arc& b = arcs[(i + 1) % arcs.size()];
            double blo = b.lo + (i + 1 == arcs.size() ? 1.0 : 0.0);
            double overlap = a.hi - blo;
            if (overlap > 0.0) {
                cells = std::max(cells, static_cast<int>(std::ceil(2.5 / overlap)));
            }
        }
    }
    return cells;
}

} // namespace

CylinderChart find_cylinder_chart(const Cover& cover, const LoopOfLoops& path, const CylinderSearch& opts)
{
    if (path.dim() != cover.dim()) {
        throw StructuralError("loop of loops and cover live on different tori");
    }
    const int p = path.pieces();
    const int max_cells = opts.max_cells > 0 ? opts.max_cells : auto_max_cells(cover);
    auto round_m = [p](int m) { return std::max(p, (m + p - 1) / p * p); };
    const int m_lo = round_m(std::max(1, opts.min_m));
    const int m_hi = std::max(m_lo, std::min(max_cells, 96) / p * p);
    // The t-direction is the tight one (two adjacent cells share a chart):
    // find the smallest workable n on a fine u-grid, then shrink m.
    CylinderChart chart;
    for (int m_probe : {std::min(m_hi, std::max(m_lo, round_m(24))), m_hi}) {
        for (int n = std::max(1, opts.min_n); n <= max_cells; ++n) {
            if (!try_cylinder_grid(cover, path, opts, m_probe, n, chart)) {
                continue;
            }
            for (int m = m_lo; m < m_probe; m += p) {
                if (try_cylinder_grid(cover, path, opts, m, n, chart)) {
                    break;
                }
            }
            return chart;
        }
        if (m_probe == m_hi) {
            break;
        }
    }
    throw ChartError("no cylinder chart with at most " + std::to_string(max_cells) + " cells per direction");
}

SurfaceHolonomy surface_holonomy_composed(const GerbeData& g, const LoopOfLoops& path, const CylinderChart& chart,
                                          const Quadrature& q)
{
    const int m = chart.m();
    std::vector<double> phases(m, 0.0);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t ii) {
        int i = static_cast<int>(ii);
        double u0 = chart.u[i], u1 = chart.u_end(i);
        LoopSpaceChart here = chart.slice(i);
        double ph = tg_transport_phase(g, path, u0, u1, here, q);
        // Seam at u1: switch to the next segment's chart.
        ph += tg_transition_phase(g, path.loop_at(u1), here, chart.slice(i + 1), q);
        phases[i] = ph;
    });
    SurfaceHolonomy r;
    for (double ph : phases) {
        r.phase += ph;
    }
    r.value = unit_phase(r.phase);
    r.chart = chart;
    return r;
}

SurfaceHolonomy surface_holonomy_composed(const GerbeData& g, const LoopOfLoops& path, const Quadrature& q)
{
    return surface_holonomy_composed(g, path, find_cylinder_chart(g.cover, path), q);
}

SurfaceHolonomy surface_holonomy_direct(const GerbeData& g, const LoopOfLoops& path, const CylinderChart& chart,
                                        const Quadrature& q)
{
    const int m = chart.m(), n = chart.n();
    std::vector<double> phases(m, 0.0);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t ii) {
        int i = static_cast<int>(ii);
        double u0 = chart.u[i], u1 = chart.u_end(i);
        ClosedPath seam = path.loop_at(u1);
        double ph = 0.0;
        for (int j = 0; j < n; ++j) {
            double t0 = chart.t_at(j), t1 = chart.t_at(j + 1);
            int prev = chart.label(i, j - 1), cur = chart.label(i, j);
            int nprev = chart.label(i + 1, j - 1), ncur = chart.label(i + 1, j);
            ph += edge_integral(g, path, u0, u1, t0, prev, cur, q);
            ph += cell_integral(g, path, u0, u1, t0, t1, cur, q);
            Vec corner = seam.eval(t0);
            ph -= q_at(g, prev, nprev, ncur, corner) + q_at(g, prev, ncur, cur, corner);
            if (cur != ncur) {
                ph -= seam.integrate(pair_sampler(g, cur, ncur), t0, t1, q);
            }
        }
        phases[i] = ph;
    });
    SurfaceHolonomy r;
    for (double ph : phases) {
        r.phase += ph;
    }
    r.value = unit_phase(r.phase);
    r.chart = chart;
    return r;
}

SurfaceHolonomy surface_holonomy_direct(const GerbeData& g, const LoopOfLoops& path, const Quadrature& q)
{
    CylinderChart base = find_cylinder_chart(g.cover, path);
    CylinderSearch finer;
    finer.min_m = base.m() + path.pieces();
    finer.min_n = base.n() + 1;
    finer.prefer_high = true;
    return surface_holonomy_direct(g, path, find_cylinder_chart(g.cover, path, finer), q);
}

double transgress_form(const GluedForm& omega, const LoopMap& loop, const SmoothMap& x, const SmoothMap* y,
                       const Quadrature& q)
{
    int p = omega.degree();
    if (p != 2 && p != 3) {
        throw StructuralError("form transgression needs a 2- or 3-form");
    }
    if ((p == 3) != (y != nullptr)) {
        throw StructuralError("a 3-form needs two vector fields, a 2-form exactly one");
    }
    return integrate_1d(
        [&](double t) {
            Vec pt;
            Jacobian j;
            loop.map.eval_with_jacobian({t, 0, 0}, pt, j);
            std::array<Vec, 3> v{j[0], x.eval({t, 0, 0}), y ? y->eval({t, 0, 0}) : Vec{}};
            return omega.eval(omega.cover.to_target(pt), std::span<const Vec>(v.data(), p));
        },
        0.0, 1.0, q);
}

SmoothMap vector_field(int dim, const Vec& constant, const std::vector<FourierTerm>& terms)
{
    return affine_trig_map(1, dim, {}, constant, terms);
}

LoopOfLoops parallelogram(const LoopMap& loop, const SmoothMap& x, const SmoothMap& y, double eps)
{
    if (!loop.map.is_poly() || !x.is_poly() || !y.is_poly()) {
        throw StructuralError("parallelogram needs explicit trigonometric loop and fields");
    }
    int n = loop.dim();
    std::array<int, 1> axis{1};
    auto lift = [&](const SmoothMap& m, int i) { return m.components()[i].embedded(2, axis); };
    TrigPoly tau = TrigPoly::coordinate(2, 0);
    std::vector<std::vector<TrigPoly>> comps(4);
    for (int i = 0; i < n; ++i) {
        TrigPoly g = lift(loop.map, i), X = lift(x, i) * eps, Y = lift(y, i) * eps;
        comps[0].push_back(g + tau * X);
        comps[1].push_back(g + X + tau * Y);
        comps[2].push_back(g + X + Y - tau * X);
        comps[3].push_back(g + Y - tau * Y);
    }
    std::vector<SmoothMap> pieces;
    for (auto& c : comps) {
        pieces.push_back(SmoothMap::poly(2, n, std::move(c)));
    }
    return LoopOfLoops(std::move(pieces));
}

CurvatureCheck tg_curvature_check(const GerbeData& g, const LoopMap& loop, const SmoothMap& x, const SmoothMap& y,
                                  double eps, const Quadrature& q)
{
    if (!(eps > 0.0 && eps <= 0.05)) {
        throw StructuralError("epsilon must lie in (0, 0.05]");
    }
    auto hol = surface_holonomy_composed(g, parallelogram(loop, x, y, eps), q);
    CurvatureCheck c;
    double reduced = hol.phase - std::round(hol.phase);
    c.lhs = -kTwoPi * reduced / (eps * eps);
    c.rhs = -kTwoPi * transgress_form(gerbe_curvature(g), loop, x, &y, q);
    c.defect = std::abs(c.lhs - c.rhs);
    return c;
}

} // namespace loopgerbe
