#pragma once

#include <cstdint>
#include <random>

#include "loopgerbe/cochain.hpp"
#include "loopgerbe/smooth_map.hpp"

namespace loopgerbe {

/// Deterministic generator used by tests and the verification suite.
using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// Real trig polynomial with `terms` Fourier modes of frequency <= max_freq
/// per axis; optionally multiplied by random lifted monomials of degree <= 2.
TrigPoly random_trig_poly(int dim, Rng& rng, int terms = 3, int max_freq = 2, bool monomials = false,
                          double amp = 1.0);
/// Random p-form on a box; every component random.
LiftedForm random_form(int dim, int degree, const Box& box, Rng& rng, bool monomials = true);
CechCochain random_cochain(const Cover& cover, int p, int q, Rng& rng, bool u1 = false);

/// Loop with the given winding plus small random Fourier perturbation.
LoopMap random_loop(int dim, const IVec& winding, Rng& rng, double amp = 0.05, int max_freq = 3);
CylinderMap random_cylinder(int dim, const IVec& w_s, const IVec& w_t, Rng& rng, double amp = 0.03,
                            int max_freq = 2);
/// Degree-one circle diffeomorphism t + small sine terms.
SmoothMap random_reparametrization(Rng& rng, double amp = 0.1);

} // namespace loopgerbe
