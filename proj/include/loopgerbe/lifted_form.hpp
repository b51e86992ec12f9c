#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "loopgerbe/torus.hpp"

namespace loopgerbe {

using Complex = std::complex<double>;
using IVec = std::array<int, kMaxDim>;

/// Exponent vector of a lifted monomial times a Fourier frequency.
struct Monomial {
    std::array<std::uint8_t, kMaxDim> pow{};
    IVec freq{};

    auto operator<=>(const Monomial&) const = default;
};

/// Finite sum of c * x^pow * exp(2 pi i freq.x). Real-valued functions are
/// stored with conjugate-symmetric coefficients, so products stay exact.
class TrigPoly {
public:
    TrigPoly() = default;
    explicit TrigPoly(int dim) : dim_(dim) {}

    static TrigPoly constant(int dim, double c);
    static TrigPoly coordinate(int dim, int axis);
    static TrigPoly cosine(int dim, const IVec& freq, double amp = 1.0);
    static TrigPoly sine(int dim, const IVec& freq, double amp = 1.0);
    static TrigPoly monomial(int dim, const Monomial& m, Complex c);

    int dim() const { return dim_; }
    const std::map<Monomial, Complex>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add_term(const Monomial& m, Complex c);

    TrigPoly operator+(const TrigPoly& o) const;
    TrigPoly operator-(const TrigPoly& o) const;
    TrigPoly operator*(const TrigPoly& o) const;
    TrigPoly operator*(double s) const;
    TrigPoly operator-() const { return *this * -1.0; }
    TrigPoly& operator+=(const TrigPoly& o);

    TrigPoly derivative(int axis) const;
    double eval(const Vec& x) const;
    /// Substitute x -> x + k (k integer); trig factors are unchanged.
    TrigPoly shifted(const IVec& k) const;
    /// Re-express in a higher dimension: old coordinate i becomes axes[i].
    TrigPoly embedded(int new_dim, std::span<const int> axes) const;

    bool has_monomials() const;
    Complex coefficient(const Monomial& m) const;
    double max_abs_coeff() const;
    TrigPoly pruned(double tol) const;

private:
    int dim_ = 0;
    std::map<Monomial, Complex> terms_;
};

/// A differential p-form on a chart of T^n with TrigPoly coefficients in the
/// coordinates lifted into `box`. Component keys are bitmasks of dx indices.
class LiftedForm {
public:
    LiftedForm() = default;
    LiftedForm(int dim, int degree, Box box);

    static LiftedForm zero(int dim, int degree, const Box& box);
    static LiftedForm function(const TrigPoly& f, const Box& box);
    static LiftedForm differential(int dim, int axis, const Box& box);
    /// Global form from a TrigPoly coefficient and a component mask.
    static LiftedForm from_component(int degree, std::uint8_t mask, const TrigPoly& c, const Box& box);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    const Box& box() const { return box_; }
    const std::map<std::uint8_t, TrigPoly>& components() const { return comps_; }
    TrigPoly component(std::uint8_t mask) const;

    void add_component(std::uint8_t mask, const TrigPoly& c);

    LiftedForm operator+(const LiftedForm& o) const;
    LiftedForm operator-(const LiftedForm& o) const;
    LiftedForm operator*(double s) const;
    LiftedForm operator-() const { return *this * -1.0; }
    /// Multiply by a scalar function.
    LiftedForm times(const TrigPoly& f) const;

    LiftedForm wedge(const LiftedForm& o) const;
    LiftedForm d() const;

    /// Evaluate at any lift of a point; throws DomainError outside the box.
    double eval(const Vec& x, std::span<const Vec> vectors) const;
    double eval(const TorusPoint& p, std::span<const Vec> vectors) const;
    /// Evaluate at a point already lifted into the box.
    double eval_lifted(const Vec& x, std::span<const Vec> vectors) const;

    /// Same form expressed on a sub-box (possibly an integer translate).
    LiftedForm reboxed(const Box& inner) const;
    /// Pull back along the coordinate projection onto `axes` of `target`.
    LiftedForm embedded_into(std::span<const int> axes, const Box& target) const;

    bool has_monomials() const;
    double max_abs_coeff() const;
    bool is_zero(double tol = 0.0) const { return max_abs_coeff() <= tol; }
    LiftedForm pruned(double tol) const;
    LiftedForm with_box(const Box& b) const;

private:
    int dim_ = 0;
    int degree_ = 0;
    Box box_;
    std::map<std::uint8_t, TrigPoly> comps_;
};

int popcount(std::uint8_t m);
/// Sign of the permutation sorting the concatenation of two disjoint masks.
int wedge_sign(std::uint8_t a, std::uint8_t b);
/// Determinant of the p x p minor of `vectors` picked by mask.
double mask_minor(std::uint8_t mask, std::span<const Vec> vectors);

} // namespace loopgerbe
