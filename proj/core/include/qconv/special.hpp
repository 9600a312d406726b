#pragma once

#include "qconv/lattice.hpp"
#include "qconv/qcore.hpp"
#include "qconv/series.hpp"

// The built-in function family: q-exponentials, the three q-Gaussians,
// discrete q-Hermite II polynomials with the Rodrigues closed form, the
// kernel K(t,x), the g_m family, and the two counterexample functions.

namespace qconv {

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class SpecialKind {
    kEqSmall,    // e_q
    kEqBig,      // E_q
    kGaussSmall, // e_{q^2}(-X^2)
    kGaussBig,   // E_{q^2}(-X^2)
    kGaussCal,   // script-E_{q^2}(-X^2)
    kGm,         // g_m family
    kAltExample, // alternating counterexample on L(1)
    kStripExample // exp(-c (log(z^2+1))^2)
};

struct SpecialFunction {
    SpecialKind kind;
    int m = 0;       // kGm parameter
    double c = 1.0;  // kStripExample parameter

    static SpecialFunction eq_small() { return {SpecialKind::kEqSmall}; }
    static SpecialFunction eq_big() { return {SpecialKind::kEqBig}; }
    static SpecialFunction gauss_small() { return {SpecialKind::kGaussSmall}; }
    static SpecialFunction gauss_big() { return {SpecialKind::kGaussBig}; }
    static SpecialFunction gauss_cal() { return {SpecialKind::kGaussCal}; }
    static SpecialFunction gm(int m) { return {SpecialKind::kGm, m}; }
    static SpecialFunction alt_example() { return {SpecialKind::kAltExample}; }
    static SpecialFunction strip_example(double c) { return {SpecialKind::kStripExample, 0, c}; }
};

/// Evaluate; PoleError at poles of e_q-type kinds, DomainError for the
/// alternating example off L(1).
cplx eval_special(const SpecialFunction& sf, cplx x, const QContext& ctx);

/// Wrap as a LatticeFunction on L(gamma), with analyticity tag, parity and
/// (where available) an attached power series of length `series_len`.
LatticeFunction make_lattice_function(const SpecialFunction& sf, double gamma, const QContext& ctx,
                                      std::size_t series_len = 96);

/// discrete q-Hermite II polynomial h~_k(x;q)
cplx hermite_II(unsigned k, cplx x, const QContext& ctx);

/// q^{(k^2-k)/2} h~_k(x;q) — all-nonnegative-exponent form, stable for all k
cplx hermite_II_scaled(unsigned k, cplx x, const QContext& ctx);

/// closed form of (d^k e_{q^2}(-X^2))(x)
cplx rodrigues_gaussian_derivative(unsigned k, cplx x, const QContext& ctx);

/// K(t,x) = sum_k q^{k^2} t^k h~_k(x;q) / (q;q)_k ; K(t,i) = E_q(iqt)
cplx kernel_K(cplx t, cplx x, const QContext& ctx);

/// mu_{e,gamma}(g_m) closed form; zero unless e=2k with k <= m-1
cplx gm_moment_closed_form(int m, unsigned e, double gamma, const QContext& ctx);

}  // namespace qconv
