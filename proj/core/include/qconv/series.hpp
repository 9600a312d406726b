#pragma once

#include <optional>
#include <vector>

#include "qconv/qcore.hpp"

// Power series support for the H^D / H^S function classes.

namespace qconv {

/// Finite coefficient list c_0..c_L with an estimated radius of convergence.
struct PowerSeries {
    std::vector<cplx> coefficients;
    double radius_estimate = std::numeric_limits<double>::infinity();

    PowerSeries() = default;
    explicit PowerSeries(std::vector<cplx> c) : coefficients(std::move(c)) {
        radius_estimate = estimate_radius();
    }
    PowerSeries(std::vector<cplx> c, double radius)
        : coefficients(std::move(c)), radius_estimate(radius) {}

    std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }

    /// 1/limsup |c_l|^{1/l} over the tail half of the list.
    double estimate_radius() const;

    cplx evaluate(cplx x) const;

    /// (d^e f)(x) by exact coefficient shift: sum_l c_{l+e} ([l+e]_q!/[l]_q!) x^l.
    cplx derivative_eval(unsigned e, cplx x, const QContext& ctx) const;

    /// coefficient list of d^e f
    PowerSeries derivative_series(unsigned e, const QContext& ctx) const;
};

// series algebra used to build the built-in function expansions
PowerSeries series_multiply(const PowerSeries& a, const PowerSeries& b, std::size_t max_len);
/// exp of a series with zero constant term, via e' = w' e
PowerSeries series_exp(const PowerSeries& w, std::size_t max_len);
/// substitute x^2: f(x) -> f(x^2) interleaving zeros
PowerSeries series_in_x_squared(const PowerSeries& f, std::size_t max_len);

}  // namespace qconv
