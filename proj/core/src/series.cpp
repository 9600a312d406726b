#include "qconv/series.hpp"

#include <algorithm>
#include <cmath>

namespace qconv {

double PowerSeries::estimate_radius() const {
    const std::size_t n = coefficients.size();
    if (n < 4) return std::numeric_limits<double>::infinity();
    double limsup = 0.0;
    for (std::size_t l = n / 2; l < n; ++l) {
        const double m = std::abs(coefficients[l]);
        if (m > 0.0) limsup = std::max(limsup, std::pow(m, 1.0 / static_cast<double>(l)));
    }
    if (limsup == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / limsup;
}

cplx PowerSeries::evaluate(cplx x) const {
    cplx s{0.0, 0.0};
    for (std::size_t l = coefficients.size(); l-- > 0;) s = s * x + coefficients[l];
    return s;
}

cplx PowerSeries::derivative_eval(unsigned e, cplx x, const QContext& ctx) const {
    if (e >= coefficients.size()) return {0.0, 0.0};
    // ratio [l+e]_q!/[l]_q! maintained incrementally: at l it is (q^{l+1};q)_e/(1-q)^e
    cplx s{0.0, 0.0};
    cplx xp{1.0, 0.0};
    for (std::size_t l = 0; l + e < coefficients.size(); ++l) {
        double ratio = 1.0;
        double qj = std::pow(ctx.q, l + 1);
        for (unsigned i = 0; i < e; ++i) {
            ratio *= (1.0 - qj) / (1.0 - ctx.q);
            qj *= ctx.q;
        }
        s += coefficients[l + e] * ratio * xp;
        xp *= x;
    }
    return s;
}

PowerSeries PowerSeries::derivative_series(unsigned e, const QContext& ctx) const {
    std::vector<cplx> out;
    if (e < coefficients.size()) {
        out.reserve(coefficients.size() - e);
        for (std::size_t l = 0; l + e < coefficients.size(); ++l) {
            double ratio = 1.0;
            double qj = std::pow(ctx.q, l + 1);
            for (unsigned i = 0; i < e; ++i) {
                ratio *= (1.0 - qj) / (1.0 - ctx.q);
                qj *= ctx.q;
            }
            out.push_back(coefficients[l + e] * ratio);
        }
    }
    PowerSeries ps(std::move(out));
    ps.radius_estimate = radius_estimate;
    return ps;
}

PowerSeries series_multiply(const PowerSeries& a, const PowerSeries& b, std::size_t max_len) {
    const std::size_t n = std::min(max_len, a.coefficients.size() + b.coefficients.size());
    std::vector<cplx> c(n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
        if (i >= n) break;
        for (std::size_t j = 0; j < b.coefficients.size() && i + j < n; ++j)
            c[i + j] += a.coefficients[i] * b.coefficients[j];
    }
    PowerSeries ps(std::move(c));
    ps.radius_estimate = std::min(a.radius_estimate, b.radius_estimate);
    return ps;
}

PowerSeries series_exp(const PowerSeries& w, std::size_t max_len) {
    if (!w.coefficients.empty() && std::abs(w.coefficients[0]) != 0.0)
        throw DomainError("series_exp: constant term must vanish");
    std::vector<cplx> e(max_len, cplx{0.0, 0.0});
    e[0] = 1.0;
    // n e_n = sum_{k=1}^{n} k w_k e_{n-k}
    for (std::size_t n = 1; n < max_len; ++n) {
        cplx s{0.0, 0.0};
        for (std::size_t k = 1; k <= n && k < w.coefficients.size(); ++k)
            s += static_cast<double>(k) * w.coefficients[k] * e[n - k];
        e[n] = s / static_cast<double>(n);
    }
    PowerSeries ps(std::move(e));
    ps.radius_estimate = w.radius_estimate;
    return ps;
}

PowerSeries series_in_x_squared(const PowerSeries& f, std::size_t max_len) {
    std::vector<cplx> c(std::min(max_len, 2 * f.coefficients.size()), cplx{0.0, 0.0});
    for (std::size_t l = 0; l < f.coefficients.size() && 2 * l < c.size(); ++l)
        c[2 * l] = f.coefficients[l];
    PowerSeries ps(std::move(c));
    if (std::isfinite(f.radius_estimate)) ps.radius_estimate = std::sqrt(f.radius_estimate);
    return ps;
}

}  // namespace qconv
