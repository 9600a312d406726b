#include "qconv/special.hpp"

#include <cmath>
#include <memory>

#include "precise.hpp"

namespace qconv {

namespace {

constexpr double k_pole_snap = 1e-12;

QContext squared_base(const QContext& ctx) {
    return QContext(ctx.q * ctx.q, ctx.tail_rel_tol, ctx.max_terms, ctx.decay_window,
                    ctx.max_lattice_index);
}

cplx pochhammer_inf_checked(cplx a, const QContext& ctx, const char* what) {
    const cplx v = q_pochhammer(a, k_infinity, ctx);
    if (v == cplx{0.0, 0.0}) throw PoleError(what);
    return v;
}

// e_{q^2}(-x^2) with pole detection at x = +- i q^{-k}
cplx gauss_small_eval(cplx x, const QContext& ctx) {
    return 1.0 / pochhammer_inf_checked(-x * x, squared_base(ctx),
                                        "e_{q^2}(-x^2): pole at +-i q^{-k}");
}

cplx gauss_big_eval(cplx x, const QContext& ctx) {
    return q_pochhammer(x * x, k_infinity, squared_base(ctx));
}

double gauss_cal_lost_bits(double jx, const QContext& ctx) {
    // worst case sits at the theta-style dips: lost digits track
    // log(1/q) (2 jx + 1)^2; see the [KooSw]-type bound
    const double lnq1 = -std::log(ctx.q);
    const double tw = 2.0 * jx + 1.0;
    return 1.08 * lnq1 * tw * tw / std::log(2.0) + 64.0;
}

cplx gauss_cal_eval(cplx x, const QContext& ctx) {
    const double ax = std::abs(x);
    if (ax <= 1.0) {
        cplx s{0.0, 0.0};
        cplx t{1.0, 0.0};
        const cplx x2 = x * x;
        double qk = 1.0, q2k2 = ctx.q * ctx.q;
        for (int k = 0; k < ctx.max_terms; ++k) {
            s += t;
            t *= -qk * x2 / (1.0 - q2k2);
            qk *= ctx.q;
            q2k2 *= ctx.q * ctx.q;
            if (std::abs(t) < ctx.tail_rel_tol * std::max(std::abs(s), 1e-300) &&
                k >= ctx.decay_window)
                return s + t;
        }
        throw CapExceeded("gauss_cal: series cap");
    }
    if (x.imag() != 0.0)
        throw DomainError("gauss_cal: |x| > 1 is supported on the real axis only");
    // value is exponentially smaller than the largest series term; evaluate
    // the exact dyadic x at a precision matched to the analytic term profile
    const double jx = std::log(ax) / (-std::log(ctx.q));
    return {detail::alternating_gauss_cal_dyadic(ctx.q, x.real(),
                                                 gauss_cal_lost_bits(jx, ctx)),
            0.0};
}

// lattice-indexed evaluation: the value at +-q^k gamma sits in a theta dip
// whose depth is hypersensitive to the point, so q^k is formed inside the
// working precision rather than rounded through a double
cplx gauss_cal_eval_at_index(int k, double gamma, const QContext& ctx) {
    const double ax = std::pow(ctx.q, k) * gamma;
    if (ax <= 1.0) return gauss_cal_eval(cplx{ax, 0.0}, ctx);
    const double jx = -k + std::log(gamma) / (-std::log(ctx.q));
    return {detail::alternating_gauss_cal_lattice(ctx.q, k, gamma,
                                                  gauss_cal_lost_bits(jx, ctx)),
            0.0};
}

// 0phi1(-; q^{1+2m}; q^2, -q^{1+2m} x^2) for real arguments, carried in long
// double with an explicit power-of-two offset: the pre-peak terms exceed the
// double range at deep lattice points while the cancellation is mild
std::pair<long double, long> gm_series_factor_scaled(long double x2, int m, const QContext& ctx) {
    long double s = 0.0L, t = 1.0L;
    long scale = 0;
    const long double q = ctx.q;
    long double q4r = 1.0L;
    const long double qm1 = std::pow(q, static_cast<long double>(1 + 2 * m));
    for (int r = 0; r < ctx.max_terms; ++r) {
        s += t;
        t *= -q4r * qm1 * x2 /
             ((1.0L - std::pow(q, static_cast<long double>(1 + 2 * m + 2 * r))) *
              (1.0L - std::pow(q, static_cast<long double>(2 * r + 2))));
        q4r *= q * q * q * q;
        const long double mag = std::max(fabsl(s), fabsl(t));
        if (mag > 1e2400L) {
            s = ldexpl(s, -8192);
            t = ldexpl(t, -8192);
            scale += 8192;
        }
        if (fabsl(t) < ctx.tail_rel_tol * std::max(fabsl(s), 1e-4000L) &&
            r >= ctx.decay_window)
            return {s + t, scale};
    }
    throw CapExceeded("g_m: series cap");
}

cplx gm_series_factor(cplx x, int m, const QContext& ctx) {
    if (x.imag() == 0.0) {
        const auto [s, scale] = gm_series_factor_scaled(
            static_cast<long double>(x.real()) * x.real(), m, ctx);
        return {static_cast<double>(ldexpl(s, static_cast<int>(scale))), 0.0};
    }
    cplx s{0.0, 0.0};
    cplx t{1.0, 0.0};
    const cplx x2 = x * x;
    const double q = ctx.q;
    double q4r = 1.0;
    for (int r = 0; r < ctx.max_terms; ++r) {
        s += t;
        t *= -q4r * std::pow(q, 1 + 2 * m) * x2 /
             ((1.0 - std::pow(q, 1 + 2 * m + 2 * r)) * (1.0 - std::pow(q, 2 * r + 2)));
        q4r *= q * q * q * q;
        if (std::abs(t) < ctx.tail_rel_tol * std::max(std::abs(s), 1e-300) &&
            r >= ctx.decay_window)
            return s + t;
    }
    throw CapExceeded("g_m: series cap");
}

// g_m at a lattice index, exponents combined in log2 space so the huge factor
// against the tiny Gaussian never meets an infinity
cplx gm_eval_at_index(int k, double gamma, int m, const QContext& ctx) {
    const double x = std::pow(ctx.q, k) * gamma;
    if (x <= 1.0)
        return gauss_small_eval(cplx{x, 0.0}, ctx) * gm_series_factor(cplx{x, 0.0}, m, ctx);
    const QContext c2 = squared_base(ctx);
    const double log_gauss = -log_q_pochhammer_inf(-x * x, c2);  // log e_{q^2}(-x^2)
    const auto [fac, scale] = gm_series_factor_scaled(
        static_cast<long double>(x) * x, m, ctx);
    if (fac == 0.0L) return {0.0, 0.0};
    const long double lnv = log_gauss + logl(fabsl(fac)) + scale * 0.693147180559945309L;
    const double out = (fac < 0.0L ? -1.0 : 1.0) * static_cast<double>(expl(lnv));
    return {out, 0.0};
}

// e_{q^2}(-q^{2k}) for any integer k, stable on both halves of the lattice
double gauss_small_at_index(int k, const QContext& ctx) {
    const QContext c2 = squared_base(ctx);
    if (k >= 0)
        return 1.0 / q_pochhammer(-std::pow(ctx.q, 2 * k), k_infinity, c2).real();
    const int n = -k;
    // e_{q^2}(-q^{-2n}) = q^{n(n+1)} / ((-q^2;q^2)_n (-1;q^2)_inf)
    const double num = std::exp(static_cast<double>(n) * (n + 1) * std::log(ctx.q));
    const double den = q_pochhammer(-ctx.q * ctx.q, static_cast<unsigned>(n), c2).real() *
                       q_pochhammer(-1.0, k_infinity, c2).real();
    return num / den;
}

cplx alt_example_eval(cplx x, const QContext& ctx) {
    if (x.imag() != 0.0) throw DomainError("alt example: defined on L(1) only");
    const double ax = std::abs(x.real());
    if (!(ax > 0.0)) throw DomainError("alt example: x = 0 is not on L(1)");
    const double kd = std::log(ax) / std::log(ctx.q);
    const int k = static_cast<int>(std::lround(kd));
    if (std::abs(ax - std::pow(ctx.q, k)) > 1e-9 * std::pow(ctx.q, k))
        throw DomainError("alt example: point is not on L(1)");
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(ctx.q, k) * gauss_small_at_index(k, ctx);
}

cplx strip_eval(cplx x, double c) {
    const cplx z = x * x + 1.0;
    if (std::abs(z) < k_pole_snap)
        throw PoleError("strip example: log singularity at x = +-i");
    const cplx L = std::log(z);  // principal branch
    return std::exp(-c * L * L);
}

}  // namespace

cplx eval_special(const SpecialFunction& sf, cplx x, const QContext& ctx) {
    switch (sf.kind) {
        case SpecialKind::kEqSmall:
            return 1.0 / pochhammer_inf_checked(x, ctx, "e_q: pole at q^{-k}");
        case SpecialKind::kEqBig:
            return q_pochhammer(-x, k_infinity, ctx);
        case SpecialKind::kGaussSmall:
            return gauss_small_eval(x, ctx);
        case SpecialKind::kGaussBig:
            return gauss_big_eval(x, ctx);
        case SpecialKind::kGaussCal:
            return gauss_cal_eval(x, ctx);
        case SpecialKind::kGm:
            return gauss_small_eval(x, ctx) * gm_series_factor(x, sf.m, ctx);
        case SpecialKind::kAltExample:
            return alt_example_eval(x, ctx);
        case SpecialKind::kStripExample:
            return strip_eval(x, sf.c);
    }
    throw DomainError("eval_special: unknown kind");
}

namespace {

PowerSeries gauss_small_series(const QContext& ctx, std::size_t len) {
    std::vector<cplx> c(len, cplx{0.0, 0.0});
    double denom = 1.0;
    double sign = 1.0;
    for (std::size_t k = 0; 2 * k < len; ++k) {
        c[2 * k] = sign / denom;
        sign = -sign;
        denom *= (1.0 - std::pow(ctx.q, 2.0 * (k + 1)));
    }
    return PowerSeries(std::move(c), 1.0);
}

PowerSeries gauss_big_series(const QContext& ctx, std::size_t len) {
    std::vector<cplx> c(len, cplx{0.0, 0.0});
    double denom = 1.0;
    double sign = 1.0;
    for (std::size_t k = 0; 2 * k < len; ++k) {
        c[2 * k] = sign * std::pow(ctx.q, static_cast<double>(k) * (k - 1.0)) / denom;
        sign = -sign;
        denom *= (1.0 - std::pow(ctx.q, 2.0 * (k + 1)));
    }
    return PowerSeries(std::move(c), std::numeric_limits<double>::infinity());
}

PowerSeries gauss_cal_series(const QContext& ctx, std::size_t len) {
    std::vector<cplx> c(len, cplx{0.0, 0.0});
    double denom = 1.0;
    double sign = 1.0;
    for (std::size_t k = 0; 2 * k < len; ++k) {
        c[2 * k] = sign * std::pow(ctx.q, static_cast<double>(k) * (k - 1.0) / 2.0) / denom;
        sign = -sign;
        denom *= (1.0 - std::pow(ctx.q, 2.0 * (k + 1)));
    }
    return PowerSeries(std::move(c), std::numeric_limits<double>::infinity());
}

PowerSeries gm_factor_series(int m, const QContext& ctx, std::size_t len) {
    std::vector<cplx> c(len, cplx{0.0, 0.0});
    cplx term{1.0, 0.0};
    const double q = ctx.q;
    for (std::size_t r = 0; 2 * r < len; ++r) {
        c[2 * r] = term;
        term *= -std::pow(q, 4.0 * r) * std::pow(q, 1 + 2 * m) /
                ((1.0 - std::pow(q, 1.0 + 2 * m + 2.0 * r)) * (1.0 - std::pow(q, 2.0 * r + 2.0)));
    }
    return PowerSeries(std::move(c), std::numeric_limits<double>::infinity());
}

PowerSeries strip_series(double cpar, std::size_t len) {
    // log(1+u) in u
    std::vector<cplx> lg(len, cplx{0.0, 0.0});
    for (std::size_t j = 1; j < len; ++j)
        lg[j] = ((j % 2 == 1) ? 1.0 : -1.0) / static_cast<double>(j);
    PowerSeries log1p_u(std::move(lg), 1.0);
    PowerSeries log_x2 = series_in_x_squared(log1p_u, len);
    PowerSeries w = series_multiply(log_x2, log_x2, len);
    for (auto& cl : w.coefficients) cl *= -cpar;
    PowerSeries out = series_exp(w, len);
    out.radius_estimate = 1.0;
    return out;
}

PowerSeries eq_small_series(const QContext& ctx, std::size_t len) {
    std::vector<cplx> c(len);
    double denom = 1.0;
    for (std::size_t k = 0; k < len; ++k) {
        c[k] = 1.0 / denom;
        denom *= (1.0 - std::pow(ctx.q, static_cast<double>(k + 1)));
    }
    return PowerSeries(std::move(c), 1.0);
}

PowerSeries eq_big_series(const QContext& ctx, std::size_t len) {
    std::vector<cplx> c(len);
    double denom = 1.0;
    for (std::size_t k = 0; k < len; ++k) {
        c[k] = std::pow(ctx.q, static_cast<double>(k) * (k - 1.0) / 2.0) / denom;
        denom *= (1.0 - std::pow(ctx.q, static_cast<double>(k + 1)));
    }
    return PowerSeries(std::move(c), std::numeric_limits<double>::infinity());
}

}  // namespace

LatticeFunction make_lattice_function(const SpecialFunction& sf, double gamma, const QContext& ctx,
                                      std::size_t series_len) {
    const QContext c = ctx;
    auto ev = [sf, c](cplx x) { return eval_special(sf, x, c); };
    switch (sf.kind) {
        case SpecialKind::kEqSmall: {
            auto lf = LatticeFunction::rule(ev, gamma, Analyticity::kDisk, 1.0, Parity::kNone);
            return lf.with_series(eq_small_series(ctx, series_len));
        }
        case SpecialKind::kEqBig: {
            auto lf = LatticeFunction::rule(ev, gamma, Analyticity::kEntire,
                                            std::numeric_limits<double>::infinity(), Parity::kNone);
            return lf.with_series(eq_big_series(ctx, series_len));
        }
        case SpecialKind::kGaussSmall: {
            auto lf = LatticeFunction::rule(ev, gamma, Analyticity::kStrip, 1.0, Parity::kEven);
            lf.with_derivative_rule([c](cplx x, unsigned e) {
                return rodrigues_gaussian_derivative(e, x, c);
            });
            return lf.with_series(gauss_small_series(ctx, series_len));
        }
        case SpecialKind::kGaussBig: {
            auto lf = LatticeFunction::rule(ev, gamma, Analyticity::kEntire,
                                            std::numeric_limits<double>::infinity(), Parity::kEven);
            return lf.with_series(gauss_big_series(ctx, series_len));
        }
        case SpecialKind::kGaussCal: {
            auto lf = LatticeFunction::rule(ev, gamma, Analyticity::kEntire,
                                            std::numeric_limits<double>::infinity(), Parity::kEven);
            lf.with_lattice_rule(
                [gamma, c](int, int k) { return gauss_cal_eval_at_index(k, gamma, c); });
            return lf.with_series(gauss_cal_series(ctx, series_len));
        }
        case SpecialKind::kGm: {
            auto lf = LatticeFunction::rule(ev, gamma, Analyticity::kStrip, 1.0, Parity::kEven);
            const int m = sf.m;
            lf.with_lattice_rule(
                [gamma, m, c](int, int k) { return gm_eval_at_index(k, gamma, m, c); });
            auto factor = std::make_shared<PowerSeries>(
                gm_factor_series(sf.m, ctx, std::max<std::size_t>(series_len, 192)));
            lf.with_derivative_rule([c, factor](cplx x, unsigned e) {
                // d^e(uv)(x) = sum_j qbinom(e,j) (d^j u)(q^{e-j} x) (d^{e-j} v)(x)
                cplx s{0.0, 0.0};
                for (unsigned j = 0; j <= e; ++j) {
                    const cplx du = rodrigues_gaussian_derivative(
                        j, x * std::pow(c.q, static_cast<double>(e - j)), c);
                    const cplx dv = factor->derivative_eval(e - j, x, c);
                    s += q_binomial(e, j, c) * du * dv;
                }
                return s;
            });
            return lf.with_series(series_multiply(gauss_small_series(ctx, series_len),
                                                  gm_factor_series(sf.m, ctx, series_len),
                                                  series_len));
        }
        case SpecialKind::kAltExample: {
            if (std::abs(gamma - 1.0) > 1e-12)
                throw DomainError("alt example: defined on L(1) only");
            auto lf = LatticeFunction::rule(ev, 1.0, Analyticity::kLatticeOnly,
                                            std::numeric_limits<double>::infinity(), Parity::kEven);
            lf.with_lattice_rule([c](int, int k) {
                const double sign = (k % 2 == 0) ? 1.0 : -1.0;
                return cplx{sign * std::pow(c.q, k) * gauss_small_at_index(k, c), 0.0};
            });
            auto dcache = std::make_shared<detail::AltDerivativeCache>(c.q);
            lf.with_lattice_derivative_rule([dcache](int eps, int k, unsigned e) {
                return cplx{dcache->derivative(eps, k, e), 0.0};
            });
            return lf;
        }
        case SpecialKind::kStripExample: {
            auto lf = LatticeFunction::rule(ev, gamma, Analyticity::kStrip, 1.0, Parity::kEven);
            return lf.with_series(strip_series(sf.c, std::max<std::size_t>(series_len, 512)));
        }
    }
    throw DomainError("make_lattice_function: unknown kind");
}

cplx hermite_II_scaled(unsigned k, cplx x, const QContext& ctx) {
    // (q;q)_k sum_l (-1)^l q^{(m^2-m)/2} x^m / ((q^2;q^2)_l (q;q)_m), m = k-2l
    const QContext c2 = squared_base(ctx);
    cplx s{0.0, 0.0};
    cplx comp{0.0, 0.0};  // Neumaier compensation
    double sign = 1.0;
    for (unsigned l = 0; 2 * l <= k; ++l) {
        const unsigned m = k - 2 * l;
        const double expn = 0.5 * (static_cast<double>(m) * m - m);
        const cplx t = sign * std::exp(expn * std::log(ctx.q)) * std::pow(x, m) /
                       (q_pochhammer(ctx.q * ctx.q, l, c2).real() *
                        q_pochhammer(ctx.q, m, ctx).real());
        const cplx tsum = s + t;
        if (std::abs(s) >= std::abs(t))
            comp += (s - tsum) + t;
        else
            comp += (t - tsum) + s;
        s = tsum;
        sign = -sign;
    }
    return q_pochhammer(ctx.q, k, ctx).real() * (s + comp);
}

cplx hermite_II(unsigned k, cplx x, const QContext& ctx) {
    const double expn = 0.5 * (static_cast<double>(k) * k - k) * std::log(1.0 / ctx.q);
    if (expn > 700.0)
        throw CapExceeded("hermite_II: q^{-k(k-1)/2} prefactor exceeds double range; "
                          "use hermite_II_scaled");
    return std::exp(expn) * hermite_II_scaled(k, x, ctx);
}

cplx rodrigues_gaussian_derivative(unsigned k, cplx x, const QContext& ctx) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign / std::pow(1.0 - ctx.q, static_cast<double>(k)) * hermite_II_scaled(k, x, ctx) *
           gauss_small_eval(x, ctx);
}

cplx kernel_K(cplx t, cplx x, const QContext& ctx) {
    // q^{k^2} t^k h~_k(x)/(q;q)_k = q^{(k^2+k)/2} t^k hermite_II_scaled(k,x)/(q;q)_k
    cplx s{0.0, 0.0};
    int shrink = 0;
    double qqk = 1.0;  // (q;q)_k
    for (int k = 0; k < ctx.max_terms; ++k) {
        const double expn = 0.5 * (static_cast<double>(k) * k + k);
        const cplx term = std::exp(expn * std::log(ctx.q)) * std::pow(t, k) *
                          hermite_II_scaled(static_cast<unsigned>(k), x, ctx) / qqk;
        s += term;
        qqk *= (1.0 - std::pow(ctx.q, k + 1.0));
        if (std::abs(term) < ctx.tail_rel_tol * std::max(std::abs(s), 1e-300) &&
            k >= ctx.decay_window) {
            if (++shrink >= ctx.decay_window) return s;
        } else {
            shrink = 0;
        }
    }
    throw CapExceeded("kernel_K: series cap");
}

cplx gm_moment_closed_form(int m, unsigned e, double gamma, const QContext& ctx) {
    if (m < 0) throw DomainError("gm_moment_closed_form: m >= 0 required");
    if (e % 2 != 0) return {0.0, 0.0};
    const unsigned k = e / 2;
    if (k + 1 > static_cast<unsigned>(m)) return {0.0, 0.0};
    const QContext c2 = squared_base(ctx);
    const double q = ctx.q;
    const double cg = constant_cq(gamma, ctx);
    const double pref = cg * q_pochhammer(q * q, k_infinity, c2).real() /
                        q_pochhammer(std::pow(q, 2 * m + 1), k_infinity, c2).real();
    const double num = std::pow(q, static_cast<double>(k) * k + k) *
                       q_pochhammer(q, k, c2).real();
    const double den = q_pochhammer(q * q, static_cast<unsigned>(m) - k - 1, c2).real();
    return pref * num / den;
}

}  // namespace qconv
