#include "qconv/qcore.hpp"

#include <cmath>

namespace qconv {

namespace {
// Relative snap radius for zero factors of infinite products. Lattice
// arguments land on zeros of (a;q)_inf only up to rounding in pow().
constexpr double k_zero_snap = 1e-12;
}  // namespace

cplx q_pochhammer(cplx a, unsigned k, const QContext& ctx) {
    if (k != k_infinity) {
        cplx r{1.0, 0.0};
        cplx aq = a;
        for (unsigned j = 0; j < k; ++j) {
            r *= (1.0 - aq);
            aq *= ctx.q;
        }
        return r;
    }
    cplx r{1.0, 0.0};
    cplx aq = a;
    for (int j = 0; j < ctx.max_terms; ++j) {
        const cplx f = 1.0 - aq;
        if (std::abs(f) < k_zero_snap * (1.0 + std::abs(aq))) return {0.0, 0.0};
        r *= f;
        aq *= ctx.q;
        if (std::abs(aq) < ctx.tail_rel_tol && j + 1 >= ctx.decay_window) return r;
    }
    throw CapExceeded("q_pochhammer: max_terms factors before truncation criterion");
}

double log_q_pochhammer_inf(double a, const QContext& ctx) {
    if (a >= 1.0) throw DomainError("log_q_pochhammer_inf: need a < 1");
    double s = 0.0;
    double aq = a;
    for (int j = 0; j < ctx.max_terms; ++j) {
        s += std::log1p(-aq);
        aq *= ctx.q;
        if (std::fabs(aq) < ctx.tail_rel_tol && j + 1 >= ctx.decay_window) return s;
    }
    throw CapExceeded("log_q_pochhammer_inf: max_terms factors");
}

double q_number(int k, const QContext& ctx) {
    return (1.0 - std::pow(ctx.q, k)) / (1.0 - ctx.q);
}

double q_factorial(unsigned k, const QContext& ctx) {
    double r = 1.0;
    double qj = ctx.q;
    for (unsigned j = 1; j <= k; ++j) {
        r *= (1.0 - qj) / (1.0 - ctx.q);
        qj *= ctx.q;
    }
    return r;
}

double log_q_factorial(unsigned k, const QContext& ctx) {
    double s = 0.0;
    double qj = ctx.q;
    for (unsigned j = 1; j <= k; ++j) {
        s += std::log1p(-qj) - std::log1p(-ctx.q);
        qj *= ctx.q;
    }
    return s;
}

namespace {
double qq_finite(unsigned k, const QContext& ctx) {
    double r = 1.0;
    double qj = ctx.q;
    for (unsigned j = 0; j < k; ++j) {
        r *= (1.0 - qj);
        qj *= ctx.q;
    }
    return r;
}
}  // namespace

double q_binomial(unsigned n, unsigned k, const QContext& ctx) {
    if (k > n) throw DomainError("q_binomial: need k <= n");
    // same computation path for k and n-k: use the smaller one for the
    // trailing ratio so qbinom(n,k) == qbinom(n,n-k) bit for bit
    const unsigned m = std::min(k, n - k);
    // (q^{n-m+1};q)_m / (q;q)_m
    double num = 1.0;
    double qj = std::pow(ctx.q, n - m + 1);
    for (unsigned j = 0; j < m; ++j) {
        num *= (1.0 - qj);
        qj *= ctx.q;
    }
    return num / qq_finite(m, ctx);
}

double constant_bq(const QContext& ctx) {
    const double q = ctx.q;
    const cplx v = q_pochhammer(q, k_infinity, ctx) * q_pochhammer(-q, k_infinity, ctx) *
                   q_pochhammer(-1.0, k_infinity, ctx);
    return (1.0 - q) * v.real();
}

double constant_cq(double gamma, const QContext& ctx) {
    if (!(gamma > 0.0)) throw DomainError("constant_cq: gamma must be positive");
    const double q = ctx.q;
    const QContext ctx2(q * q, ctx.tail_rel_tol, ctx.max_terms, ctx.decay_window,
                        ctx.max_lattice_index);
    const double g2 = gamma * gamma;
    const double num = 2.0 * (1.0 - q) * gamma *
                       (q_pochhammer(q * q, k_infinity, ctx2) *
                        q_pochhammer(-q * g2, k_infinity, ctx2) *
                        q_pochhammer(-q / g2, k_infinity, ctx2))
                           .real();
    const double den = (q_pochhammer(-g2, k_infinity, ctx2) *
                        q_pochhammer(-q * q / g2, k_infinity, ctx2) *
                        q_pochhammer(q, k_infinity, ctx2))
                           .real();
    return num / den;
}

}  // namespace qconv
