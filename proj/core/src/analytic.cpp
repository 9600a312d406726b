#include "qconv/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace qconv {

BoundCertificate certify_bounds(const LatticeFunction& g, double r, double C, int k_max,
                                const QContext& ctx) {
    if (!(r > g.gamma())) throw DomainError("certify_bounds: need r > gamma");
    if (!(C > 0.0)) throw DomainError("certify_bounds: need C > 0");
    BoundCertificate cert;
    cert.r = r;
    cert.C = C;
    cert.checked_orders = k_max;
    // admissible t: q^t gamma < r
    int t_lo = static_cast<int>(std::ceil(std::log(r / g.gamma()) / std::log(ctx.q)));
    while (std::pow(ctx.q, t_lo) * g.gamma() >= r) ++t_lo;
    t_lo = std::max(t_lo, g.k_lo());
    const int t_hi = g.is_table() ? g.k_hi() - k_max : t_lo + 2 * ctx.max_lattice_index / 3;
    cert.t_lo = t_lo;
    cert.t_hi = t_hi;
    if (t_hi < t_lo) throw WindowExceeded("certify_bounds: window too short for k_max");
    double worst = 0.0;
    for (int eps : {1, -1}) {
        for (int t = t_lo; t <= t_hi; ++t) {
            DerivativeLadder ladder(g, eps, t, ctx);
            const double qt = std::pow(ctx.q, t) * g.gamma();
            for (int k = 0; k <= k_max; ++k) {
                const double mag = std::abs(ladder.derivative(static_cast<unsigned>(k)));
                const double bound = C * r / ((r - qt) * std::pow(r, k) *
                                              std::pow(1.0 - ctx.q, k));
                worst = std::max(worst, mag / bound);
            }
        }
    }
    cert.worst_ratio = worst;
    cert.holds = worst <= 1.0;
    return cert;
}

BoundCertificate certify_grid(const LatticeFunction& g, int k_max, const QContext& ctx) {
    BoundCertificate best;
    best.worst_ratio = std::numeric_limits<double>::infinity();
    for (int ri = 1; ri <= 6; ++ri) {
        const double r = g.gamma() * std::pow(4.0, ri / 6.0);
        for (int ci = 0; ci <= 6; ++ci) {
            const double C = std::pow(10.0, ci);
            BoundCertificate cert;
            try {
                cert = certify_bounds(g, r, C, k_max, ctx);
            } catch (const WindowExceeded&) {
                continue;
            }
            if (cert.worst_ratio < best.worst_ratio) best = cert;
            if (best.holds) return best;
        }
    }
    return best;
}

namespace {

// Newton divided differences over the given nodes, returned as monomial
// coefficients. Geometric nodes spanning both signs keep the conversion
// well conditioned for entire-function data.
std::vector<cplx> newton_monomial(const std::vector<double>& nodes, std::vector<cplx> vals) {
    const std::size_t n = nodes.size();
    for (std::size_t lev = 1; lev < n; ++lev)
        for (std::size_t i = n - 1; i >= lev; --i) {
            vals[i] = (vals[i] - vals[i - 1]) / (nodes[i] - nodes[i - lev]);
            if (i == lev) break;
        }
    std::vector<cplx> poly{cplx{0.0, 0.0}};
    for (std::size_t i = n; i-- > 0;) {
        std::vector<cplx> next(poly.size() + 1, cplx{0.0, 0.0});
        for (std::size_t d = 0; d < poly.size(); ++d) {
            next[d + 1] += poly[d];
            next[d] -= nodes[i] * poly[d];
        }
        next[0] += vals[i];
        poly = std::move(next);
    }
    return poly;
}

// interpolation window [a_top, a_top+m-1] over both signs -> coefficients
std::vector<cplx> window_coefficients(const LatticeFunction& g, int a_top, int m,
                                      const QContext& ctx) {
    std::vector<double> nodes;
    std::vector<cplx> vals;
    nodes.reserve(2 * m);
    vals.reserve(2 * m);
    for (int k = a_top; k < a_top + m; ++k) {
        const double x = std::pow(ctx.q, k) * g.gamma();
        nodes.push_back(x);
        vals.push_back(g.at(1, k, ctx));
        nodes.push_back(-x);
        vals.push_back(g.at(-1, k, ctx));
    }
    return newton_monomial(nodes, std::move(vals));
}

// one-sided variant used for the per-sign limits
std::vector<cplx> window_coefficients_one_sided(const LatticeFunction& g, int eps, int a_top,
                                                int m, const QContext& ctx) {
    std::vector<double> nodes;
    std::vector<cplx> vals;
    for (int k = a_top; k < a_top + m; ++k) {
        nodes.push_back(eps * std::pow(ctx.q, k) * g.gamma());
        vals.push_back(g.at(eps, k, ctx));
    }
    return newton_monomial(nodes, std::move(vals));
}

}  // namespace

DerivativeLimits derivative_limits(const LatticeFunction& g, unsigned P, const QContext& ctx) {
    DerivativeLimits dl;
    const int Pi = static_cast<int>(P);
    // raw anchored estimates with the tail-sum correction, per sign; these are
    // the convergence evidence and the epsilon-agreement witnesses
    int anchor = static_cast<int>(std::ceil(std::log(1e-3 / g.gamma()) / std::log(ctx.q)));
    anchor = std::max(anchor, g.k_lo());
    anchor = std::min(anchor, g.k_hi() - Pi - ctx.decay_window - 4);
    if (anchor < g.k_lo())
        throw WindowExceeded("derivative_limits: window too short");
    const int m_end = g.is_table()
                          ? g.k_hi() - Pi - 1
                          : anchor + static_cast<int>(40.0 / -std::log10(ctx.q)) + 2;

    auto raw_limit = [&](int eps, unsigned p, int a) {
        DerivativeLadder top(g, eps, a, ctx);
        cplx est = top.derivative(p);
        // tail correction: l_p = d^p g(q^a) - (1-q) eps q^a g Sum q^m d^{p+1} g(q^{a+m})
        cplx corr{0.0, 0.0};
        const double x0 = eps * std::pow(ctx.q, a) * g.gamma();
        double qm = 1.0;
        for (int m = 0; a + m <= m_end; ++m) {
            DerivativeLadder lad(g, eps, a + m, ctx);
            const cplx d1 = lad.derivative(p + 1);
            corr += qm * d1;
            if (std::abs(qm * d1) < 1e-18 * std::max(std::abs(est), 1e-300) && m > 4) break;
            qm *= ctx.q;
        }
        return est - (1.0 - ctx.q) * x0 * corr;
    };

    std::vector<cplx> plus(P + 1), minus(P + 1);
    dl.convergence_evidence.assign(P + 1, 0.0);
    for (unsigned p = 0; p <= P; ++p) {
        const cplx lp0 = raw_limit(1, p, anchor);
        const cplx lp1 = raw_limit(1, p, anchor + 1);
        const cplx lp2 = raw_limit(1, p, anchor + 2);
        plus[p] = lp2;
        const cplx lm = raw_limit(-1, p, anchor + 2);
        minus[p] = lm;
        const double d01 = std::abs(lp1 - lp0), d12 = std::abs(lp2 - lp1);
        dl.convergence_evidence[p] = d12;
        // differencing noise compounds like (2/(1-q))^p q^{-(anchor p + p^2/2)};
        // below that floor the drift between anchors is roundoff, not signal
        const double noise =
            1e-16 * std::pow(2.0 / (1.0 - ctx.q), p + 1.0) *
            std::pow(ctx.q, -(static_cast<double>(anchor) * (p + 1.0) + 0.5 * p * (p + 1.0))) *
            (std::abs(plus[0]) + 1.0);
        const double floor_tol =
            std::max(1e-9 + 1e-7 * std::max(std::abs(lp2), std::abs(lp0)), 8.0 * noise);
        if (d12 > floor_tol && d12 > 0.9 * d01 && d01 > floor_tol)
            throw NonConvergent("derivative_limits: anchored estimates fail to settle at order " +
                                std::to_string(p));
    }
    dl.epsilon_agreement.assign(P + 1, 0.0);
    dl.agreement_tol = 0.0;
    bool agree = true;
    for (unsigned p = 0; p <= P; ++p) {
        dl.epsilon_agreement[p] = std::abs(plus[p] - minus[p]);
        // one-sided anchored estimates are exact to roughly sqrt(eps) at low
        // order; the tolerance widens with p as differencing noise compounds
        const double noise =
            1e-16 * std::pow(2.0 / (1.0 - ctx.q), p + 1.0) *
            std::pow(ctx.q, -(static_cast<double>(anchor) * (p + 1.0) + 0.5 * p * (p + 1.0))) *
            (std::abs(plus[0]) + 1.0);
        const double tol = std::max(
            (1e-8 + 1e-5 * std::max(std::abs(plus[p]), std::abs(minus[p]))) * std::pow(4.0, p),
            16.0 * noise);
        dl.agreement_tol = std::max(dl.agreement_tol, tol);
        if (dl.epsilon_agreement[p] > tol) agree = false;
    }
    dl.two_sided_ok = agree;

    if (!agree) {
        // half-lattice statement only: keep the plus-side anchored limits
        dl.l = std::move(plus);
        return dl;
    }

    // production estimates: scale-matched two-sided interpolation windows,
    // cross-validated by shifting the window one step deeper
    const int m = std::max(8, Pi / 2 + 3);
    int a_top = -(Pi / 2 + 1);
    a_top = std::max(a_top, g.k_lo());
    dl.l.assign(P + 1, cplx{0.0, 0.0});
    bool done = false;
    for (int shift = 0; shift <= 3 && !done; ++shift) {
        const int a0 = a_top + shift;
        if (g.is_table() && a0 + m + 1 > g.k_hi() + 1) break;
        std::vector<cplx> c0, c1;
        try {
            c0 = window_coefficients(g, a0, m, ctx);
            c1 = window_coefficients(g, a0 + 1, m, ctx);
        } catch (const WindowExceeded&) {
            break;
        }
        bool ok = true;
        for (unsigned p = 0; p <= P; ++p) {
            const cplx v0 = p < c0.size() ? c0[p] : cplx{0.0, 0.0};
            const cplx v1 = p < c1.size() ? c1[p] : cplx{0.0, 0.0};
            const double scale = std::max({std::abs(v0), std::abs(v1), 1e-30});
            if (std::abs(v0 - v1) > 1e-6 * scale) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (unsigned p = 0; p <= P; ++p) {
                const cplx cp = p < c0.size() ? c0[p] : cplx{0.0, 0.0};
                dl.l[p] = cp * q_factorial(p, ctx);
            }
            done = true;
        }
    }
    if (!done) {
        // interpolation windows never settled; fall back on the anchored
        // estimates, which carry their own evidence
        dl.l = std::move(plus);
    }
    return dl;
}

PowerSeries reconstruct_series(const DerivativeLimits& dl, const QContext& ctx) {
    if (!dl.two_sided_ok)
        throw EpsilonMismatch("reconstruct_series: one-sided limits disagree; the extension "
                              "exists per half-lattice only");
    std::vector<cplx> c(dl.l.size());
    for (std::size_t k = 0; k < dl.l.size(); ++k)
        c[k] = dl.l[k] / q_factorial(static_cast<unsigned>(k), ctx);
    return PowerSeries(std::move(c));
}

}  // namespace qconv
