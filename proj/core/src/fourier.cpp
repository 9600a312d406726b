#include "qconv/fourier.hpp"

#include <cmath>

#include "qconv/convolution.hpp"
#include "qconv/special.hpp"

namespace qconv {

FourierResult fourier_integral(const LatticeFunction& f, double gamma, cplx y,
                               const QContext& ctx) {
    const cplx iq = cplx{0.0, 1.0} * ctx.q;
    const auto r = q_integral_terms(
        [&](int eps, int k) {
            const double x = eps * std::pow(ctx.q, k) * gamma;
            // product form of E_q avoids series cancellation at large |xy|
            return q_pochhammer(-iq * x * y, k_infinity, ctx) * f.at(eps, k, ctx);
        },
        gamma, ctx, Parity::kNone, /*bounded=*/false, f.k_lo(), f.k_hi());
    FourierResult out;
    out.form = FourierForm::kIntegral;
    out.status = r.status;
    out.value = r.value;
    return out;
}

FourierResult fourier_series(const MomentSequence& fm, cplx y, const QContext& ctx) {
    FourierResult out;
    out.form = FourierForm::kSeries;
    try {
        out.value = lambda_probe(fm, y, ctx);
        out.status = IntegralStatus::kConverged;
    } catch (const DivergentSeries&) {
        out.status = IntegralStatus::kDivergent;
    }
    return out;
}

namespace {

cplx inverse_impl(const std::function<cplx(double)>& phi, cplx x, double gamma,
                  const QContext& ctx) {
    const double norm = constant_cq(gamma, ctx) * constant_bq(ctx);
    const cplx mi = {0.0, -1.0};
    const auto r = q_integral_terms(
        [&](int eps, int k) {
            const double yk = eps * std::pow(ctx.q, k);
            // e_q(-i x y) = 1/(-ixy;q)_inf
            const cplx den = q_pochhammer(mi * x * yk, k_infinity, ctx);
            if (den == cplx{0.0, 0.0}) throw PoleError("fourier_inverse: e_q pole");
            return phi(yk) / den;
        },
        1.0, ctx, Parity::kNone, /*bounded=*/true, 0, std::numeric_limits<int>::max() / 2);
    return r.value / norm;
}

}  // namespace

cplx fourier_inverse(const std::function<cplx(double)>& phi, cplx x, double gamma,
                     const QContext& ctx) {
    return inverse_impl(phi, x, gamma, ctx);
}

cplx fourier_inverse(const PowerSeries& phi, cplx x, double gamma, const QContext& ctx) {
    return inverse_impl([&](double y) { return phi.evaluate(cplx{y, 0.0}); }, x, gamma, ctx);
}

HomomorphismReport homomorphism_check(const MomentSequence& fm, const MomentSequence& gm, cplx y,
                                      const QContext& ctx) {
    const unsigned K = std::min(fm.max_order(), gm.max_order());
    MomentSequence conv;
    conv.gamma = gm.gamma;
    conv.q = ctx.q;
    conv.entries.reserve(K + 1);
    for (unsigned k = 0; k <= K; ++k) {
        MomentEntry me;
        me.e = k;
        me.mu = convolution_moment(fm, gm, k, ctx);
        const double a = std::abs(me.mu);
        me.log_abs_mu = a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
        conv.entries.push_back(me);
    }
    HomomorphismReport rep;
    rep.lhs = fourier_series(conv, y, ctx).value;
    rep.rhs = fourier_series(fm, y, ctx).value * fourier_series(gm, y, ctx).value;
    rep.difference = std::abs(rep.lhs - rep.rhs);
    return rep;
}

}  // namespace qconv
