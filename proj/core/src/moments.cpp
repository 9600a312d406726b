#include "qconv/moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace qconv {

namespace {

Parity power_parity(Parity base, unsigned e) {
    if (base == Parity::kNone) return Parity::kNone;
    const bool x_even = (e % 2 == 0);
    if (base == Parity::kEven) return x_even ? Parity::kEven : Parity::kOdd;
    return x_even ? Parity::kOdd : Parity::kEven;
}

QIntegralResult moment_integral(const LatticeFunction& f, unsigned e, double gamma,
                                const QContext& ctx) {
    return q_integral_terms(
        [&](int eps, int k) {
            const double x = eps * std::pow(ctx.q, k) * gamma;
            return f.at(eps, k, ctx) * std::pow(cplx{x, 0.0}, static_cast<double>(e));
        },
        gamma, ctx, power_parity(f.parity(), e), /*bounded=*/false, f.k_lo(), f.k_hi());
}

QIntegralResult strict_integral(const LatticeFunction& f, unsigned e, double gamma,
                                const QContext& ctx) {
    const Parity p = f.parity() == Parity::kNone ? Parity::kNone : Parity::kEven;
    return q_integral_terms(
        [&](int eps, int k) {
            const double ax = std::pow(ctx.q, k) * gamma;
            return cplx{std::abs(f.at(eps, k, ctx)) * std::pow(ax, static_cast<double>(e)), 0.0};
        },
        gamma, ctx, p, /*bounded=*/false, f.k_lo(), f.k_hi());
}

double norm_exponent(unsigned e) {
    return 0.5 * (static_cast<double>(e) * e + e);
}

}  // namespace

cplx moment(const LatticeFunction& f, unsigned e, double gamma, const QContext& ctx) {
    const auto r = moment_integral(f, e, gamma, ctx);
    if (r.status == IntegralStatus::kDivergent)
        throw DomainError("moment: q-integral diverges (f X^e not absolutely q-integrable)");
    if (r.status == IntegralStatus::kCapped)
        throw CapExceeded("moment: lattice cap before truncation criterion");
    return std::exp(norm_exponent(e) * std::log(ctx.q)) * r.value;
}

double strict_moment(const LatticeFunction& f, unsigned e, double gamma, const QContext& ctx) {
    const auto r = strict_integral(f, e, gamma, ctx);
    if (r.status == IntegralStatus::kDivergent)
        throw DomainError("strict_moment: q-integral diverges");
    if (r.status == IntegralStatus::kCapped)
        throw CapExceeded("strict_moment: lattice cap before truncation criterion");
    return std::exp(norm_exponent(e) * std::log(ctx.q)) * r.value.real();
}

MomentSequence moment_sequence(const LatticeFunction& f, unsigned E, double gamma,
                               const QContext& ctx) {
    MomentSequence ms;
    ms.gamma = gamma;
    ms.q = ctx.q;
    ms.entries.reserve(E + 1);
    const double lq = std::log(ctx.q);
    for (unsigned e = 0; e <= E; ++e) {
        MomentEntry me;
        me.e = e;
        const auto rm = moment_integral(f, e, gamma, ctx);
        const auto rn = strict_integral(f, e, gamma, ctx);
        me.status_mu = rm.status;
        me.status_nu = rn.status;
        const double pref = norm_exponent(e) * lq;
        me.mu = std::exp(pref) * rm.value;
        me.nu = std::exp(pref) * rn.value.real();
        // log channel taken before the normalization factor is applied, so it
        // survives where exp(pref) underflows the double channel
        const double raw_amu = std::abs(rm.value);
        const double raw_nu = rn.value.real();
        me.log_abs_mu = raw_amu > 0.0 ? pref + std::log(raw_amu)
                                      : -std::numeric_limits<double>::infinity();
        me.log_nu =
            raw_nu > 0.0 ? pref + std::log(raw_nu) : -std::numeric_limits<double>::infinity();
        ms.entries.push_back(me);
    }
    return ms;
}

TypeClassification classify_type(const MomentSequence& ms, MomentKind kind,
                                 double residual_threshold) {
    const unsigned E = ms.max_order();
    std::vector<std::pair<double, double>> pts;  // (e, log m_e)
    for (const auto& me : ms.entries) {
        if (me.e * 2 < E) continue;  // fit the asymptotic regime only
        const double lm = kind == MomentKind::kStrictLeft ? me.log_nu : me.log_abs_mu;
        if (!std::isfinite(lm)) continue;  // exact zeros excluded (even functions)
        pts.emplace_back(static_cast<double>(me.e), lm);
    }
    if (pts.size() < 5)
        throw InsufficientData("classify_type: need at least 5 nonzero entries in the fit window");
    // LS for log m = A e^2 + B e + C
    double s4 = 0, s3 = 0, s2 = 0, s1 = 0, s0 = 0, t2 = 0, t1 = 0, t0 = 0;
    for (const auto& [e, y] : pts) {
        const double e2 = e * e;
        s4 += e2 * e2;
        s3 += e2 * e;
        s2 += e2;
        s1 += e;
        s0 += 1.0;
        t2 += e2 * y;
        t1 += e * y;
        t0 += y;
    }
    // solve the 3x3 normal equations by elimination
    double M[3][4] = {{s4, s3, s2, t2}, {s3, s2, s1, t1}, {s2, s1, s0, t0}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        std::swap(M[piv], M[col]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double fac = M[r][col] / M[col][col];
            for (int cc = col; cc < 4; ++cc) M[r][cc] -= fac * M[col][cc];
        }
    }
    const double A = M[0][3] / M[0][0];
    const double B = M[1][3] / M[1][1];
    const double C = M[2][3] / M[2][2];

    TypeClassification tc;
    tc.kind = kind;
    tc.alpha_hat = 2.0 * A / std::log(ms.q);
    tc.b_hat = std::exp(B);
    double ss = 0.0;
    for (const auto& [e, y] : pts) {
        const double r = A * e * e + B * e + C - y;
        ss += r * r;
    }
    tc.residual = std::sqrt(ss / static_cast<double>(pts.size()));
    if (tc.residual > residual_threshold || !(tc.alpha_hat > 0.0))
        throw NotOfLeftType("classify_type: no left-type fit (residual " +
                            std::to_string(tc.residual) + ", alpha " +
                            std::to_string(tc.alpha_hat) + ")");
    if (tc.alpha_hat < 1.0) tc.beta = 1.0 / (1.0 - tc.alpha_hat);
    return tc;
}

DecayReport pointwise_decay_check(const LatticeFunction& f, double gamma, double alpha, int j_max,
                                  const QContext& ctx) {
    DecayReport rep;
    std::vector<std::pair<double, double>> pts;
    bool any_nonzero = false;
    try {
        for (int j = std::max(2, j_max - 9); j <= j_max; ++j) {
            const double vp = std::abs(f.at(1, -j, ctx));
            const double vm = std::abs(f.at(-1, -j, ctx));
            const double v = std::max(vp, vm);
            if (v > 0.0) {
                any_nonzero = true;
                pts.emplace_back(static_cast<double>(j), std::log(v));
            }
        }
        double bound = 0.0;
        for (int j = 1; j <= j_max; ++j)
            bound = std::max({bound, std::abs(f.at(1, j, ctx)), std::abs(f.at(-1, j, ctx))});
        rep.bound_on_small_side = bound;
        rep.bounded_on_small_side = std::isfinite(bound);
    } catch (const std::exception& ex) {
        throw EvaluationFailure(std::string("pointwise_decay_check: ") + ex.what());
    }
    rep.zero_tail = !any_nonzero;
    if (alpha < 1.0) rep.expected_beta = 1.0 / (1.0 - alpha);
    if (rep.zero_tail) {
        // vanishing tail is the type >= 1 signature; any beta is admissible
        rep.forward_consistent = true;
        rep.fitted_beta = std::numeric_limits<double>::infinity();
        rep.converse_alpha = 1.0;
        return rep;
    }
    if (pts.size() < 4)
        throw InsufficientData("pointwise_decay_check: too few nonzero tail samples");
    // fit log|f| = A j^2 + B j (+C)
    double s4 = 0, s3 = 0, s2 = 0, s1 = 0, s0 = 0, t2 = 0, t1 = 0, t0 = 0;
    for (const auto& [j, y] : pts) {
        const double j2 = j * j;
        s4 += j2 * j2;
        s3 += j2 * j;
        s2 += j2;
        s1 += j;
        s0 += 1;
        t2 += j2 * y;
        t1 += j * y;
        t0 += y;
    }
    double M[3][4] = {{s4, s3, s2, t2}, {s3, s2, s1, t1}, {s2, s1, s0, t0}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        std::swap(M[piv], M[col]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double fac = M[r][col] / M[col][col];
            for (int cc = col; cc < 4; ++cc) M[r][cc] -= fac * M[col][cc];
        }
    }
    const double A = M[0][3] / M[0][0];
    const double B = M[1][3] / M[1][1];
    rep.fitted_beta = 2.0 * A / std::log(ctx.q);
    rep.fitted_c = std::exp(B);
    rep.converse_alpha = rep.fitted_beta > 1.0 ? 1.0 - 1.0 / rep.fitted_beta : 0.0;
    if (alpha < 1.0)
        rep.forward_consistent = std::fabs(rep.fitted_beta - rep.expected_beta) <
                                 0.1 * std::max(1.0, rep.expected_beta);
    else
        rep.forward_consistent = rep.zero_tail;
    return rep;
}

cplx derivative_moment(const MomentSequence& ms, unsigned l, unsigned k, const QContext& ctx) {
    if (l < k) return {0.0, 0.0};
    const unsigned e = l - k;
    if (l > ms.max_order() || e > ms.max_order())
        throw RangeError("derivative_moment: order outside the sequence");
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double ratio =
        std::exp(log_q_factorial(l, ctx) - log_q_factorial(e, ctx));
    return sign * ratio * ms.mu(e);
}

cplx xk_multiplied_moment(const MomentSequence& ms, unsigned e, unsigned k, const QContext& ctx) {
    if (k + e > ms.max_order()) throw RangeError("xk_multiplied_moment: order outside sequence");
    const double expn = -0.5 * static_cast<double>(k) * k - 0.5 * k -
                        static_cast<double>(e) * k;
    return std::exp(expn * std::log(ctx.q)) * ms.mu(k + e);
}

std::string to_json(const MomentSequence& ms) {
    nlohmann::json j;
    j["gamma"] = ms.gamma;
    j["q"] = ms.q;
    auto status_name = [](IntegralStatus s) {
        switch (s) {
            case IntegralStatus::kConverged: return "CONVERGED";
            case IntegralStatus::kDivergent: return "DIVERGENT";
            case IntegralStatus::kCapped: return "CAPPED";
        }
        return "UNKNOWN";
    };
    j["entries"] = nlohmann::json::array();
    for (const auto& me : ms.entries) {
        nlohmann::json e;
        e["e"] = me.e;
        e["mu_re"] = me.mu.real();
        e["mu_im"] = me.mu.imag();
        e["nu"] = me.nu;
        if (std::isfinite(me.log_abs_mu))
            e["log_abs_mu"] = me.log_abs_mu;
        else
            e["log_abs_mu"] = nullptr;
        e["status"] = status_name(me.status_mu);
        j["entries"].push_back(std::move(e));
    }
    return j.dump(2);
}

}  // namespace qconv
