#include "qconv/convolution.hpp"

#include <cmath>

namespace qconv {

namespace {

// shared summation over e with the tail rule; deriv(e) supplies (d^e g)(x)
template <typename DerivFn>
ConvolutionResult sum_convolution(const MomentSequence& fm, DerivFn&& deriv, int max_order,
                                  const QContext& ctx) {
    ConvolutionResult res;
    cplx s{0.0, 0.0};
    int shrink = 0;
    double last_mag = 0.0, ratio = 0.0;
    const unsigned E = fm.max_order();
    unsigned e = 0;
    for (; e <= E && static_cast<int>(e) <= ctx.max_terms; ++e) {
        if (static_cast<int>(e) > max_order) {
            res.status = ConvStatus::kInputExhausted;
            break;
        }
        const auto& me = fm.entries[e];
        const cplx d = deriv(e);
        const double sign = (e % 2 == 0) ? 1.0 : -1.0;
        const double lt = me.log_abs_mu - log_q_factorial(e, ctx) +
                          std::log(std::max(std::abs(d), 1e-320));
        cplx t{0.0, 0.0};
        if (std::isfinite(lt) && lt > -700.0)
            t = sign * (me.mu / q_factorial(e, ctx)) * d;
        s += t;
        const double at = std::isfinite(lt) ? std::exp(std::min(lt, 700.0)) : 0.0;
        if (at < ctx.tail_rel_tol * std::max(std::abs(s), 1e-300)) {
            if (++shrink >= ctx.decay_window && static_cast<int>(e) >= ctx.decay_window) {
                res.terms_used = static_cast<int>(e) + 1;
                res.value = s;
                const double r = std::min(std::max(ratio, 0.0), 0.99);
                res.tail_bound = at * r / (1.0 - r);
                return res;
            }
        } else {
            shrink = 0;
        }
        if (last_mag > 0.0 && at > 0.0) ratio = at / last_mag;
        last_mag = at;
    }
    res.terms_used = static_cast<int>(e);
    res.value = s;
    if (res.status != ConvStatus::kInputExhausted) res.status = ConvStatus::kCapped;
    const double r = std::min(std::max(ratio, 0.0), 0.99);
    res.tail_bound = last_mag * r / (1.0 - r);
    // fully decayed series that simply ran out of input is still converged
    if (shrink > 0 && last_mag < ctx.tail_rel_tol * std::max(std::abs(s), 1e-300))
        res.status = ConvStatus::kConverged;
    return res;
}

}  // namespace

namespace {

// derivative source selection: exact closed forms first, then the attached
// series (checked for convergence at x), then the raw difference ladder
ConvolutionResult convolve_lattice_point(const MomentSequence& fm, const LatticeFunction& g,
                                         int eps, int k, const QContext& ctx) {
    if (g.lattice_derivative_rule()) {
        const auto& dr = *g.lattice_derivative_rule();
        return sum_convolution(
            fm, [&](unsigned e) { return dr(eps, k, e); },
            std::numeric_limits<int>::max() / 2, ctx);
    }
    const cplx x{eps * std::pow(ctx.q, k) * g.gamma(), 0.0};
    if (g.derivative_rule()) {
        const auto& dr = *g.derivative_rule();
        return sum_convolution(
            fm, [&](unsigned e) { return dr(x, e); }, std::numeric_limits<int>::max() / 2, ctx);
    }
    if (!g.is_table() && g.series()) {
        const auto& ps = *g.series();
        const double ax = std::abs(x);
        bool use_series = ax < 0.9 * ps.radius_estimate;
        if (!use_series && ax <= ps.radius_estimate * (1.0 + 1e-12)) {
            // boundary of the disk: trust the series only if it reproduces
            // the rule value at x
            const cplx sv = ps.evaluate(x);
            const cplx rv = g.eval(x);
            use_series = std::abs(sv - rv) <= 1e-6 * std::max({std::abs(sv), std::abs(rv), 1e-30});
        }
        if (use_series)
            return sum_convolution(
                fm, [&](unsigned e) { return ps.derivative_eval(e, x, ctx); },
                static_cast<int>(ps.coefficients.size()) - 1, ctx);
    }
    DerivativeLadder ladder(g, eps, k, ctx);
    return sum_convolution(
        fm, [&](unsigned e) { return ladder.derivative(e); }, ladder.max_order(), ctx);
}

}  // namespace

ConvolutionResult convolve_at(const MomentSequence& fm, const LatticeFunction& g,
                              const LatticePoint& x, const QContext& ctx) {
    return convolve_lattice_point(fm, g, x.epsilon, x.k, ctx);
}

ConvolutionResult convolve_at(const MomentSequence& fm, const LatticeFunction& g, cplx x,
                              const QContext& ctx) {
    const int unbounded = std::numeric_limits<int>::max() / 2;
    if (x == cplx{0.0, 0.0}) {
        if (!g.series())
            throw ZeroPoint("convolve_at: x = 0 needs a series-represented right factor");
        const auto& ps = *g.series();
        return sum_convolution(
            fm,
            [&](unsigned e) {
                return e < ps.coefficients.size() ? ps.coefficients[e] * q_factorial(e, ctx)
                                                  : cplx{0.0, 0.0};
            },
            static_cast<int>(ps.coefficients.size()) - 1, ctx);
    }
    if (g.is_table() || x.imag() == 0.0) {
        // try to land on the lattice of g
        const double ax = std::abs(x);
        const double kd = std::log(ax / g.gamma()) / std::log(ctx.q);
        const int k = static_cast<int>(std::lround(kd));
        const double expect = std::pow(ctx.q, k) * g.gamma();
        if (x.imag() == 0.0 && std::abs(ax - expect) <= 1e-9 * expect)
            return convolve_lattice_point(fm, g, x.real() >= 0.0 ? 1 : -1, k, ctx);
        if (g.is_table())
            throw DomainError("convolve_at: table right factor needs a lattice point");
    }
    // off-lattice rule: closed-form derivatives, else series inside the disk
    if (g.derivative_rule()) {
        const auto& dr = *g.derivative_rule();
        return sum_convolution(
            fm, [&](unsigned e) { return dr(x, e); }, std::numeric_limits<int>::max() / 2, ctx);
    }
    if (g.series() && std::abs(x) < 0.9 * g.series()->radius_estimate) {
        const auto& ps = *g.series();
        return sum_convolution(
            fm, [&](unsigned e) { return ps.derivative_eval(e, x, ctx); },
            static_cast<int>(ps.coefficients.size()) - 1, ctx);
    }
    // generic difference-quotient ladder on the evaluator
    std::vector<cplx> base;
    std::vector<cplx> derivs;
    auto ensure = [&](unsigned need) {
        const std::size_t target = std::max<std::size_t>(need + 1, base.size() * 2);
        if (target <= base.size()) return;
        base.resize(target);
        for (std::size_t j = 0; j < target; ++j)
            base[j] = g.eval(x * std::pow(ctx.q, static_cast<double>(j)));
        std::vector<cplx> work = base;
        derivs.assign(work.size(), cplx{0.0, 0.0});
        derivs[0] = work[0];
        for (std::size_t level = 1; level < work.size(); ++level) {
            for (std::size_t j = 0; j + level < work.size(); ++j)
                work[j] = (work[j] - work[j + 1]) /
                          ((1.0 - ctx.q) * x * std::pow(ctx.q, static_cast<double>(j)));
            derivs[level] = work[0];
        }
    };
    return sum_convolution(
        fm,
        [&](unsigned e) {
            if (e >= derivs.size()) ensure(e);
            return derivs[e];
        },
        unbounded, ctx);
}

PowerSeries convolve_series(const MomentSequence& fm, const PowerSeries& g, const QContext& ctx) {
    if (!(g.radius_estimate > 0.0))
        throw DomainError("convolve_series: right factor needs positive radius");
    const std::size_t L = g.coefficients.size();
    std::vector<cplx> b(L, cplx{0.0, 0.0});
    for (std::size_t p = 0; p < L; ++p) {
        cplx s{0.0, 0.0};
        int shrink = 0;
        for (unsigned e = 0; e <= fm.max_order() && p + e < L; ++e) {
            const double sign = (e % 2 == 0) ? 1.0 : -1.0;
            const cplx t = sign * fm.mu(e) *
                           q_binomial(static_cast<unsigned>(p) + e, e, ctx) *
                           g.coefficients[p + e];
            s += t;
            if (std::abs(t) < ctx.tail_rel_tol * std::max(std::abs(s), 1e-300) &&
                e >= static_cast<unsigned>(ctx.decay_window)) {
                if (++shrink >= ctx.decay_window) break;
            } else {
                shrink = 0;
            }
        }
        b[p] = s;
    }
    PowerSeries out(std::move(b));
    out.radius_estimate = g.radius_estimate;  // Lemma 3.4 regime: no shrinkage
    return out;
}

cplx convolution_moment(const MomentSequence& fm, const MomentSequence& gm, unsigned k,
                        const QContext& ctx) {
    if (k > fm.max_order() || k > gm.max_order())
        throw RangeError("convolution_moment: order outside the sequences");
    cplx s{0.0, 0.0};
    for (unsigned e = 0; e <= k; ++e)
        s += q_binomial(k, e, ctx) * fm.mu(e) * gm.mu(k - e);
    return s;
}

double predicted_type(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw DomainError("predicted_type: alpha, beta must be positive");
    return alpha * beta / (alpha + beta);
}

cplx commutator_at(const MomentSequence& fm, const MomentSequence& gm, const LatticeFunction& f,
                   const LatticeFunction& g, const LatticePoint& x, const QContext& ctx) {
    const auto fg = convolve_at(fm, g, x, ctx);
    const auto gf = convolve_at(gm, f, x, ctx);
    return fg.value - gf.value;
}

cplx lambda_probe(const MomentSequence& fm, cplx lambda, const QContext& ctx) {
    cplx s{0.0, 0.0};
    cplx zk{1.0, 0.0};  // (i lambda)^k
    const cplx z = cplx{0.0, 1.0} * lambda;
    double qqk = 1.0;  // (q;q)_k
    int grow = 0, shrink = 0;
    double last = 0.0;
    for (unsigned k = 0; k <= fm.max_order(); ++k) {
        const cplx t = fm.mu(k) * zk / qqk;
        s += t;
        const double at = std::abs(t);
        if (at < ctx.tail_rel_tol * std::max(std::abs(s), 1e-300) && k >= 2) {
            if (++shrink >= ctx.decay_window) return s;
        } else {
            shrink = 0;
        }
        if (last > 0.0 && at > last &&
            at > std::max(std::abs(s), 1e-300)) {
            if (++grow >= ctx.decay_window)
                throw DivergentSeries("lambda_probe: terms fail to decay "
                                      "(left factor not of sufficient type)");
        } else {
            grow = 0;
        }
        last = at;
        zk *= z;
        qqk *= (1.0 - std::pow(ctx.q, k + 1.0));
    }
    return s;
}

}  // namespace qconv
