#include "qconv/lattice.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace qconv {

LatticeFunction LatticeFunction::rule(Evaluator f, double gamma, Analyticity tag,
                                      double analyticity_param, Parity parity) {
    if (!(gamma > 0.0)) throw DomainError("LatticeFunction::rule: gamma must be positive");
    // the standing assumption a > gamma matters for disks (the lattice must
    // accumulate inside); the real lattice always lies inside a strip
    if (tag == Analyticity::kDisk && !(analyticity_param > gamma))
        throw DomainError("LatticeFunction::rule: disk radius must exceed gamma");
    LatticeFunction lf;
    lf.rule_ = std::move(f);
    lf.gamma_ = gamma;
    lf.tag_ = tag;
    lf.a_ = analyticity_param;
    lf.parity_ = parity;
    lf.k_lo_ = std::numeric_limits<int>::min() / 2;
    lf.k_hi_ = std::numeric_limits<int>::max() / 2;
    return lf;
}

LatticeFunction LatticeFunction::table(double gamma, int k_lo, std::vector<cplx> plus_values,
                                       std::vector<cplx> minus_values, Parity parity) {
    if (!(gamma > 0.0)) throw DomainError("LatticeFunction::table: gamma must be positive");
    if (plus_values.empty() || plus_values.size() != minus_values.size())
        throw DomainError("LatticeFunction::table: need equal nonempty value windows");
    for (const auto& v : plus_values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("LatticeFunction::table: values must be finite");
    for (const auto& v : minus_values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("LatticeFunction::table: values must be finite");
    LatticeFunction lf;
    lf.gamma_ = gamma;
    lf.tag_ = Analyticity::kLatticeOnly;
    lf.parity_ = parity;
    lf.k_lo_ = k_lo;
    lf.k_hi_ = k_lo + static_cast<int>(plus_values.size()) - 1;
    lf.plus_ = std::move(plus_values);
    lf.minus_ = std::move(minus_values);
    return lf;
}

cplx LatticeFunction::at(int eps, int k, const QContext& ctx) const {
    if (lattice_rule_) return (*lattice_rule_)(eps, k);
    if (rule_) return (*rule_)(eps * std::pow(ctx.q, k) * gamma_);
    if (k < k_lo_ || k > k_hi_)
        throw WindowExceeded("LatticeFunction: index " + std::to_string(k) + " outside table window");
    return eps > 0 ? plus_[static_cast<std::size_t>(k - k_lo_)]
                   : minus_[static_cast<std::size_t>(k - k_lo_)];
}

cplx LatticeFunction::eval(cplx x) const {
    if (rule_) return (*rule_)(x);
    throw DomainError("LatticeFunction: tables are evaluated by lattice index");
}

// ---------------------------------------------------------------------------

namespace {

// triangular difference scheme: given f at q^{k+j} x0, j=0..n, produce
// (d^e f)(x0) for e=0..n
void difference_triangle(std::vector<cplx>& work, double x0, double q,
                         std::vector<cplx>& out_derivs) {
    out_derivs.assign(work.size(), cplx{0.0, 0.0});
    out_derivs[0] = work[0];
    const std::size_t n = work.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t j = 0; j + level < n; ++j) {
            const double xj = x0 * std::pow(q, static_cast<double>(j));
            work[j] = (work[j] - work[j + 1]) / ((1.0 - q) * xj);
        }
        out_derivs[level] = work[0];
    }
}

}  // namespace

DerivativeLadder::DerivativeLadder(const LatticeFunction& f, int eps, int k, const QContext& ctx)
    : f_(f), ctx_(ctx), eps_(eps), k_(k) {}

int DerivativeLadder::max_order() const {
    if (!f_.is_table()) return std::numeric_limits<int>::max() / 2;
    return f_.k_hi() - k_;
}

void DerivativeLadder::extend(std::size_t need) {
    std::size_t target = std::max<std::size_t>(need + 1, base_.size() * 2);
    if (f_.is_table())
        target = std::min(target, static_cast<std::size_t>(std::max(0, max_order() + 1)));
    if (target <= base_.size() && !base_.empty()) return;
    base_.resize(target);
    for (std::size_t j = 0; j < target; ++j)
        base_[j] = f_.at(eps_, k_ + static_cast<int>(j), ctx_);
    std::vector<cplx> work = base_;
    const double x0 = eps_ * std::pow(ctx_.q, k_) * f_.gamma();
    difference_triangle(work, x0, ctx_.q, derivs_);
}

cplx DerivativeLadder::derivative(unsigned e) {
    if (f_.is_table() && static_cast<int>(e) > max_order())
        throw WindowExceeded("DerivativeLadder: table window shorter than derivative order");
    if (e >= derivs_.size()) extend(e);
    return derivs_[e];
}

// ---------------------------------------------------------------------------

cplx q_derivative(const LatticeFunction& f, cplx x, unsigned order, const QContext& ctx) {
    if (order == 0) {
        if (f.is_table()) {
            // map x to a lattice index
            const double ax = std::abs(x);
            if (!(ax > 0.0)) throw ZeroPoint("q_derivative: x = 0 on a table");
            const int k = static_cast<int>(std::lround(std::log(ax / f.gamma()) / std::log(ctx.q)));
            const int eps = x.real() >= 0.0 ? 1 : -1;
            const double expect = std::pow(ctx.q, k) * f.gamma();
            if (std::abs(ax - expect) > 1e-9 * expect || std::abs(x.imag()) != 0.0)
                throw DomainError("q_derivative: table point is not on L(gamma)");
            return f.at(eps, k, ctx);
        }
        return f.eval(x);
    }
    if (x == cplx{0.0, 0.0}) {
        if (f.series())
            return f.series()->coefficients.size() > order
                       ? f.series()->coefficients[order] * q_factorial(order, ctx)
                       : cplx{0.0, 0.0};
        throw ZeroPoint("q_derivative: x = 0 without a series representation");
    }
    return (q_derivative(f, x, order - 1, ctx) - q_derivative(f, x * ctx.q, order - 1, ctx)) /
           ((1.0 - ctx.q) * x);
}

cplx q_derivative(const LatticeFunction& f, const LatticePoint& x, unsigned order,
                  const QContext& ctx) {
    if (f.is_table() && (x.k < f.k_lo() || x.k + static_cast<int>(order) > f.k_hi()))
        throw WindowExceeded("q_derivative: stencil outside table window");
    DerivativeLadder ladder(f, x.epsilon, x.k, ctx);
    return ladder.derivative(order);
}

LatticeFunction q_shift(const LatticeFunction& f, int n, const QContext& ctx) {
    const double qn = std::pow(ctx.q, n);
    if (!f.is_table()) {
        double a = f.analyticity_param();
        if (std::isfinite(a)) a *= std::pow(ctx.q, -n);
        // keep the disk/strip parameter valid relative to gamma
        Analyticity tag = f.tag();
        if ((tag == Analyticity::kDisk || tag == Analyticity::kStrip) && !(a > f.gamma()))
            tag = Analyticity::kLatticeOnly;
        auto inner = f;  // copy captures evaluator and series
        LatticeFunction out = LatticeFunction::rule(
            [inner, qn](cplx x) { return inner.eval(qn * x); }, f.gamma(), tag, a, f.parity());
        if (f.series()) {
            std::vector<cplx> c = f.series()->coefficients;
            double p = 1.0;
            for (auto& cl : c) {
                cl *= p;
                p *= qn;
            }
            PowerSeries ps(std::move(c));
            ps.radius_estimate = f.series()->radius_estimate / qn;
            out.with_series(std::move(ps));
        }
        return out;
    }
    // table: (Q^n f) at index k equals old value at k + n
    std::vector<cplx> plus, minus;
    const int lo = f.k_lo() - n, hi = f.k_hi() - n;
    plus.reserve(hi - lo + 1);
    minus.reserve(hi - lo + 1);
    for (int k = lo; k <= hi; ++k) {
        plus.push_back(f.at(1, k + n, ctx));
        minus.push_back(f.at(-1, k + n, ctx));
    }
    return LatticeFunction::table(f.gamma(), lo, std::move(plus), std::move(minus), f.parity());
}

// ---------------------------------------------------------------------------

namespace {

struct SweepState {
    cplx sum{0.0, 0.0};
    double last_mag = -1.0;
    double ratio = 0.0;
    int shrink = 0;
    int grow = 0;
    double peak = 0.0;
};

}  // namespace

QIntegralResult q_integral_terms(const std::function<cplx(int, int)>& value_at, double gamma,
                                 const QContext& ctx, Parity parity, bool bounded, int k_lo_lim,
                                 int k_hi_lim) {
    QIntegralResult res;
    const bool windowed = k_hi_lim < std::numeric_limits<int>::max() / 4;
    if (parity == Parity::kOdd) {
        // pairwise cancellation is exact by symmetry metadata
        res.value = {0.0, 0.0};
        return res;
    }
    const auto term_at = [&](int k) -> cplx {
        const double w = std::pow(ctx.q, k) * gamma;
        if (parity == Parity::kEven) return 2.0 * w * value_at(1, k);
        return w * (value_at(1, k) + value_at(-1, k));
    };

    SweepState pos;
    int k = 0;
    k_hi_lim = std::min(k_hi_lim, ctx.max_lattice_index);
    bool pos_stopped = false;
    for (; k <= k_hi_lim; ++k) {
        const cplx t = term_at(k);
        pos.sum += t;
        const double at = std::abs(t);
        pos.peak = std::max(pos.peak, at);
        if (at < ctx.tail_rel_tol * std::max(std::abs(pos.sum), 1e-300)) {
            if (++pos.shrink >= ctx.decay_window) {
                pos_stopped = true;
                break;
            }
        } else {
            pos.shrink = 0;
        }
        if (pos.last_mag > 0.0 && at > 0.0) pos.ratio = at / pos.last_mag;
        pos.last_mag = at;
    }
    res.k_pos_used = std::min(k, k_hi_lim);
    if (!pos_stopped && !windowed) res.status = IntegralStatus::kCapped;
    // a table running out of window is only a cap if terms were still large
    if (!pos_stopped && windowed && pos.shrink == 0 &&
        pos.last_mag > ctx.tail_rel_tol * std::max(std::abs(pos.sum), 1e-300))
        res.status = IntegralStatus::kCapped;

    SweepState neg;
    bool neg_stopped = bounded;
    if (!bounded) {
        k_lo_lim = std::max(k_lo_lim, -ctx.max_lattice_index);
        for (k = -1; k >= k_lo_lim; --k) {
            const cplx t = term_at(k);
            neg.sum += t;
            const double at = std::abs(t);
            neg.peak = std::max(neg.peak, at);
            const double scale = std::max(std::abs(pos.sum + neg.sum), 1e-300);
            if (at < ctx.tail_rel_tol * scale) {
                if (++neg.shrink >= ctx.decay_window) {
                    neg_stopped = true;
                    break;
                }
            } else {
                neg.shrink = 0;
            }
            if (neg.last_mag > 0.0 && at > neg.last_mag && at >= neg.peak) {
                // genuine divergence shows as a long run of new maxima; short
                // growth phases occur before the peak of any x^e-weighted term
                if (++neg.grow >= std::max(30, 3 * ctx.decay_window)) {
                    res.status = IntegralStatus::kDivergent;
                    break;
                }
            } else {
                neg.grow = 0;
            }
            if (neg.last_mag > 0.0 && at > 0.0) neg.ratio = at / neg.last_mag;
            neg.last_mag = at;
        }
        res.k_neg_used = std::max(k, k_lo_lim);
        const bool neg_windowed = k_lo_lim > std::numeric_limits<int>::min() / 4 &&
                                  k_lo_lim > -ctx.max_lattice_index;
        if (!neg_stopped && res.status == IntegralStatus::kConverged && !neg_windowed)
            res.status = IntegralStatus::kCapped;
        if (!neg_stopped && neg_windowed && res.status == IntegralStatus::kConverged &&
            neg.shrink == 0 &&
            neg.last_mag > ctx.tail_rel_tol * std::max(std::abs(pos.sum + neg.sum), 1e-300))
            res.status = IntegralStatus::kCapped;
    }

    res.value = (1.0 - ctx.q) * (pos.sum + neg.sum);
    res.term_scale = (1.0 - ctx.q) * std::max(pos.peak, neg.peak);
    // geometric extrapolation of the discarded tails from the last ratios
    double tail = 0.0;
    if (pos.last_mag > 0.0) {
        const double r = std::min(std::max(pos.ratio, ctx.q), 0.99);
        tail += pos.last_mag * r / (1.0 - r);
    }
    if (!bounded && neg.last_mag > 0.0 && res.status != IntegralStatus::kDivergent) {
        const double r = std::min(std::max(neg.ratio, 0.0), 0.99);
        tail += neg.last_mag * r / (1.0 - r);
    }
    res.tail_bound = (1.0 - ctx.q) * tail;
    return res;
}

double q_integral_log_abs(const std::function<double(int, int)>& log_abs_at, double gamma,
                          const QContext& ctx, bool bounded, int k_lo_lim, int k_hi_lim) {
    // log-sum-exp over log(q^k gamma) + log|f|, swept like the value path
    const double lq = std::log(ctx.q);
    const double lg = std::log(gamma);
    std::vector<double> logs;
    double peak = -std::numeric_limits<double>::infinity();
    const auto push = [&](int k) {
        double lt = k * lq + lg;
        const double lp = log_abs_at(1, k);
        const double lm = log_abs_at(-1, k);
        const double top = std::max(lp, lm);
        if (!std::isfinite(top)) return top;  // -inf term
        lt += top + std::log(std::exp(lp - top) + std::exp(lm - top));
        logs.push_back(lt);
        peak = std::max(peak, lt);
        return lt;
    };
    const double stop_gap = std::log(ctx.tail_rel_tol);
    int quiet = 0;
    for (int k = 0; k <= std::min(k_hi_lim, ctx.max_lattice_index); ++k) {
        const double lt = push(k);
        if (!std::isfinite(lt) || lt < peak + stop_gap) {
            if (++quiet >= ctx.decay_window) break;
        } else {
            quiet = 0;
        }
    }
    if (!bounded) {
        quiet = 0;
        for (int k = -1; k >= std::max(k_lo_lim, -ctx.max_lattice_index); --k) {
            const double lt = push(k);
            if (!std::isfinite(lt) || lt < peak + stop_gap) {
                if (++quiet >= ctx.decay_window) break;
            } else {
                quiet = 0;
            }
        }
    }
    if (logs.empty()) return -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (const double lt : logs) s += std::exp(lt - peak);
    return peak + std::log(s) + std::log1p(-ctx.q);
}

QIntegralResult q_integral_unbounded(const LatticeFunction& f, double gamma, const QContext& ctx) {
    return q_integral_terms([&](int eps, int k) { return f.at(eps, k, ctx); }, gamma, ctx,
                            f.parity(), /*bounded=*/false, f.k_lo(), f.k_hi());
}

QIntegralResult q_integral_bounded(const LatticeFunction& f, double gamma, const QContext& ctx) {
    return q_integral_terms([&](int eps, int k) { return f.at(eps, k, ctx); }, gamma, ctx,
                            f.parity(), /*bounded=*/true, f.k_lo(), f.k_hi());
}

// ---------------------------------------------------------------------------

LatticeFunction sample_to_table(const LatticeFunction& f, int k_lo, int k_hi, const QContext& ctx) {
    if (k_hi < k_lo) throw DomainError("sample_to_table: empty window");
    std::vector<cplx> plus, minus;
    plus.reserve(k_hi - k_lo + 1);
    minus.reserve(k_hi - k_lo + 1);
    for (int k = k_lo; k <= k_hi; ++k) {
        plus.push_back(f.at(1, k, ctx));
        minus.push_back(f.at(-1, k, ctx));
    }
    return LatticeFunction::table(f.gamma(), k_lo, std::move(plus), std::move(minus), f.parity());
}

void table_to_csv(const LatticeFunction& f, std::ostream& os) {
    if (!f.is_table()) throw DomainError("table_to_csv: not a table");
    os << "epsilon,k,re,im\n";
    os.precision(17);
    os << std::scientific;
    QContext dummy(0.5);
    for (int eps : {1, -1})
        for (int k = f.k_lo(); k <= f.k_hi(); ++k) {
            const cplx v = f.at(eps, k, dummy);
            os << eps << ',' << k << ',' << v.real() << ',' << v.imag() << '\n';
        }
}

LatticeFunction table_from_csv(std::istream& is, double gamma, Parity parity) {
    std::string line;
    if (!std::getline(is, line)) throw DomainError("table_from_csv: empty input");
    // normalize header (strip whitespace/CR)
    std::string hdr;
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) hdr += c;
    if (hdr != "epsilon,k,re,im")
        throw DomainError("table_from_csv: header row 'epsilon,k,re,im' is mandatory");
    struct Row {
        int eps, k;
        cplx v;
    };
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        Row r;
        std::getline(ls, cell, ',');
        r.eps = std::stoi(cell);
        std::getline(ls, cell, ',');
        r.k = std::stoi(cell);
        std::getline(ls, cell, ',');
        const double re = std::stod(cell);
        std::getline(ls, cell, ',');
        const double im = std::stod(cell);
        r.v = {re, im};
        rows.push_back(r);
    }
    if (rows.empty()) throw DomainError("table_from_csv: no rows");
    int lo = rows.front().k, hi = rows.front().k;
    for (const auto& r : rows) {
        lo = std::min(lo, r.k);
        hi = std::max(hi, r.k);
    }
    std::vector<cplx> plus(hi - lo + 1), minus(hi - lo + 1);
    std::vector<bool> seen_p(hi - lo + 1, false), seen_m(hi - lo + 1, false);
    for (const auto& r : rows) {
        if (r.eps == 1) {
            plus[r.k - lo] = r.v;
            seen_p[r.k - lo] = true;
        } else if (r.eps == -1) {
            minus[r.k - lo] = r.v;
            seen_m[r.k - lo] = true;
        } else {
            throw DomainError("table_from_csv: epsilon must be +-1");
        }
    }
    for (std::size_t i = 0; i < seen_p.size(); ++i)
        if (!seen_p[i] || !seen_m[i])
            throw DomainError("table_from_csv: window has gaps");
    return LatticeFunction::table(gamma, lo, std::move(plus), std::move(minus), parity);
}

}  // namespace qconv
