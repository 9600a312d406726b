#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qconv/qcore.hpp"
#include "qconv/series.hpp"

// The q-lattice L(gamma) = { +-q^k gamma : k in Z }, functions sampled or
// defined on it, the exact lattice operators (q-derivative, q-shift) and the
// bounded/unbounded Jackson q-integrals with adaptive truncation.

namespace qconv {

struct WindowExceeded : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct ZeroPoint : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Parity { kNone, kEven, kOdd };
enum class Analyticity { kEntire, kDisk, kStrip, kLatticeOnly };
enum class IntegralStatus { kConverged, kDivergent, kCapped };

struct Lattice {
    double gamma;
    explicit Lattice(double g) : gamma(g) {
        if (!(g > 0.0)) throw DomainError("Lattice: gamma must be positive");
    }
};

struct LatticePoint {
    int epsilon;  // +1 or -1
    int k;
    double value;  // epsilon * q^k * gamma, cached at construction

    LatticePoint(int eps, int k_, double gamma, const QContext& ctx)
        : epsilon(eps), k(k_), value(eps * std::pow(ctx.q, k_) * gamma) {
        if (eps != 1 && eps != -1) throw DomainError("LatticePoint: epsilon must be +-1");
    }
};

/// A complex-valued function known on L(gamma): either a Rule (evaluator plus
/// analyticity tag, optionally with an attached power series) or a Table of
/// samples over an index window for both signs.
class LatticeFunction {
public:
    using Evaluator = std::function<cplx(cplx)>;

    static LatticeFunction rule(Evaluator f, double gamma, Analyticity tag,
                                double analyticity_param = std::numeric_limits<double>::infinity(),
                                Parity parity = Parity::kNone);

    static LatticeFunction table(double gamma, int k_lo, std::vector<cplx> plus_values,
                                 std::vector<cplx> minus_values, Parity parity = Parity::kNone);

    LatticeFunction& with_series(PowerSeries ps) {
        series_ = std::move(ps);
        return *this;
    }

    /// index-aware evaluator (eps, k) -> f(eps q^k gamma); used by lattice
    /// operations for functions whose value at +-q^k gamma is hypersensitive
    /// to rounding of the point itself
    LatticeFunction& with_lattice_rule(std::function<cplx(int, int)> lr) {
        lattice_rule_ = std::move(lr);
        return *this;
    }

    /// closed-form derivative (x, e) -> (d^e f)(x); keeps high orders exact
    /// where the raw difference quotient runs out of double precision
    LatticeFunction& with_derivative_rule(std::function<cplx(cplx, unsigned)> dr) {
        derivative_rule_ = std::move(dr);
        return *this;
    }
    /// index-form derivative (eps, k, e) -> (d^e f)(eps q^k gamma)
    LatticeFunction& with_lattice_derivative_rule(std::function<cplx(int, int, unsigned)> dr) {
        lattice_derivative_rule_ = std::move(dr);
        return *this;
    }
    const std::optional<std::function<cplx(cplx, unsigned)>>& derivative_rule() const {
        return derivative_rule_;
    }
    const std::optional<std::function<cplx(int, int, unsigned)>>& lattice_derivative_rule() const {
        return lattice_derivative_rule_;
    }

    bool is_table() const { return !rule_; }
    double gamma() const { return gamma_; }
    Parity parity() const { return parity_; }
    Analyticity tag() const { return tag_; }
    double analyticity_param() const { return a_; }
    const std::optional<PowerSeries>& series() const { return series_; }

    /// table index window; rules report the widest representable window
    int k_lo() const { return k_lo_; }
    int k_hi() const { return k_hi_; }

    /// value at the lattice point eps * q^k * gamma
    cplx at(int eps, int k, const QContext& ctx) const;

    /// rule evaluation at arbitrary x; tables accept lattice points only
    cplx operator()(cplx x) const { return eval(x); }
    cplx eval(cplx x) const;

private:
    LatticeFunction() = default;

    std::optional<Evaluator> rule_;
    std::optional<std::function<cplx(int, int)>> lattice_rule_;
    std::optional<std::function<cplx(cplx, unsigned)>> derivative_rule_;
    std::optional<std::function<cplx(int, int, unsigned)>> lattice_derivative_rule_;
    std::optional<PowerSeries> series_;
    double gamma_ = 1.0;
    Analyticity tag_ = Analyticity::kLatticeOnly;
    double a_ = std::numeric_limits<double>::infinity();
    Parity parity_ = Parity::kNone;
    int k_lo_ = 0, k_hi_ = -1;
    std::vector<cplx> plus_, minus_;
};

struct QIntegralResult {
    cplx value{0.0, 0.0};
    int k_neg_used = 0;
    int k_pos_used = 0;
    double tail_bound = 0.0;
    double term_scale = 0.0;  // largest weighted term seen during the sweep
    IntegralStatus status = IntegralStatus::kConverged;
};

// ---------------------------------------------------------------------------
// exact lattice operators

/// (d f)(x) = (f(x) - f(qx)) / ((1-q)x); higher orders by recursion.
/// Rules with an attached series evaluate x = 0 by coefficient shift.
cplx q_derivative(const LatticeFunction& f, cplx x, unsigned order, const QContext& ctx);
cplx q_derivative(const LatticeFunction& f, const LatticePoint& x, unsigned order,
                  const QContext& ctx);

/// (Q^n f)(x) = f(q^n x); q_shift(q_shift(f,n),-n) == f pointwise.
LatticeFunction q_shift(const LatticeFunction& f, int n, const QContext& ctx);

// ---------------------------------------------------------------------------
// Jackson q-integrals

/// (1-q) sum_{k in Z} sum_{eps} q^k gamma f(eps q^k gamma), summed outward
/// from k=0, with per-direction decay-window truncation.
QIntegralResult q_integral_unbounded(const LatticeFunction& f, double gamma, const QContext& ctx);

/// bounded variant over { +-gamma q^k : k >= 0 }
QIntegralResult q_integral_bounded(const LatticeFunction& f, double gamma, const QContext& ctx);

/// generic sweep over an arbitrary per-point value source (eps, k) -> value;
/// parity kOdd short-circuits to exact zero, kEven sums one sign doubled.
QIntegralResult q_integral_terms(const std::function<cplx(int, int)>& value_at, double gamma,
                                 const QContext& ctx, Parity parity, bool bounded, int k_lo_lim,
                                 int k_hi_lim);

/// log-magnitude sweep for nonnegative integrands: returns log of the
/// integral via log-sum-exp; usable far below double underflow.
double q_integral_log_abs(const std::function<double(int, int)>& log_abs_at, double gamma,
                          const QContext& ctx, bool bounded, int k_lo_lim, int k_hi_lim);

// ---------------------------------------------------------------------------
// derivative ladder: all orders of d^e f at one base point, computed once
// from the triangular difference scheme. Used by the convolution series.
class DerivativeLadder {
public:
    /// base point x = eps q^k gamma (lattice) for tables, or any x != 0 for rules
    DerivativeLadder(const LatticeFunction& f, int eps, int k, const QContext& ctx);

    /// (d^e f)(x); WindowExceeded when a table window is too short
    cplx derivative(unsigned e);
    /// highest order available without exceeding the table window
    int max_order() const;

private:
    void extend(std::size_t need);

    const LatticeFunction& f_;
    QContext ctx_;
    int eps_, k_;
    std::vector<cplx> base_;    // f(q^{k+j} x0), j = 0..n
    std::vector<cplx> derivs_;  // (d^e f)(x0)
};

// ---------------------------------------------------------------------------
// Table I/O and sampling

/// sample a rule into a table over [k_lo, k_hi]
LatticeFunction sample_to_table(const LatticeFunction& f, int k_lo, int k_hi, const QContext& ctx);

/// CSV columns: epsilon,k,re,im with header row; 17 significant digits
void table_to_csv(const LatticeFunction& f, std::ostream& os);
LatticeFunction table_from_csv(std::istream& is, double gamma, Parity parity = Parity::kNone);

}  // namespace qconv
