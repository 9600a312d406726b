#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

// Base q-arithmetic: Pochhammer symbols, q-numbers, q-factorials,
// q-binomials and the two normalization constants b_q, c_q(gamma).
//
// All functions are pure; QContext is immutable after construction.

namespace qconv {

using cplx = std::complex<double>;

inline constexpr unsigned k_infinity = std::numeric_limits<unsigned>::max();

// ---------------------------------------------------------------------------
// errors

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// ---------------------------------------------------------------------------
// context

/// Fixed base q in (0,1) plus all truncation/tolerance policy.
struct QContext {
    double q;
    double tail_rel_tol = 1e-14;
    int max_terms = 10000;
    int decay_window = 5;
    int max_lattice_index = 400;

    explicit QContext(double q_, double tail_rel_tol_ = 1e-14, int max_terms_ = 10000,
                      int decay_window_ = 5, int max_lattice_index_ = 400)
        : q(q_), tail_rel_tol(tail_rel_tol_), max_terms(max_terms_),
          decay_window(decay_window_), max_lattice_index(max_lattice_index_) {
        if (!(q > 0.0 && q < 1.0))
            throw DomainError("QContext: q must lie strictly inside (0,1)");
        if (!(tail_rel_tol > 0.0))
            throw DomainError("QContext: tail_rel_tol must be positive");
        if (decay_window < 2 || max_terms < decay_window)
            throw DomainError("QContext: need max_terms >= decay_window >= 2");
        if (max_lattice_index <= 0)
            throw DomainError("QContext: max_lattice_index must be positive");
    }
};

struct QConstants {
    double b_q;
    double c_q_gamma;
    double gamma;
};

// ---------------------------------------------------------------------------
// Pochhammer symbols and q-numbers

/// (a;q)_k = prod_{j<k} (1 - a q^j); k = k_infinity for the infinite product.
/// Infinite products snap to an exact zero when a factor vanishes to rounding
/// (lattice arguments of E_q-type products hit zero factors).
cplx q_pochhammer(cplx a, unsigned k, const QContext& ctx);

/// log |(a;q)_inf| for real a with a < 1 (all factors positive).
double log_q_pochhammer_inf(double a, const QContext& ctx);

/// [k]_q = (1-q^k)/(1-q)
double q_number(int k, const QContext& ctx);

/// [k]_q! = (q;q)_k / (1-q)^k
double q_factorial(unsigned k, const QContext& ctx);

/// log [k]_q!
double log_q_factorial(unsigned k, const QContext& ctx);

/// Gaussian binomial (q;q)_n / ((q;q)_k (q;q)_{n-k}); symmetric in k <-> n-k.
double q_binomial(unsigned n, unsigned k, const QContext& ctx);

// ---------------------------------------------------------------------------
// normalization constants

/// b_q = (1-q) (q,-q,-1;q)_inf
double constant_bq(const QContext& ctx);

/// c_q(gamma) = 2(1-q) (q^2,-q g^2,-q g^{-2};q^2)_inf g / (-g^2,-q^2/g^2,q;q^2)_inf
double constant_cq(double gamma, const QContext& ctx);

}  // namespace qconv
