#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qconv/lattice.hpp"
#include "qconv/qcore.hpp"

// Moments and strict moments, the left-type / strict-left-type classifier,
// and the pointwise-decay characterization.

namespace qconv {

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotOfLeftType : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EvaluationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MomentKind { kLeft, kStrictLeft };

struct MomentEntry {
    unsigned e = 0;
    cplx mu{0.0, 0.0};
    double nu = 0.0;
    double log_abs_mu = -std::numeric_limits<double>::infinity();
    double log_nu = -std::numeric_limits<double>::infinity();
    IntegralStatus status_mu = IntegralStatus::kConverged;
    IntegralStatus status_nu = IntegralStatus::kConverged;
};

struct MomentSequence {
    double gamma = 1.0;
    double q = 0.5;
    std::vector<MomentEntry> entries;  // orders 0..E

    unsigned max_order() const {
        return entries.empty() ? 0 : static_cast<unsigned>(entries.size() - 1);
    }
    const MomentEntry& at(unsigned e) const {
        if (e >= entries.size()) throw RangeError("MomentSequence: order out of range");
        return entries[e];
    }
    cplx mu(unsigned e) const { return at(e).mu; }
    double nu(unsigned e) const { return at(e).nu; }
};

struct TypeClassification {
    MomentKind kind = MomentKind::kStrictLeft;
    double alpha_hat = 0.0;
    double b_hat = 0.0;
    double residual = 0.0;
    std::optional<double> beta;  // 1/(1-alpha) when alpha < 1
};

struct DecayReport {
    bool zero_tail = false;        // all sampled f(+-q^{-j}g) vanish (type >= 1 case)
    double fitted_beta = 0.0;      // from log|f(+-q^{-j}g)| ~ (beta/2) j^2 log q + j log c
    double fitted_c = 0.0;
    double expected_beta = 0.0;    // 1/(1-alpha), when alpha < 1
    bool forward_consistent = false;
    double converse_alpha = 0.0;   // 1 - 1/fitted_beta
    bool bounded_on_small_side = false;
    double bound_on_small_side = 0.0;
};

// ---------------------------------------------------------------------------

/// mu_{e,gamma}(f) = q^{(e^2+e)/2} int_gamma f(x) x^e d_q x
cplx moment(const LatticeFunction& f, unsigned e, double gamma, const QContext& ctx);

/// nu_{e,gamma}(f): the strict moment, same with integrand |f(x) x^e|
double strict_moment(const LatticeFunction& f, unsigned e, double gamma, const QContext& ctx);

/// Fill entries 0..E, with per-entry convergence status and the log channel.
MomentSequence moment_sequence(const LatticeFunction& f, unsigned E, double gamma,
                               const QContext& ctx);

/// Least-squares fit log m_e ~ (alpha/2) e^2 log q + e log b + const over the
/// top half of nonzero entries; beta = 1/(1-alpha) when alpha < 1.
TypeClassification classify_type(const MomentSequence& ms, MomentKind kind,
                                 double residual_threshold = 0.5);

/// Proposition 5.1 both ways: forward (type alpha implies q^{(beta/2)j^2} c^j
/// pointwise decay along +-q^{-j}gamma) and converse (decay plus boundedness
/// on the small side certifies strict type 1 - 1/beta).
DecayReport pointwise_decay_check(const LatticeFunction& f, double gamma, double alpha,
                                  int j_max, const QContext& ctx);

/// mu_{l,gamma}(d^k f): zero when l < k, else the closed form
/// (-1)^k ([l]_q!/[l-k]_q!) mu_{l-k,gamma}(f).
cplx derivative_moment(const MomentSequence& ms, unsigned l, unsigned k, const QContext& ctx);

/// mu_{e,gamma}(f X^k) = q^{-k^2/2 - k/2 - ek} mu_{k+e,gamma}(f)
cplx xk_multiplied_moment(const MomentSequence& ms, unsigned e, unsigned k, const QContext& ctx);

/// JSON export: {gamma, q, entries:[{e, mu_re, mu_im, nu, log_abs_mu, status}]}
std::string to_json(const MomentSequence& ms);

}  // namespace qconv
