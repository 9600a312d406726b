#pragma once

#include <vector>

#include "qconv/lattice.hpp"
#include "qconv/series.hpp"

// Appendix machinery: deciding analytic extendability of a lattice function
// from uniform q-derivative bounds, extracting the derivative limits l_p, and
// reconstructing the power series.

namespace qconv {

struct NonConvergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EpsilonMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundCertificate {
    double r = 0.0;
    double C = 0.0;
    int checked_orders = 0;
    int t_lo = 0, t_hi = 0;
    bool holds = false;
    double worst_ratio = 0.0;  // max over (k,t) of |d^k g| / bound
};

struct DerivativeLimits {
    std::vector<cplx> l;                        // stored limits (plus-side convention)
    std::vector<double> convergence_evidence;   // drift of d^p g across the last anchors
    std::vector<double> epsilon_agreement;      // |l_p^+ - l_p^-| from per-sign estimates
    double agreement_tol = 0.0;                 // threshold used when estimating
    bool two_sided_ok = false;
};

/// Check |d^k g(eps q^t gamma)| <= C r / ((r - q^t gamma) r^k (1-q)^k)
/// for k <= k_max and every admissible t in the table window.
BoundCertificate certify_bounds(const LatticeFunction& g, double r, double C, int k_max,
                                const QContext& ctx);

/// log-spaced grid search over r in (gamma, 4 gamma], C in [1, 1e6]; returns
/// the certificate with the smallest worst_ratio (holds == false everywhere
/// is evidence, not proof, of non-extendability).
BoundCertificate certify_grid(const LatticeFunction& g, int k_max, const QContext& ctx);

/// Estimate l_p = lim_k (d^p g)(eps q^k gamma) for p <= P.
DerivativeLimits derivative_limits(const LatticeFunction& g, unsigned P, const QContext& ctx);

/// Sum_k (l_k/[k]_q!) x^k; EpsilonMismatch when the one-sided limits differ.
PowerSeries reconstruct_series(const DerivativeLimits& dl, const QContext& ctx);

}  // namespace qconv
