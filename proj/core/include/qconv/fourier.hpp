#pragma once

#include <functional>

#include "qconv/lattice.hpp"
#include "qconv/moments.hpp"
#include "qconv/series.hpp"

// q-Fourier transforms: the integral form with kernel E_q(iqxy), the
// moment-series form, the inverse transform, and the homomorphism check.

namespace qconv {

enum class FourierForm { kIntegral, kSeries };

struct FourierResult {
    cplx value{0.0, 0.0};
    FourierForm form = FourierForm::kIntegral;
    IntegralStatus status = IntegralStatus::kConverged;
};

/// F_gamma f(y) = int_gamma E_q(iqxy) f(x) d_q x
FourierResult fourier_integral(const LatticeFunction& f, double gamma, cplx y,
                               const QContext& ctx);

/// F~_gamma f(y) = sum_k mu_{k,gamma}(f) (iy)^k / (q;q)_k ; entire in y
FourierResult fourier_series(const MomentSequence& fm, cplx y, const QContext& ctx);

/// psi(x) = (1/(c_q(gamma) b_q)) int_{-1}^{1} e_q(-ixy) phi(y) d_q y;
/// phi is evaluated on the bounded lattice {+-q^k : k >= 0}
cplx fourier_inverse(const std::function<cplx(double)>& phi, cplx x, double gamma,
                     const QContext& ctx);
cplx fourier_inverse(const PowerSeries& phi, cplx x, double gamma, const QContext& ctx);

struct HomomorphismReport {
    cplx lhs{0.0, 0.0};  // series transform of the convolution moments (Eq.-(4.2) route)
    cplx rhs{0.0, 0.0};  // product of the two series transforms
    double difference = 0.0;
};

/// F~(f * g)(y) versus F~f(y) F~g(y), both sides by independent code paths
HomomorphismReport homomorphism_check(const MomentSequence& fm, const MomentSequence& gm, cplx y,
                                      const QContext& ctx);

}  // namespace qconv
