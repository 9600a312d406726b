#pragma once

#include "qconv/lattice.hpp"
#include "qconv/moments.hpp"
#include "qconv/qcore.hpp"
#include "qconv/series.hpp"

// The q-convolution product in pointwise and power-series form, its moments,
// type propagation, and commutator diagnostics. The asymmetry of the product
// is kept in the API: the left factor enters only through its moments, the
// right factor as an evaluable function.

namespace qconv {

struct DivergentSeries : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ConvStatus { kConverged, kCapped, kInputExhausted };

struct ConvolutionResult {
    cplx value{0.0, 0.0};
    int terms_used = 0;
    double tail_bound = 0.0;
    ConvStatus status = ConvStatus::kConverged;
};

/// (f *_gamma g)(x) = sum_e (-1)^e mu_{e,gamma}(f)/[e]_q! (d^e g)(x).
/// Lattice x uses the exact difference-quotient ladder; x = 0 requires a
/// series-backed g (analytic continuation); tables report kInputExhausted
/// when their window cannot supply the orders the tail rule demands.
ConvolutionResult convolve_at(const MomentSequence& fm, const LatticeFunction& g, cplx x,
                              const QContext& ctx);
ConvolutionResult convolve_at(const MomentSequence& fm, const LatticeFunction& g,
                              const LatticePoint& x, const QContext& ctx);

/// coefficient form: b_p = sum_e (-1)^e mu_e qbinom(p+e,e) c_{p+e}
PowerSeries convolve_series(const MomentSequence& fm, const PowerSeries& g, const QContext& ctx);

/// mu_{k}(f *_gamma g) = sum_e qbinom(k,e) mu_{e,gamma}(f) mu_{k-e,gamma'}(g)
cplx convolution_moment(const MomentSequence& fm, const MomentSequence& gm, unsigned k,
                        const QContext& ctx);

/// eta with 1/eta = 1/alpha + 1/beta
double predicted_type(double alpha, double beta);

/// (f *_gamma g)(x) - (g *_gamma f)(x)
cplx commutator_at(const MomentSequence& fm, const MomentSequence& gm, const LatticeFunction& f,
                   const LatticeFunction& g, const LatticePoint& x, const QContext& ctx);

/// f~_lambda(i) = sum_k mu_{k,gamma}(f) (i lambda)^k / (q;q)_k
cplx lambda_probe(const MomentSequence& fm, cplx lambda, const QContext& ctx);

}  // namespace qconv
