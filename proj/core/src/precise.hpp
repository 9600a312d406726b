#pragma once

#include <map>
#include <mutex>
#include <vector>

// Internal adaptive-precision evaluation for alternating q-series whose value
// is exponentially smaller than their largest term. Backed by MPFR; the
// precision is chosen from the analytically known term-magnitude profile.

namespace qconv::detail {

/// sum_{k>=0} (-1)^k q^{k(k-1)/2} x^{2k} / (q^2;q^2)_k  at real x, |x| > 1.
/// `lost_bits` is the caller's estimate of log2(max|term| / |value|).
/// The value at theta-style dips is hypersensitive to x, so x is specified
/// either as the exact dyadic double (general evaluation) or as the exact
/// lattice point q^j gamma, with q^j formed inside the working precision.
double alternating_gauss_cal_dyadic(double q, double x, double lost_bits);
double alternating_gauss_cal_lattice(double q, int j, double gamma, double lost_bits);

/// (d^e g)(eps q^k) for g(+-q^m) = (-1)^m q^m e_{q^2}(-q^{2m}) on L(1): the
/// exact difference-quotient ladder evaluated at a precision matched to the
/// q^{e(e-1)/2 + ke} signal attenuation of e-th differences.
double alt_example_derivative(double q, int eps, int k, unsigned e);

/// per-base-point cache of the ladder above; one high-precision pass yields
/// every order at once
class AltDerivativeCache {
public:
    explicit AltDerivativeCache(double q) : q_(q) {}
    double derivative(int eps, int k, unsigned e);

private:
    double q_;
    std::mutex mu_;
    std::map<int, std::vector<double>> rows_;  // sign-independent
};

}  // namespace qconv::detail
