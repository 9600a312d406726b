#include "precise.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace qconv::detail {

namespace {

// common loop: x2 already holds x^2 at working precision
double sum_alternating(mpfr_t x2, double q, long prec) {
    mpfr_t qm, s, t, qk, q2k, one_minus, thresh, abs_t, abs_s;
    mpfr_inits2(prec, qm, s, t, qk, q2k, one_minus, thresh, abs_t, abs_s,
                static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(qm, q, MPFR_RNDN);

    mpfr_set_ui(s, 0, MPFR_RNDN);
    mpfr_set_ui(t, 1, MPFR_RNDN);
    mpfr_set_ui(qk, 1, MPFR_RNDN);
    mpfr_set_d(q2k, q * q, MPFR_RNDN);  // q^{2k+2}

    const long max_terms = 400000;
    for (long k = 0; k < max_terms; ++k) {
        mpfr_add(s, s, t, MPFR_RNDN);
        mpfr_set_ui(one_minus, 1, MPFR_RNDN);
        mpfr_sub(one_minus, one_minus, q2k, MPFR_RNDN);
        mpfr_mul(t, t, qk, MPFR_RNDN);
        mpfr_mul(t, t, x2, MPFR_RNDN);
        mpfr_div(t, t, one_minus, MPFR_RNDN);
        mpfr_neg(t, t, MPFR_RNDN);
        mpfr_mul(qk, qk, qm, MPFR_RNDN);
        mpfr_mul(q2k, q2k, qm, MPFR_RNDN);
        mpfr_mul(q2k, q2k, qm, MPFR_RNDN);
        if (k > 8) {
            mpfr_abs(abs_t, t, MPFR_RNDN);
            mpfr_abs(abs_s, s, MPFR_RNDN);
            mpfr_mul_2si(thresh, abs_s, -(prec - 16), MPFR_RNDN);
            if (!mpfr_zero_p(abs_s) && mpfr_cmp(abs_t, thresh) < 0) break;
            if (mpfr_zero_p(abs_s) && mpfr_cmp_d(abs_t, 1e-320) < 0) break;
        }
    }
    const double out = mpfr_get_d(s, MPFR_RNDN);
    mpfr_clears(qm, s, t, qk, q2k, one_minus, thresh, abs_t, abs_s,
                static_cast<mpfr_ptr>(nullptr));
    return out;
}

long precision_for(double lost_bits) {
    return std::min(2000000L, 96L + static_cast<long>(std::ceil(lost_bits)));
}

}  // namespace

double alternating_gauss_cal_dyadic(double q, double x, double lost_bits) {
    const long prec = precision_for(lost_bits);
    mpfr_t x2;
    mpfr_init2(x2, prec);
    mpfr_set_d(x2, x, MPFR_RNDN);  // doubles are exact dyadic rationals
    mpfr_sqr(x2, x2, MPFR_RNDN);
    const double out = sum_alternating(x2, q, prec);
    mpfr_clear(x2);
    return out;
}

double alternating_gauss_cal_lattice(double q, int j, double gamma, double lost_bits) {
    const long prec = precision_for(lost_bits);
    mpfr_t x2, qm;
    mpfr_inits2(prec, x2, qm, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(qm, q, MPFR_RNDN);
    mpfr_pow_si(x2, qm, j, MPFR_RNDN);  // exact lattice point q^j gamma
    mpfr_mul_d(x2, x2, gamma, MPFR_RNDN);
    mpfr_sqr(x2, x2, MPFR_RNDN);
    const double out = sum_alternating(x2, q, prec);
    mpfr_clears(x2, qm, static_cast<mpfr_ptr>(nullptr));
    return out;
}

namespace {

// one high-precision ladder pass at base index k: all orders 0..emax
std::vector<double> alt_derivative_row(double q, int k, unsigned emax) {
    const unsigned e = emax;
    const double att = (0.5 * e * (e - 1.0) + std::abs(static_cast<double>(k)) * e + 4.0 * e) *
                       std::log2(1.0 / q);
    const long prec = std::min(2000000L, 128L + static_cast<long>(std::ceil(att)));
    mpfr_t qm, tmp, prod, a, fac, x0;
    mpfr_inits2(prec, qm, tmp, prod, a, fac, x0, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(qm, q, MPFR_RNDN);
    std::unique_ptr<mpfr_t[]> row(new mpfr_t[e + 1]);
    const long tail = static_cast<long>(prec / std::log2(1.0 / q)) + 8;
    for (unsigned j = 0; j <= e; ++j) {
        mpfr_init2(row[j], prec);
        const int m = k + static_cast<int>(j);
        mpfr_pow_si(a, qm, 2 * m, MPFR_RNDN);
        mpfr_set_ui(prod, 1, MPFR_RNDN);
        const long cutoff = 2 * std::labs(m) + tail;
        for (long i = 0; i <= cutoff; ++i) {
            mpfr_add_ui(fac, a, 1, MPFR_RNDN);
            mpfr_mul(prod, prod, fac, MPFR_RNDN);
            mpfr_mul(a, a, qm, MPFR_RNDN);
            mpfr_mul(a, a, qm, MPFR_RNDN);
        }
        mpfr_pow_si(row[j], qm, m, MPFR_RNDN);
        mpfr_div(row[j], row[j], prod, MPFR_RNDN);
        if (m & 1) mpfr_neg(row[j], row[j], MPFR_RNDN);
    }
    std::vector<double> out(e + 1);
    out[0] = mpfr_get_d(row[0], MPFR_RNDN);
    for (unsigned level = 1; level <= e; ++level) {
        for (unsigned j = 0; j + level <= e; ++j) {
            mpfr_sub(tmp, row[j], row[j + 1], MPFR_RNDN);
            mpfr_pow_si(x0, qm, k + static_cast<int>(j), MPFR_RNDN);
            mpfr_mul_d(x0, x0, 1.0 - q, MPFR_RNDN);
            mpfr_div(row[j], tmp, x0, MPFR_RNDN);
        }
        out[level] = mpfr_get_d(row[0], MPFR_RNDN);
    }
    for (unsigned j = 0; j <= e; ++j) mpfr_clear(row[j]);
    mpfr_clears(qm, tmp, prod, a, fac, x0, static_cast<mpfr_ptr>(nullptr));
    return out;
}

}  // namespace

double AltDerivativeCache::derivative(int eps, int k, unsigned e) {
    (void)eps;  // the example takes equal values on both signs
    std::lock_guard<std::mutex> lock(mu_);
    constexpr unsigned emax = 72;
    if (e > emax) throw std::out_of_range("AltDerivativeCache: order cap");
    auto it = rows_.find(k);
    if (it == rows_.end()) it = rows_.emplace(k, alt_derivative_row(q_, k, emax)).first;
    return it->second[e];
}

double alt_example_derivative(double q, int eps, int k, unsigned e) {
    const double att = (0.5 * e * (e - 1.0) + std::abs(static_cast<double>(k)) * e + 4.0 * e) *
                       std::log2(1.0 / q);
    const long prec = std::min(2000000L, 128L + static_cast<long>(std::ceil(att)));
    mpfr_t qm, tmp, prod, a, fac, x0;
    mpfr_inits2(prec, qm, tmp, prod, a, fac, x0, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(qm, q, MPFR_RNDN);

    // row of g(q^{k+j}) values; g(+-q^m) = (-1)^m q^m / (-q^{2m}; q^2)_inf
    std::unique_ptr<mpfr_t[]> row(new mpfr_t[e + 1]);
    const long tail = static_cast<long>(prec / std::log2(1.0 / q)) + 8;
    for (unsigned j = 0; j <= e; ++j) {
        mpfr_init2(row[j], prec);
        const int m = k + static_cast<int>(j);
        mpfr_pow_si(a, qm, 2 * m, MPFR_RNDN);
        mpfr_set_ui(prod, 1, MPFR_RNDN);
        const long cutoff = 2 * std::labs(m) + tail;
        for (long i = 0; i <= cutoff; ++i) {
            mpfr_add_ui(fac, a, 1, MPFR_RNDN);
            mpfr_mul(prod, prod, fac, MPFR_RNDN);
            mpfr_mul(a, a, qm, MPFR_RNDN);
            mpfr_mul(a, a, qm, MPFR_RNDN);
        }
        mpfr_pow_si(row[j], qm, m, MPFR_RNDN);
        mpfr_div(row[j], row[j], prod, MPFR_RNDN);
        if (m & 1) mpfr_neg(row[j], row[j], MPFR_RNDN);
    }
    // ladder: row[j] <- (row[j] - row[j+1]) / ((1-q) eps q^{k+j})
    for (unsigned level = 1; level <= e; ++level) {
        for (unsigned j = 0; j + level <= e; ++j) {
            mpfr_sub(tmp, row[j], row[j + 1], MPFR_RNDN);
            mpfr_pow_si(x0, qm, k + static_cast<int>(j), MPFR_RNDN);
            mpfr_mul_d(x0, x0, (1.0 - q) * eps, MPFR_RNDN);
            mpfr_div(row[j], tmp, x0, MPFR_RNDN);
        }
    }
    const double out = mpfr_get_d(row[0], MPFR_RNDN);
    for (unsigned j = 0; j <= e; ++j) mpfr_clear(row[j]);
    mpfr_clears(qm, tmp, prod, a, fac, x0, static_cast<mpfr_ptr>(nullptr));
    return out;
}

}  // namespace qconv::detail
