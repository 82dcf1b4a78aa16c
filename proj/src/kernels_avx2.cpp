#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "kernels_impl.hpp"

// AVX2/FMA kernel variants. Compiled with -mavx2 -mfma in its own TU and
// only reachable through the dispatcher after a runtime CPU check.
namespace rsl::kernels::detail {
namespace {

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

// Kahan-Babuska-Neumaier running sum, four independent lanes.
struct Accum4 {
    __m256d s = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();

    inline void add(__m256d y) {
        const __m256d abs_mask =
            _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
        const __m256d t = _mm256_add_pd(s, y);
        const __m256d big_s = _mm256_cmp_pd(_mm256_and_pd(s, abs_mask),
                                            _mm256_and_pd(y, abs_mask), _CMP_GE_OQ);
        const __m256d err_s = _mm256_add_pd(_mm256_sub_pd(s, t), y);
        const __m256d err_y = _mm256_add_pd(_mm256_sub_pd(y, t), s);
        c = _mm256_add_pd(c, _mm256_blendv_pd(err_y, err_s, big_s));
        s = t;
    }
};

inline void neumaier_add(double& s, double& c, double y) {
    const double t = s + y;
    if (std::abs(s) >= std::abs(y))
        c += (s - t) + y;
    else
        c += (y - t) + s;
    s = t;
}

inline double reduce(const Accum4& acc, double tail_s, double tail_c) {
    alignas(32) double sv[4], cv[4];
    _mm256_store_pd(sv, acc.s);
    _mm256_store_pd(cv, acc.c);
    double s = 0.0, c = 0.0;
    for (double v : sv) neumaier_add(s, c, v);
    for (double v : cv) neumaier_add(s, c, v);
    neumaier_add(s, c, tail_s);
    neumaier_add(s, c, tail_c);
    return s + c;
}

// exp(x) for |x| <= 700: r = x - n*ln2 reduced to |r| <= ln2/2, degree-13
// Taylor polynomial, then scaled by 2^n through the exponent bits.
inline __m256d vexp(__m256d x) {
    const __m256d log2e = set1(1.4426950408889634074);
    const __m256d ln2_hi = set1(6.93147180369123816490e-01);
    const __m256d ln2_lo = set1(1.90821492927058770002e-10);

    x = _mm256_min_pd(x, set1(700.0));
    x = _mm256_max_pd(x, set1(-700.0));

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    static constexpr double k_coeffs[14] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
        1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
        1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        1.0 / 2.0,
        1.0,                1.0,
    };
    __m256d p = set1(k_coeffs[0]);
    for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, set1(k_coeffs[i]));

    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i scale_bits =
        _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(scale_bits));
}

// log(x) for positive, finite, normal x: split into m * 2^e with
// m in [sqrt(1/2), sqrt(2)], then 2*atanh((m-1)/(m+1)) by odd series.
inline __m256d vlog(__m256d x) {
    const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000LL);
    const __m256d ln2_hi = set1(6.93147180369123816490e-01);
    const __m256d ln2_lo = set1(1.90821492927058770002e-10);

    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i expo64 = _mm256_srli_epi64(bits, 52);
    const __m256i packed = _mm256_permutevar8x32_epi32(
        expo64, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
    __m256d e = _mm256_cvtepi32_pd(
        _mm_sub_epi32(_mm256_castsi256_si128(packed), _mm_set1_epi32(1023)));

    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
    const __m256d above = _mm256_cmp_pd(m, set1(1.4142135623730951), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, set1(0.5)), above);
    e = _mm256_add_pd(e, _mm256_and_pd(above, set1(1.0)));

    const __m256d one = set1(1.0);
    const __m256d t =
        _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d w = _mm256_mul_pd(t, t);

    __m256d p = set1(2.0 / 19.0);
    p = _mm256_fmadd_pd(p, w, set1(2.0 / 17.0));
    p = _mm256_fmadd_pd(p, w, set1(2.0 / 15.0));
    p = _mm256_fmadd_pd(p, w, set1(2.0 / 13.0));
    p = _mm256_fmadd_pd(p, w, set1(2.0 / 11.0));
    p = _mm256_fmadd_pd(p, w, set1(2.0 / 9.0));
    p = _mm256_fmadd_pd(p, w, set1(2.0 / 7.0));
    p = _mm256_fmadd_pd(p, w, set1(2.0 / 5.0));
    p = _mm256_fmadd_pd(p, w, set1(2.0 / 3.0));
    p = _mm256_fmadd_pd(p, w, set1(2.0));
    const __m256d log_m = _mm256_mul_pd(t, p);

    return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, log_m));
}

double sum_f64(const double* x, std::size_t n) {
    Accum4 acc;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc.add(_mm256_loadu_pd(x + i));
    double ts = 0.0, tc = 0.0;
    for (; i < n; ++i) neumaier_add(ts, tc, x[i]);
    return reduce(acc, ts, tc);
}

std::uint64_t sum_u32(const std::uint32_t* x, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i v =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
        acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(v)));
        acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(v, 1)));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_dev_f64(const double* x, std::size_t n, double mean) {
    Accum4 acc;
    const __m256d mu = set1(mean);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), mu);
        acc.add(_mm256_mul_pd(d, d));
    }
    double ts = 0.0, tc = 0.0;
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        neumaier_add(ts, tc, d * d);
    }
    return reduce(acc, ts, tc);
}

double sum_sq_dev_u32(const std::uint32_t* x, std::size_t n, double mean) {
    Accum4 acc;
    const __m256d mu = set1(mean);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(x + i));
        // u32 -> f64 via the signed convert of (x - 2^31), shifted back
        const __m128i biased = _mm_xor_si128(v, _mm_set1_epi32(INT32_MIN));
        const __m256d d = _mm256_sub_pd(
            _mm256_add_pd(_mm256_cvtepi32_pd(biased), set1(2147483648.0)), mu);
        acc.add(_mm256_mul_pd(d, d));
    }
    double ts = 0.0, tc = 0.0;
    for (; i < n; ++i) {
        const double d = static_cast<double>(x[i]) - mean;
        neumaier_add(ts, tc, d * d);
    }
    return reduce(acc, ts, tc);
}

double weighted_log_sum(const double* w, const double* x, std::size_t n) {
    Accum4 acc;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc.add(_mm256_mul_pd(_mm256_loadu_pd(w + i), vlog(_mm256_loadu_pd(x + i))));
    double ts = 0.0, tc = 0.0;
    for (; i < n; ++i) neumaier_add(ts, tc, w[i] * std::log(x[i]));
    return reduce(acc, ts, tc);
}

void log_array(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, vlog(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = std::log(x[i]);
}

void exp_array(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, vexp(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void pow_table(std::uint32_t k0, double exponent, double* out, std::size_t n) {
    const __m256d expo = set1(exponent);
    const __m256d step = set1(4.0);
    __m256d k = _mm256_add_pd(set1(static_cast<double>(k0)),
                              _mm256_setr_pd(0.0, 1.0, 2.0, 3.0));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, vexp(_mm256_mul_pd(expo, vlog(k))));
        k = _mm256_add_pd(k, step);
    }
    for (; i < n; ++i)
        out[i] = std::pow(static_cast<double>(k0) + static_cast<double>(i), exponent);
}

}  // namespace

const Vtable avx2_vtable = {
    sum_f64, sum_u32,     sum_sq_dev_f64, sum_sq_dev_u32,
    weighted_log_sum, log_array, exp_array, pow_table,
};

}  // namespace rsl::kernels::detail
