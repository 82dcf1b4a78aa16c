#include <cmath>
#include <cstddef>
#include <cstdint>

#include "kernels_impl.hpp"

// Scalar reference kernels. These are the ground truth the AVX2 variants are
// equivalence-tested against, and the fallback on machines without AVX2.
namespace rsl::kernels::detail {
namespace {

double sum_f64(const double* x, std::size_t n) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = s + x[i];
        if (std::abs(s) >= std::abs(x[i]))
            c += (s - t) + x[i];
        else
            c += (x[i] - t) + s;
        s = t;
    }
    return s + c;
}

std::uint64_t sum_u32(const std::uint32_t* x, std::size_t n) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_dev_f64(const double* x, std::size_t n, double mean) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        const double y = d * d;
        const double t = s + y;
        if (s >= y)
            c += (s - t) + y;
        else
            c += (y - t) + s;
        s = t;
    }
    return s + c;
}

double sum_sq_dev_u32(const std::uint32_t* x, std::size_t n, double mean) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(x[i]) - mean;
        const double y = d * d;
        const double t = s + y;
        if (s >= y)
            c += (s - t) + y;
        else
            c += (y - t) + s;
        s = t;
    }
    return s + c;
}

double weighted_log_sum(const double* w, const double* x, std::size_t n) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = w[i] * std::log(x[i]);
        const double t = s + y;
        if (std::abs(s) >= std::abs(y))
            c += (s - t) + y;
        else
            c += (y - t) + s;
        s = t;
    }
    return s + c;
}

void log_array(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

void exp_array(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void pow_table(std::uint32_t k0, double exponent, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::pow(static_cast<double>(k0) + static_cast<double>(i), exponent);
}

}  // namespace

const Vtable scalar_vtable = {
    sum_f64, sum_u32,     sum_sq_dev_f64, sum_sq_dev_u32,
    weighted_log_sum, log_array, exp_array, pow_table,
};

}  // namespace rsl::kernels::detail
