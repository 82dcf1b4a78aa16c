#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Data-parallel arithmetic kernels behind the statistics and tail-fitting
// hot loops. Every kernel has a scalar reference implementation and an AVX2
// variant; the active backend is chosen once at startup (runtime CPU
// detection, overridable with RSLNET_KERNELS=scalar|avx2) and the two are
// equivalence-tested against each other.
namespace rsl::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend() noexcept;
bool backend_supported(Backend backend) noexcept;

/// Forces a backend; returns false (and leaves the current one active) if it
/// is not supported on this machine. Intended for tests and benchmarks.
bool set_backend(Backend backend) noexcept;

const char* backend_name(Backend backend) noexcept;

/// Compensated (Neumaier) sum.
double sum(std::span<const double> x) noexcept;

/// Exact integer sum.
std::uint64_t sum(std::span<const std::uint32_t> x) noexcept;

/// Compensated sum of squared deviations, sum((x_i - mean)^2).
double sum_sq_dev(std::span<const double> x, double mean) noexcept;
double sum_sq_dev(std::span<const std::uint32_t> x, double mean) noexcept;

/// sum(w_i * log(x_i)). Every x_i must be positive, finite and normal.
double weighted_log_sum(std::span<const double> w,
                        std::span<const double> x) noexcept;

/// out[i] = log(x[i]); positive, finite, normal x only.
void log_array(std::span<const double> x, std::span<double> out) noexcept;

/// out[i] = exp(x[i]); |x[i]| must be <= 700 (kept inside the normal range).
void exp_array(std::span<const double> x, std::span<double> out) noexcept;

/// out[i] = (k0 + i)^exponent with k0 >= 1. Backs Hurwitz-zeta partial sums
/// and discrete model CDF tables over integer supports.
void pow_table(std::uint32_t k0, double exponent, std::span<double> out) noexcept;

}  // namespace rsl::kernels
