#include "rsl/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace rsl::kernels {
namespace {

using detail::Vtable;

bool avx2_available() noexcept {
#if defined(RSLNET_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    const Vtable* table;
    Backend backend;

    Dispatch() : table(&detail::scalar_vtable), backend(Backend::scalar) {
        const char* env = std::getenv("RSLNET_KERNELS");
        if (env != nullptr && std::strcmp(env, "scalar") == 0) return;
#ifdef RSLNET_HAVE_AVX2
        if (avx2_available()) {
            table = &detail::avx2_vtable;
            backend = Backend::avx2;
        }
#endif
    }
};

Dispatch& dispatch() noexcept {
    static Dispatch d;
    return d;
}

}  // namespace

Backend active_backend() noexcept { return dispatch().backend; }

bool backend_supported(Backend backend) noexcept {
    if (backend == Backend::scalar) return true;
    return avx2_available();
}

bool set_backend(Backend backend) noexcept {
    if (!backend_supported(backend)) return false;
    Dispatch& d = dispatch();
    if (backend == Backend::scalar) {
        d.table = &detail::scalar_vtable;
    } else {
#ifdef RSLNET_HAVE_AVX2
        d.table = &detail::avx2_vtable;
#else
        return false;
#endif
    }
    d.backend = backend;
    return true;
}

const char* backend_name(Backend backend) noexcept {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

double sum(std::span<const double> x) noexcept {
    return dispatch().table->sum_f64(x.data(), x.size());
}

std::uint64_t sum(std::span<const std::uint32_t> x) noexcept {
    return dispatch().table->sum_u32(x.data(), x.size());
}

double sum_sq_dev(std::span<const double> x, double mean) noexcept {
    return dispatch().table->sum_sq_dev_f64(x.data(), x.size(), mean);
}

double sum_sq_dev(std::span<const std::uint32_t> x, double mean) noexcept {
    return dispatch().table->sum_sq_dev_u32(x.data(), x.size(), mean);
}

double weighted_log_sum(std::span<const double> w,
                        std::span<const double> x) noexcept {
    return dispatch().table->weighted_log_sum(w.data(), x.data(), x.size());
}

void log_array(std::span<const double> x, std::span<double> out) noexcept {
    dispatch().table->log_array(x.data(), out.data(), x.size());
}

void exp_array(std::span<const double> x, std::span<double> out) noexcept {
    dispatch().table->exp_array(x.data(), out.data(), x.size());
}

void pow_table(std::uint32_t k0, double exponent, std::span<double> out) noexcept {
    dispatch().table->pow_table(k0, exponent, out.data(), out.size());
}

}  // namespace rsl::kernels
