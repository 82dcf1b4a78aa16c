#pragma once

#include <cstddef>
#include <cstdint>

// Internal vtable shared by the dispatcher and the backend translation units.
namespace rsl::kernels::detail {

struct Vtable {
    double (*sum_f64)(const double*, std::size_t);
    std::uint64_t (*sum_u32)(const std::uint32_t*, std::size_t);
    double (*sum_sq_dev_f64)(const double*, std::size_t, double);
    double (*sum_sq_dev_u32)(const std::uint32_t*, std::size_t, double);
    double (*weighted_log_sum)(const double*, const double*, std::size_t);
    void (*log_array)(const double*, double*, std::size_t);
    void (*exp_array)(const double*, double*, std::size_t);
    void (*pow_table)(std::uint32_t, double, double*, std::size_t);
};

extern const Vtable scalar_vtable;
#ifdef RSLNET_HAVE_AVX2
extern const Vtable avx2_vtable;
#endif

}  // namespace rsl::kernels::detail
