#include "rsl/netstats.hpp"

#include "rsl/errors.hpp"
#include "rsl/kernels.hpp"

namespace rsl {

DegreeStats compute_stats(std::span<const std::uint32_t> degrees) {
    if (degrees.empty()) throw EmptyInput("compute_stats: empty degree sequence");

    const double n = static_cast<double>(degrees.size());
    DegreeStats stats;
    // Integer sum is exact; the centered second pass is compensated.
    stats.mean = static_cast<double>(kernels::sum(degrees)) / n;
    stats.variance = kernels::sum_sq_dev(degrees, stats.mean) / n;
    if (stats.mean > 0.0) stats.vmr = stats.variance / stats.mean;
    return stats;
}

}  // namespace rsl
