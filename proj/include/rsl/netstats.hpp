#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace rsl {

/// Population statistics of a degree sequence (variance divides by n).
/// vmr is empty when the mean is zero.
struct DegreeStats {
    double mean = 0.0;
    double variance = 0.0;
    std::optional<double> vmr;
};

DegreeStats compute_stats(std::span<const std::uint32_t> degrees);

}  // namespace rsl
