#pragma once

#include <cstdint>
#include <vector>

#include "rsl/errors.hpp"

namespace rsl {

/// Success probability of the Bernoulli trial behind a geometric
/// distribution. The distribution counts failures before the first success,
/// so its support starts at k = 0.
struct GeometricParams {
    double p;

    explicit GeometricParams(double p);  // requires 0 < p <= 1
};

struct MixtureComponent {
    double weight;  // coefficient as fitted, >= 0; not normalized
    GeometricParams params;
};

/// Weighted mixture of geometric distributions. Weights are stored exactly
/// as fitted (they need not sum to 1); the normalized view is derived where
/// sampling or PMF normalization needs it.
class GeometricMixture {
public:
    explicit GeometricMixture(std::vector<MixtureComponent> components);

    static GeometricMixture single(GeometricParams params);

    const std::vector<MixtureComponent>& components() const noexcept {
        return components_;
    }
    double total_weight() const noexcept { return total_weight_; }

    /// Mean of the normalized mixture, sum_i (w_i/W) (1-p_i)/p_i.
    double mean() const noexcept;

private:
    std::vector<MixtureComponent> components_;
    double total_weight_;
};

/// f(k) = (1-p)^k p
double geometric_pmf(GeometricParams params, std::uint32_t k) noexcept;

/// mu = (1-p)/p
double geometric_mean(GeometricParams params) noexcept;

/// p = 1/(1+mu)
GeometricParams p_from_mean(double mu);

/// Unnormalized: sum_i w_i (1-p_i)^k p_i. Normalized divides by the total
/// weight so the values sum to 1 over k.
double mixture_pmf(const GeometricMixture& mix, std::uint32_t k,
                   bool normalized = false) noexcept;

/// n independent draws. Each draw picks a component with probability
/// proportional to its weight, then inverts the geometric CDF on one
/// uniform draw: k = floor(log(u) / log(1-p)). Deterministic given the seed.
std::vector<std::uint32_t> sample_degrees(const GeometricMixture& mix,
                                          std::size_t n, std::uint64_t rng_seed);

}  // namespace rsl
