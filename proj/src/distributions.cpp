#include "rsl/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "rsl/kernels.hpp"
#include "rsl/rng.hpp"

namespace rsl {

GeometricParams::GeometricParams(double p_) : p(p_) {
    if (!(p > 0.0) || p > 1.0)
        throw std::invalid_argument("geometric parameter p must be in (0, 1]");
}

GeometricMixture::GeometricMixture(std::vector<MixtureComponent> components)
    : components_(std::move(components)), total_weight_(0.0) {
    if (components_.empty())
        throw std::invalid_argument("mixture needs at least one component");
    for (const MixtureComponent& c : components_) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
            throw std::invalid_argument("mixture weights must be non-negative");
        total_weight_ += c.weight;
    }
    if (!(total_weight_ > 0.0))
        throw std::invalid_argument("mixture needs a positive-weight component");
}

GeometricMixture GeometricMixture::single(GeometricParams params) {
    return GeometricMixture({MixtureComponent{1.0, params}});
}

double GeometricMixture::mean() const noexcept {
    double m = 0.0;
    for (const MixtureComponent& c : components_)
        m += (c.weight / total_weight_) * geometric_mean(c.params);
    return m;
}

double geometric_pmf(GeometricParams params, std::uint32_t k) noexcept {
    return std::pow(1.0 - params.p, static_cast<double>(k)) * params.p;
}

double geometric_mean(GeometricParams params) noexcept {
    return (1.0 - params.p) / params.p;
}

GeometricParams p_from_mean(double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("mean must be finite and non-negative");
    return GeometricParams(1.0 / (1.0 + mu));
}

double mixture_pmf(const GeometricMixture& mix, std::uint32_t k,
                   bool normalized) noexcept {
    double v = 0.0;
    for (const MixtureComponent& c : mix.components())
        v += c.weight * geometric_pmf(c.params, k);
    return normalized ? v / mix.total_weight() : v;
}

std::vector<std::uint32_t> sample_degrees(const GeometricMixture& mix,
                                          std::size_t n, std::uint64_t rng_seed) {
    if (n == 0) throw std::invalid_argument("sample count must be >= 1");

    const auto& comps = mix.components();
    std::vector<double> cum_weight(comps.size());
    std::vector<double> log1mp(comps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        acc += comps[i].weight;
        cum_weight[i] = acc;
        log1mp[i] = std::log1p(-comps[i].params.p);  // -inf when p == 1
    }

    // Inverse-CDF draws, k = floor(log(u) / log(1-p)) with u in (0, 1],
    // batched so the log transform runs through the vector kernels.
    constexpr std::size_t k_chunk = 8192;
    std::vector<double> u(k_chunk), log_u(k_chunk);
    std::vector<std::uint32_t> which(k_chunk);

    std::mt19937_64 rng(rng_seed);
    std::vector<std::uint32_t> out(n);
    for (std::size_t base = 0; base < n; base += k_chunk) {
        const std::size_t len = std::min(k_chunk, n - base);
        for (std::size_t i = 0; i < len; ++i) {
            std::size_t c = 0;
            if (comps.size() > 1) {
                const double pick = uniform01(rng) * acc;
                c = static_cast<std::size_t>(
                    std::upper_bound(cum_weight.begin(), cum_weight.end(), pick) -
                    cum_weight.begin());
                if (c >= comps.size()) c = comps.size() - 1;
            }
            which[i] = static_cast<std::uint32_t>(c);
            u[i] = 1.0 - uniform01(rng);
        }
        kernels::log_array({u.data(), len}, {log_u.data(), len});
        for (std::size_t i = 0; i < len; ++i) {
            const double denom = log1mp[which[i]];
            if (denom == 0.0) {  // p == 1: success on the first trial
                out[base + i] = 0;
                continue;
            }
            const double k = std::floor(log_u[i] / denom);
            out[base + i] =
                k >= static_cast<double>(std::numeric_limits<std::uint32_t>::max())
                    ? std::numeric_limits<std::uint32_t>::max()
                    : static_cast<std::uint32_t>(k);
        }
    }
    return out;
}

}  // namespace rsl
