#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rsl/distributions.hpp"

namespace rsl {

/// Relative-frequency histogram of a degree sequence. Only observed degrees
/// appear (zero-count bins carry no mass); masses sum to 1.
struct EmpiricalPMF {
    std::vector<std::uint32_t> support;  // strictly ascending
    std::vector<double> mass;            // positive, sums to 1 +- 1e-9
    std::uint64_t total_count = 0;

    EmpiricalPMF() = default;
    EmpiricalPMF(std::vector<std::uint32_t> support, std::vector<double> mass,
                 std::uint64_t total_count);

    /// Histogram of raw integer degrees; shift_by_one subtracts 1 first
    /// (support alignment for distributions that start at k = 0).
    static EmpiricalPMF from_degrees(std::span<const std::uint32_t> degrees,
                                     bool shift_by_one = false);

    double mean() const noexcept;
    bool empty() const noexcept { return support.empty(); }
};

struct FitOptions {
    std::size_t restarts = 16;
    std::size_t max_iterations = 200;
    double gradient_tol = 1e-8;  // projected-gradient infinity norm
    double step_tol = 1e-10;     // accepted-step 2-norm
    double min_p = 1e-6;
    double drop_weight = 1e-8;   // components below this are dropped
    std::uint64_t seed = 1;
    /// Called after every accepted optimizer step with the current cost;
    /// costs are non-increasing within each restart.
    std::function<void(std::size_t restart, double cost)> on_accepted_step;
};

struct MixtureFitResult {
    GeometricMixture mixture;
    double residual_norm = 0.0;
    double ks_statistic = 1.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t dropped_components = 0;
};

/// Moment fit: p = 1/(1 + empirical mean). Throws EmptyInput.
GeometricParams fit_single_geometric(const EmpiricalPMF& pmf);

/// Bounded least squares of an unnormalized K-component geometric mixture
/// against the empirical PMF over its observed support, best of
/// `options.restarts` seeded multi-starts. Components come back sorted by
/// ascending p. Non-convergence is reported through `converged` with the
/// best-effort parameters attached.
MixtureFitResult fit_geometric_mixture(const EmpiricalPMF& pmf,
                                       std::size_t k_components,
                                       const FitOptions& options = {});

/// Two-sided KS between the mixture's normalized CDF and the empirical CDF.
double mixture_ks(const GeometricMixture& mix, const EmpiricalPMF& pmf);

}  // namespace rsl
