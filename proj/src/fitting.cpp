#include "rsl/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "rsl/errors.hpp"
#include "rsl/rng.hpp"

namespace rsl {

EmpiricalPMF::EmpiricalPMF(std::vector<std::uint32_t> support_,
                           std::vector<double> mass_, std::uint64_t total_count_)
    : support(std::move(support_)), mass(std::move(mass_)), total_count(total_count_) {
    if (support.size() != mass.size())
        throw std::invalid_argument("support and mass lengths differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i > 0 && support[i] <= support[i - 1])
            throw std::invalid_argument("support must be strictly ascending");
        if (!(mass[i] > 0.0))
            throw std::invalid_argument("masses must be positive");
        sum += mass[i];
    }
    if (!support.empty() && std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("masses must sum to 1");
}

EmpiricalPMF EmpiricalPMF::from_degrees(std::span<const std::uint32_t> degrees,
                                        bool shift_by_one) {
    std::vector<std::uint32_t> sorted(degrees.begin(), degrees.end());
    std::sort(sorted.begin(), sorted.end());
    if (shift_by_one && !sorted.empty() && sorted.front() == 0)
        throw std::invalid_argument("cannot shift degrees: a degree of 0 is present");

    std::vector<std::uint32_t> support;
    std::vector<double> mass;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        support.push_back(sorted[i] - (shift_by_one ? 1 : 0));
        mass.push_back(static_cast<double>(j - i) / n);
        i = j;
    }
    return EmpiricalPMF(std::move(support), std::move(mass), sorted.size());
}

double EmpiricalPMF::mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i)
        m += static_cast<double>(support[i]) * mass[i];
    return m;
}

GeometricParams fit_single_geometric(const EmpiricalPMF& pmf) {
    if (pmf.empty()) throw EmptyInput("fit_single_geometric: empty PMF");
    return p_from_mean(pmf.mean());
}

namespace {

// Parameter vector layout: x = [a_0..a_{K-1}, p_0..p_{K-1}].
struct Problem {
    const EmpiricalPMF& pmf;
    std::size_t k;

    std::size_t dim() const { return 2 * k; }
    std::size_t points() const { return pmf.support.size(); }

    void eval(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& jac) const {
        for (std::size_t j = 0; j < points(); ++j) {
            const double kj = static_cast<double>(pmf.support[j]);
            double model = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                const double a = x(static_cast<Eigen::Index>(i));
                const double p = x(static_cast<Eigen::Index>(k + i));
                const double u = 1.0 - p;
                const double pow_km1 = kj >= 1.0 ? std::pow(u, kj - 1.0) : 0.0;
                const double pow_k = kj >= 1.0 ? pow_km1 * u : 1.0;
                model += a * pow_k * p;
                jac(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                    pow_k * p;
                // d/dp [(1-p)^k p] = (1-p)^k - k (1-p)^(k-1) p
                jac(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k + i)) =
                    a * (pow_k - kj * pow_km1 * p);
            }
            r(static_cast<Eigen::Index>(j)) = model - pmf.mass[j];
        }
    }

    double cost(const Eigen::VectorXd& x) const {
        double c = 0.0;
        for (std::size_t j = 0; j < points(); ++j) {
            const double kj = static_cast<double>(pmf.support[j]);
            double model = 0.0;
            for (std::size_t i = 0; i < k; ++i)
                model += x(static_cast<Eigen::Index>(i)) *
                         std::pow(1.0 - x(static_cast<Eigen::Index>(k + i)), kj) *
                         x(static_cast<Eigen::Index>(k + i));
            const double d = model - pmf.mass[j];
            c += d * d;
        }
        return c;
    }
};

struct LmOutcome {
    Eigen::VectorXd x;
    double cost = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
};

Eigen::VectorXd clamp(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

double projected_gradient_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                               const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    double norm = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) <= lo(i) && g(i) > 0.0) continue;  // pushing into the bound
        if (x(i) >= hi(i) && g(i) < 0.0) continue;
        norm = std::max(norm, std::abs(g(i)));
    }
    return norm;
}

// Levenberg-Marquardt with box projection. Accepted steps never increase
// the cost; convergence is projected-gradient or step-size based.
LmOutcome lm_bounded(const Problem& prob, Eigen::VectorXd x,
                     const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                     const FitOptions& opts, std::size_t restart) {
    const auto m = static_cast<Eigen::Index>(prob.points());
    const auto n = static_cast<Eigen::Index>(prob.dim());
    Eigen::VectorXd r(m);
    Eigen::MatrixXd jac(m, n);

    LmOutcome out;
    out.x = clamp(x, lo, hi);
    out.cost = prob.cost(out.x);

    double lambda = 1e-3;
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        prob.eval(out.x, r, jac);
        const Eigen::VectorXd g = jac.transpose() * r;
        if (projected_gradient_norm(out.x, g, lo, hi) < opts.gradient_tol) {
            out.converged = true;
            break;
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd scale =
            jtj.diagonal().cwiseMax(1e-12);  // Marquardt scaling

        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * scale;
            const Eigen::VectorXd step = a.ldlt().solve(-g);
            const Eigen::VectorXd next = clamp(out.x + step, lo, hi);
            const double next_cost = prob.cost(next);
            if (next_cost < out.cost) {
                const double step_norm = (next - out.x).norm();
                out.x = next;
                out.cost = next_cost;
                ++out.iterations;
                accepted = true;
                lambda = std::max(lambda / 3.0, 1e-12);
                if (opts.on_accepted_step) opts.on_accepted_step(restart, out.cost);
                if (step_norm < opts.step_tol) out.converged = true;
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e15) break;
        }
        if (!accepted || out.converged) {
            if (!accepted) {
                // stalled: re-check the gradient test at the final point
                prob.eval(out.x, r, jac);
                const Eigen::VectorXd gf = jac.transpose() * r;
                out.converged =
                    projected_gradient_norm(out.x, gf, lo, hi) < opts.gradient_tol;
            }
            break;
        }
    }
    return out;
}

}  // namespace

MixtureFitResult fit_geometric_mixture(const EmpiricalPMF& pmf,
                                       std::size_t k_components,
                                       const FitOptions& options) {
    if (k_components < 1)
        throw std::invalid_argument("k_components must be >= 1");
    if (pmf.support.size() < 2 * k_components)
        throw std::invalid_argument(
            "empirical support must have at least 2 * k_components points");

    const Problem prob{pmf, k_components};
    const auto n = static_cast<Eigen::Index>(prob.dim());
    Eigen::VectorXd lo(n), hi(n);
    for (std::size_t i = 0; i < k_components; ++i) {
        lo(static_cast<Eigen::Index>(i)) = 0.0;
        hi(static_cast<Eigen::Index>(i)) = 1e6;
        lo(static_cast<Eigen::Index>(k_components + i)) = options.min_p;
        hi(static_cast<Eigen::Index>(k_components + i)) = 1.0;
    }

    LmOutcome best;
    for (std::size_t restart = 0; restart < std::max<std::size_t>(options.restarts, 1);
         ++restart) {
        std::mt19937_64 rng(derive_seed(options.seed, "fit:restart", restart));
        Eigen::VectorXd x0(n);
        for (std::size_t i = 0; i < k_components; ++i) {
            x0(static_cast<Eigen::Index>(i)) = 1.0 / static_cast<double>(k_components);
            // p log-uniform in [1e-3, 1]
            x0(static_cast<Eigen::Index>(k_components + i)) =
                std::exp(std::log(1e-3) * uniform01(rng));
        }
        const LmOutcome run = lm_bounded(prob, x0, lo, hi, options, restart);
        if (run.cost < best.cost ||
            (run.cost == best.cost && run.converged && !best.converged))
            best = run;
    }

    // Tear down negligible components, keep at least the heaviest one.
    std::vector<MixtureComponent> comps;
    std::size_t dropped = 0;
    double max_weight = 0.0;
    std::size_t max_at = 0;
    for (std::size_t i = 0; i < k_components; ++i) {
        const double w = best.x(static_cast<Eigen::Index>(i));
        if (w > max_weight) {
            max_weight = w;
            max_at = i;
        }
    }
    for (std::size_t i = 0; i < k_components; ++i) {
        const double w = best.x(static_cast<Eigen::Index>(i));
        const double p = best.x(static_cast<Eigen::Index>(k_components + i));
        if (w < options.drop_weight && i != max_at) {
            ++dropped;
            continue;
        }
        comps.push_back(MixtureComponent{w, GeometricParams(std::min(std::max(p, 1e-12), 1.0))});
    }
    std::sort(comps.begin(), comps.end(),
              [](const MixtureComponent& a, const MixtureComponent& b) {
                  return a.params.p < b.params.p;
              });

    MixtureFitResult result{GeometricMixture(std::move(comps)),
                            std::sqrt(best.cost),
                            1.0,
                            best.iterations,
                            best.converged,
                            dropped};
    result.ks_statistic = mixture_ks(result.mixture, pmf);
    return result;
}

double mixture_ks(const GeometricMixture& mix, const EmpiricalPMF& pmf) {
    if (pmf.empty()) throw EmptyInput("mixture_ks: empty PMF");
    const auto& comps = mix.components();
    // running survival of each component: w_i * (1-p_i)^(k+1)
    std::vector<double> survive(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i)
        survive[i] = comps[i].weight / mix.total_weight() * (1.0 - comps[i].params.p);

    double ks = 0.0;
    double emp_cdf = 0.0;
    std::size_t si = 0;
    const std::uint32_t vmax = pmf.support.back();
    for (std::uint32_t k = 0; k <= vmax; ++k) {
        if (si < pmf.support.size() && pmf.support[si] == k) emp_cdf += pmf.mass[si++];
        double model_tail = 0.0;
        for (double& s : survive) model_tail += s;
        ks = std::max(ks, std::abs(emp_cdf - (1.0 - model_tail)));
        for (std::size_t i = 0; i < comps.size(); ++i)
            survive[i] *= 1.0 - comps[i].params.p;
    }
    return std::min(ks, 1.0);
}

}  // namespace rsl
