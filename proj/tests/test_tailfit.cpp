#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rsl/distributions.hpp"
#include "rsl/errors.hpp"
#include "rsl/rng.hpp"
#include "rsl/tailfit.hpp"

using rsl::ScanOptions;
using rsl::TailVerdict;

namespace {

// Test-only inverse-CDF sampler for the discrete power law ("zeta
// distribution"). Independent of the fitting code path: it builds the CDF
// table by direct PMF summation.
struct ZetaSampler {
    std::vector<double> cdf;
    std::uint32_t k_min;

    ZetaSampler(double gamma, std::uint32_t k_min_, std::size_t table = 1000000)
        : k_min(k_min_) {
        const double z = rsl::hurwitz_zeta(gamma, k_min);
        cdf.reserve(table);
        double acc = 0.0;
        for (std::size_t i = 0; i < table && acc < 1.0 - 1e-12; ++i) {
            acc += std::pow(static_cast<double>(k_min) + static_cast<double>(i),
                            -gamma) /
                   z;
            cdf.push_back(acc);
        }
    }

    std::uint32_t draw(std::mt19937_64& rng) const {
        const double u = rsl::uniform01(rng);
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = it == cdf.end() ? cdf.size() - 1
                                                : static_cast<std::size_t>(
                                                      it - cdf.begin());
        return k_min + static_cast<std::uint32_t>(idx);
    }

    std::vector<std::uint32_t> sample(std::size_t n, std::uint64_t seed) const {
        std::mt19937_64 rng(seed);
        std::vector<std::uint32_t> out(n);
        for (auto& v : out) v = draw(rng);
        return out;
    }
};

std::vector<std::uint32_t> geometric_sample(double p, std::size_t n,
                                            std::uint64_t seed) {
    return rsl::sample_degrees(
        rsl::GeometricMixture::single(rsl::GeometricParams(p)), n, seed);
}

// Brute-force zeta oracle: one million direct terms in long double plus the
// zeroth-order integral correction.
double zeta_brute(double s, double a) {
    long double acc = 0.0L;
    const long double m = 1000000.0L;
    for (long double k = 0; k < m; k += 1.0L)
        acc += std::pow(static_cast<double>(a + k), -s);
    const long double q = a + m;
    acc += std::pow(static_cast<double>(q), 1.0 - s) / (s - 1.0);
    acc += 0.5L * std::pow(static_cast<double>(q), -s);
    return static_cast<double>(acc);
}

struct TailArrays {
    std::vector<std::uint32_t> values;
    std::vector<std::uint64_t> counts;
};

TailArrays tail_arrays(std::vector<std::uint32_t> degrees, std::uint32_t k_min) {
    std::sort(degrees.begin(), degrees.end());
    TailArrays t;
    for (std::size_t i = 0; i < degrees.size();) {
        std::size_t j = i;
        while (j < degrees.size() && degrees[j] == degrees[i]) ++j;
        if (degrees[i] >= k_min) {
            t.values.push_back(degrees[i]);
            t.counts.push_back(j - i);
        }
        i = j;
    }
    return t;
}

}  // namespace

TEST_SUITE_BEGIN("tailfit");

TEST_CASE("hurwitz zeta against the riemann zeta and brute force") {
    for (double s : {1.2, 1.5, 2.0, 2.5, 3.0, 4.5, 7.0, 9.9}) {
        CHECK(rsl::hurwitz_zeta(s, 1.0) ==
              doctest::Approx(std::riemann_zeta(s)).epsilon(1e-12));
    }
    CHECK(rsl::hurwitz_zeta(2.0, 1.0) ==
          doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-13));

    for (double s : {1.05, 1.8, 2.5, 6.0, 10.0}) {
        for (double a : {1.0, 2.0, 16.0, 48.0, 170.0, 4096.0}) {
            CHECK(rsl::hurwitz_zeta(s, a) ==
                  doctest::Approx(zeta_brute(s, a)).epsilon(1e-10));
            // recurrence zeta(s,a) = a^-s + zeta(s,a+1)
            CHECK(rsl::hurwitz_zeta(s, a) ==
                  doctest::Approx(std::pow(a, -s) + rsl::hurwitz_zeta(s, a + 1.0))
                      .epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(rsl::hurwitz_zeta(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(rsl::hurwitz_zeta(2.0, 0.5), std::invalid_argument);
}

TEST_CASE("power-law MLE recovers gamma from zeta samples") {
    const ZetaSampler sampler(2.5, 1);
    const auto degrees = sampler.sample(100000, 555);
    const rsl::PowerLawFit fit = rsl::fit_power_law_mle(degrees, 1);
    CHECK(fit.gamma > 2.45);
    CHECK(fit.gamma < 2.55);
    CHECK(!fit.at_bound);
    CHECK(fit.ks < 0.01);
    CHECK(fit.n_tail == degrees.size());
}

TEST_CASE("insufficient tails are rejected") {
    const std::vector<std::uint32_t> tiny = {3, 4, 5, 6, 7};
    CHECK_THROWS_AS(rsl::fit_power_law_mle(tiny, 1), rsl::InsufficientTail);
    CHECK_THROWS_AS(rsl::fit_stretched_exponential(tiny, 1),
                    rsl::InsufficientTail);
    const std::vector<std::uint32_t> shifted(100, 2);
    CHECK_THROWS_AS(rsl::fit_power_law_mle(shifted, 3), rsl::InsufficientTail);
}

TEST_CASE("all-equal degrees push gamma to the bound and stay inconclusive") {
    const std::vector<std::uint32_t> flat(50, 7);
    const rsl::PowerLawFit fit = rsl::fit_power_law_mle(flat, 7);
    CHECK(fit.at_bound);
    const rsl::TailFitReport rep = rsl::scan_k_min(flat);
    CHECK(rep.verdict == TailVerdict::inconclusive);
    CHECK(rep.k_min == 7);
    CHECK(rep.data_fraction == doctest::Approx(1.0));
}

TEST_CASE("stretched exponential with shape 1 matches the exponential MLE") {
    const auto degrees = geometric_sample(0.25, 100000, 808);
    const TailArrays tail = tail_arrays(degrees, 1);

    // closed form: conditional geometric ratio q = m/(1+m), lambda = -1/ln q
    std::uint64_t n = 0, excess = 0;
    for (std::size_t i = 0; i < tail.values.size(); ++i) {
        n += tail.counts[i];
        excess += tail.counts[i] * (tail.values[i] - 1);
    }
    const double m = static_cast<double>(excess) / static_cast<double>(n);
    const double lambda_closed = -1.0 / std::log(m / (1.0 + m));

    // golden-section over the scale with the shape pinned to 1
    double lo = 0.1, hi = 50.0;
    while (hi - lo > 1e-10) {
        const double x1 = hi - 0.618033988749895 * (hi - lo);
        const double x2 = lo + 0.618033988749895 * (hi - lo);
        const double f1 =
            -rsl::detail::stretched_exp_loglik(tail.values, tail.counts, 1, x1, 1.0);
        const double f2 =
            -rsl::detail::stretched_exp_loglik(tail.values, tail.counts, 1, x2, 1.0);
        if (f1 <= f2)
            hi = x2;
        else
            lo = x1;
    }
    const double lambda_fixed_shape = 0.5 * (lo + hi);
    CHECK(lambda_fixed_shape == doctest::Approx(lambda_closed).epsilon(1e-6));

    // the free fit lands on shape ~ 1 and a nearby scale
    const rsl::StretchedExpFit fit = rsl::fit_stretched_exponential(degrees, 1);
    CHECK(fit.converged);
    CHECK(fit.params.shape == doctest::Approx(1.0).epsilon(0.1));
    CHECK(fit.params.scale == doctest::Approx(lambda_closed).epsilon(0.1));
}

TEST_CASE("BIC separates geometric tails from power-law tails") {
    const auto geo = geometric_sample(0.1, 100000, 909);
    const rsl::PowerLawFit pl_geo = rsl::fit_power_law_mle(geo, 1);
    const rsl::StretchedExpFit se_geo = rsl::fit_stretched_exponential(geo, 1);
    const double bic_pl_geo =
        std::log(static_cast<double>(pl_geo.n_tail)) - 2.0 * pl_geo.log_likelihood;
    CHECK(se_geo.bic < bic_pl_geo);

    const ZetaSampler sampler(2.2, 1);
    const auto zeta = sampler.sample(100000, 910);
    const rsl::PowerLawFit pl_z = rsl::fit_power_law_mle(zeta, 1);
    const rsl::StretchedExpFit se_z = rsl::fit_stretched_exponential(zeta, 1);
    const double bic_pl_z =
        std::log(static_cast<double>(pl_z.n_tail)) - 2.0 * pl_z.log_likelihood;
    CHECK(bic_pl_z < se_z.bic);
}

TEST_CASE("increasing k_min never increases the tail count") {
    const auto degrees = geometric_sample(0.2, 20000, 77);
    std::size_t prev = degrees.size() + 1;
    for (std::uint32_t k_min = 1; k_min <= 12; ++k_min) {
        const rsl::PowerLawFit fit = rsl::fit_power_law_mle(degrees, k_min);
        CHECK(fit.n_tail <= prev);
        prev = fit.n_tail;
    }
}

TEST_CASE("scan: zeta samples stop early with verdict power-law") {
    const ZetaSampler sampler(2.5, 1);
    for (std::uint64_t seed : {21ull, 22ull, 23ull}) {
        const auto degrees = sampler.sample(10000, seed);
        const rsl::TailFitReport rep = rsl::scan_k_min(degrees);
        CHECK(rep.verdict == TailVerdict::power_law);
        CHECK(rep.k_min <= 3);
        CHECK(rep.data_fraction > 0.9);
        CHECK(rep.gamma == doctest::Approx(2.5).epsilon(0.06));
        CHECK(rep.bic_power_law < rep.bic_stretched_exp);
    }
}

TEST_CASE("scan: geometric samples end stretched-exponential") {
    for (std::uint64_t seed : {31ull, 32ull, 33ull}) {
        const auto degrees = geometric_sample(0.1, 10000, seed);
        const rsl::TailFitReport rep = rsl::scan_k_min(degrees);
        CHECK(rep.verdict == TailVerdict::stretched_exponential);

        // data_fraction is exactly the one-line count
        std::size_t count = 0;
        for (auto d : degrees)
            if (d >= rep.k_min) ++count;
        CHECK(rep.data_fraction ==
              static_cast<double>(count) / static_cast<double>(degrees.size()));
    }
}

TEST_CASE("scan handles degenerate inputs") {
    CHECK(rsl::scan_k_min(std::vector<std::uint32_t>{}).verdict ==
          TailVerdict::inconclusive);
    const std::vector<std::uint32_t> tiny = {1, 2, 3};
    const rsl::TailFitReport rep = rsl::scan_k_min(tiny);
    CHECK(rep.verdict == TailVerdict::inconclusive);
    CHECK(rep.data_fraction == doctest::Approx(1.0));
    const std::vector<std::uint32_t> zeros(100, 0);
    CHECK(rsl::scan_k_min(zeros).verdict == TailVerdict::inconclusive);
}

TEST_CASE("two-sample KS basics") {
    const std::vector<std::uint32_t> a = {1, 1, 1};
    const std::vector<std::uint32_t> b = {10, 10, 10};
    CHECK(rsl::ks_two_sample(a, a) == doctest::Approx(0.0));
    CHECK(rsl::ks_two_sample(a, b) == doctest::Approx(1.0));
    CHECK_THROWS_AS(rsl::ks_two_sample({}, a), rsl::EmptyInput);
}

TEST_CASE("two-sample KS is symmetric and bounded") {
    std::mt19937_64 rng(4242);
    for (int round = 0; round < 50; ++round) {
        std::vector<std::uint32_t> a(1 + rng() % 200), b(1 + rng() % 200);
        for (auto& v : a) v = static_cast<std::uint32_t>(rng() % 30);
        for (auto& v : b) v = static_cast<std::uint32_t>(rng() % 30);
        const double ab = rsl::ks_two_sample(a, b);
        const double ba = rsl::ks_two_sample(b, a);
        CHECK(ab == doctest::Approx(ba));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("two-sample KS shrinks for same-distribution samples") {
    const auto a = geometric_sample(0.2, 50000, 1);
    const auto b = geometric_sample(0.2, 50000, 2);
    CHECK(rsl::ks_two_sample(a, b) < 0.02);
}

TEST_SUITE_END();
