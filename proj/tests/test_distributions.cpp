#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rsl/distributions.hpp"

using rsl::GeometricMixture;
using rsl::GeometricParams;
using rsl::MixtureComponent;

namespace {

// The four-component actor-side mixture used throughout the tests.
GeometricMixture actor_mixture() {
    return GeometricMixture({
        {0.094, GeometricParams(0.046)},
        {0.178, GeometricParams(0.184)},
        {0.311, GeometricParams(0.528)},
        {0.562, GeometricParams(0.940)},
    });
}

// Oracle: two-sided KS between a sample and the mixture model, evaluated at
// every integer up to the sample maximum.
double sample_vs_model_ks(const std::vector<std::uint32_t>& sample,
                          const GeometricMixture& mix) {
    std::vector<std::uint32_t> sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0, model_cdf = 0.0;
    std::size_t i = 0;
    for (std::uint32_t k = 0; k <= sorted.back(); ++k) {
        model_cdf += mixture_pmf(mix, k, true);
        while (i < sorted.size() && sorted[i] == k) ++i;
        ks = std::max(ks, std::abs(static_cast<double>(i) / n - model_cdf));
    }
    return ks;
}

double sample_mean(const std::vector<std::uint32_t>& sample) {
    long double s = 0.0L;
    for (std::uint32_t v : sample) s += v;
    return static_cast<double>(s / sample.size());
}

}  // namespace

TEST_SUITE_BEGIN("distributions");

TEST_CASE("geometric pmf basics") {
    CHECK(geometric_pmf(GeometricParams(0.5), 0) == doctest::Approx(0.5));
    CHECK(geometric_pmf(GeometricParams(0.5), 2) == doctest::Approx(0.125));
    // pmf at k = 0 equals p itself
    CHECK(geometric_pmf(GeometricParams(0.087), 0) == doctest::Approx(0.087));
}

TEST_CASE("geometric pmf sums to 1") {
    for (double p : {1e-6, 1e-3, 0.05, 0.087, 0.3, 0.7, 1.0}) {
        const auto cutoff = static_cast<std::uint64_t>(std::ceil(50.0 / p));
        // closed-form partial sum: 1 - (1-p)^(K+1)
        const double partial =
            1.0 - std::pow(1.0 - p, static_cast<double>(cutoff) + 1.0);
        CHECK(partial > 1.0 - 1e-9);
        // and the term-by-term sum agrees where direct summation is feasible
        if (cutoff <= 100000) {
            double acc = 0.0;
            for (std::uint64_t k = 0; k <= cutoff; ++k)
                acc += geometric_pmf(GeometricParams(p),
                                     static_cast<std::uint32_t>(k));
            CHECK(acc == doctest::Approx(partial).epsilon(1e-12));
        }
    }
}

TEST_CASE("mean and p round-trip") {
    CHECK(geometric_mean(GeometricParams(0.5)) == doctest::Approx(1.0));
    CHECK(geometric_mean(GeometricParams(0.08)) == doctest::Approx(11.5));
    CHECK(geometric_mean(GeometricParams(1.0)) == doctest::Approx(0.0));

    CHECK(rsl::p_from_mean(1.0).p == doctest::Approx(0.5));
    CHECK(rsl::p_from_mean(11.5).p == doctest::Approx(0.08));
    CHECK(rsl::p_from_mean(0.0).p == doctest::Approx(1.0));

    for (double p = 1e-6; p <= 1.0; p *= 1.7) {
        const double back = rsl::p_from_mean(geometric_mean(GeometricParams(p))).p;
        CHECK(std::abs(back - p) <= 1e-12 * p);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(GeometricParams(0.0), std::invalid_argument);
    CHECK_THROWS_AS(GeometricParams(1.5), std::invalid_argument);
    CHECK_THROWS_AS(GeometricParams(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(GeometricMixture({}), std::invalid_argument);
    CHECK_THROWS_AS(GeometricMixture({{0.0, GeometricParams(0.5)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(GeometricMixture({{-1.0, GeometricParams(0.5)}}),
                    std::invalid_argument);
}

TEST_CASE("mixture pmf at k=0 equals the weighted p sum") {
    const GeometricMixture mix = actor_mixture();
    // hand-sum oracle over the four components
    double expect = 0.0;
    for (const MixtureComponent& c : mix.components())
        expect += c.weight * c.params.p;
    CHECK(expect == doctest::Approx(0.7296).epsilon(2e-4));
    CHECK(mixture_pmf(mix, 0, false) == doctest::Approx(expect));
}

TEST_CASE("single unit-weight component reduces to the plain geometric") {
    const GeometricMixture mix = GeometricMixture::single(GeometricParams(0.5));
    for (std::uint32_t k = 0; k <= 64; ++k) {
        CHECK(mixture_pmf(mix, k, false) == geometric_pmf(GeometricParams(0.5), k));
        CHECK(mixture_pmf(mix, 1, true) == doctest::Approx(0.25));
    }
}

TEST_CASE("normalized mixture pmf sums to 1") {
    const GeometricMixture mix = actor_mixture();
    long double acc = 0.0L;
    for (std::uint32_t k = 0; k <= 1000000; ++k)
        acc += mixture_pmf(mix, k, true);
    CHECK(static_cast<double>(acc) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sampling p=1 always yields zero") {
    const auto sample =
        sample_degrees(GeometricMixture::single(GeometricParams(1.0)), 5, 99);
    REQUIRE(sample.size() == 5);
    for (std::uint32_t v : sample) CHECK(v == 0);
}

TEST_CASE("sample mean approaches the analytic mean") {
    const auto single =
        sample_degrees(GeometricMixture::single(GeometricParams(0.08)), 1000000, 7);
    CHECK(sample_mean(single) == doctest::Approx(11.5).epsilon(0.01));

    const GeometricMixture mix = actor_mixture();
    // analytic-moment oracle: sum_i (w_i/W) (1-p_i)/p_i
    double analytic = 0.0;
    for (const MixtureComponent& c : mix.components())
        analytic += c.weight / mix.total_weight() * (1.0 - c.params.p) / c.params.p;
    CHECK(mix.mean() == doctest::Approx(analytic));
    const auto mixed = sample_degrees(mix, 1000000, 11);
    CHECK(sample_mean(mixed) == doctest::Approx(analytic).epsilon(0.02));
}

TEST_CASE("sampling is reproducible for equal seeds") {
    const GeometricMixture mix = actor_mixture();
    const auto a = sample_degrees(mix, 10000, 1234);
    const auto b = sample_degrees(mix, 10000, 1234);
    const auto c = sample_degrees(mix, 10000, 1235);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("empirical distribution of 1e6 draws matches the pmf") {
    const GeometricMixture mix = actor_mixture();
    const auto sample = sample_degrees(mix, 1000000, 2024);
    CHECK(sample_vs_model_ks(sample, mix) < 0.005);
}

TEST_SUITE_END();
