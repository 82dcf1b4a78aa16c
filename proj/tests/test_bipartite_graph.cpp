#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "rsl/bipartite_graph.hpp"

using rsl::BalancePolicy;
using rsl::BipartiteGraph;
using rsl::DegreeSequence;
using rsl::GeometricMixture;
using rsl::GeometricParams;
using rsl::NodeClass;

namespace {

DegreeSequence seq(std::vector<std::uint32_t> degrees, NodeClass label) {
    return DegreeSequence{std::move(degrees), label};
}

std::vector<BipartiteGraph::Link> sorted_links(const BipartiteGraph& g) {
    std::vector<BipartiteGraph::Link> links(g.links().begin(), g.links().end());
    std::sort(links.begin(), links.end());
    return links;
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("degree_sequence counts multiplicities") {
    const BipartiteGraph g(2, 3, {{0, 0}, {0, 0}, {0, 2}, {1, 2}});
    const DegreeSequence movies = degree_sequence(g, NodeClass::movie);
    const DegreeSequence actors = degree_sequence(g, NodeClass::actor);
    CHECK(movies.degrees == std::vector<std::uint32_t>{3, 1});
    CHECK(actors.degrees == std::vector<std::uint32_t>{2, 0, 2});

    const BipartiteGraph empty(2, 2, {});
    CHECK(degree_sequence(empty, NodeClass::actor).degrees ==
          std::vector<std::uint32_t>{0, 0});
}

TEST_CASE("forced matching is unique") {
    for (std::uint64_t s : {1ull, 2ull, 99ull}) {
        const auto result = configuration_link(seq({2}, NodeClass::movie),
                                               seq({1, 1}, NodeClass::actor), s);
        CHECK(sorted_links(result.graph) ==
              std::vector<BipartiteGraph::Link>{{0, 0}, {0, 1}});
        CHECK(result.audit.trimmed == 0);
        const DegreeSequence movies = degree_sequence(result.graph, NodeClass::movie);
        CHECK(movies.degrees == std::vector<std::uint32_t>{2});
    }
}

TEST_CASE("trim_random removes the surplus stub") {
    const auto result =
        configuration_link(seq({3}, NodeClass::movie),
                           seq({1, 1, 1, 1}, NodeClass::actor), 42);
    CHECK(result.graph.links().size() == 3);
    CHECK(result.audit.trimmed == 1);
    const auto actors = degree_sequence(result.graph, NodeClass::actor).degrees;
    CHECK(std::count(actors.begin(), actors.end(), 0) == 1);
    CHECK(std::count(actors.begin(), actors.end(), 1) == 3);
    CHECK(degree_sequence(result.graph, NodeClass::movie).degrees ==
          std::vector<std::uint32_t>{3});
}

TEST_CASE("resample_last shrinks tail degrees deterministically") {
    const auto result =
        configuration_link(seq({2, 3, 3}, NodeClass::movie),
                           seq({2, 3}, NodeClass::actor), 5,
                           BalancePolicy::resample_last);
    // surplus of 3 movie stubs comes off the last node first
    CHECK(degree_sequence(result.graph, NodeClass::movie).degrees ==
          std::vector<std::uint32_t>{2, 3, 0});
    CHECK(result.audit.trimmed == 3);
    CHECK(result.graph.links().size() == 5);
}

TEST_CASE("pad adds stubs on the deficit side") {
    const auto result = configuration_link(seq({4}, NodeClass::movie),
                                           seq({1, 1}, NodeClass::actor), 5,
                                           BalancePolicy::pad);
    CHECK(result.audit.padded == 2);
    CHECK(result.graph.links().size() == 4);
    const auto actors = degree_sequence(result.graph, NodeClass::actor).degrees;
    CHECK(actors[0] + actors[1] == 4);
    CHECK(actors[0] >= 1);
    CHECK(actors[1] >= 1);
}

TEST_CASE("degree sequences are conserved exactly on random inputs") {
    std::mt19937_64 rng(123);
    for (int round = 0; round < 200; ++round) {
        const std::size_t nm = 1 + rng() % 40;
        const std::size_t na = 1 + rng() % 40;
        std::vector<std::uint32_t> md(nm), ad(na);
        std::uint64_t total = 0;
        for (auto& d : md) {
            d = static_cast<std::uint32_t>(rng() % 6);
            total += d;
        }
        // build the actor side to the same total so conservation is exact
        std::uint64_t left = total;
        for (std::size_t i = 0; i < na; ++i) {
            const std::uint32_t d =
                i + 1 == na ? 0 : static_cast<std::uint32_t>(rng() % 6);
            ad[i] = static_cast<std::uint32_t>(std::min<std::uint64_t>(d, left));
            left -= ad[i];
        }
        ad.back() += static_cast<std::uint32_t>(left);

        const auto result = configuration_link(seq(md, NodeClass::movie),
                                               seq(ad, NodeClass::actor), rng());
        CHECK(result.audit.trimmed == 0);
        CHECK(degree_sequence(result.graph, NodeClass::movie).degrees == md);
        CHECK(degree_sequence(result.graph, NodeClass::actor).degrees == ad);
        CHECK(result.graph.links().size() == total);
    }
}

TEST_CASE("same seed gives identical link multisets, different seeds differ") {
    const DegreeSequence movies = seq({3, 2, 4, 1, 0, 2}, NodeClass::movie);
    const DegreeSequence actors = seq({2, 2, 2, 2, 2, 2}, NodeClass::actor);
    const auto a = configuration_link(movies, actors, 77);
    const auto b = configuration_link(movies, actors, 77);
    const auto c = configuration_link(movies, actors, 78);
    CHECK(std::vector(a.graph.links().begin(), a.graph.links().end()) ==
          std::vector(b.graph.links().begin(), b.graph.links().end()));
    CHECK(sorted_links(a.graph) != sorted_links(c.graph));
}

TEST_CASE("two-stub matching is uniform") {
    const DegreeSequence movies = seq({1, 1}, NodeClass::movie);
    const DegreeSequence actors = seq({1, 1}, NodeClass::actor);
    int identity = 0;
    const int rounds = 10000;
    for (int i = 0; i < rounds; ++i) {
        const auto result = configuration_link(movies, actors, 1000 + i);
        const auto links = sorted_links(result.graph);
        if (links == std::vector<BipartiteGraph::Link>{{0, 0}, {1, 1}}) ++identity;
    }
    const double share = static_cast<double>(identity) / rounds;
    CHECK(share > 0.48);
    CHECK(share < 0.52);
}

TEST_CASE("generate_network: degenerate distributions give an empty graph") {
    const auto result = generate_network(
        GeometricMixture::single(GeometricParams(1.0)),
        GeometricMixture::single(GeometricParams(1.0)), 1, 1, 9);
    CHECK(result.graph.links().empty());
    CHECK(result.graph.n_movies() == 1);
    CHECK(result.graph.n_actors() == 1);
}

TEST_CASE("generate_network trim matches the expected-totals calculation") {
    const GeometricMixture movie_dist =
        GeometricMixture::single(GeometricParams(0.08));
    const GeometricMixture actor_dist({
        {0.094, GeometricParams(0.046)},
        {0.178, GeometricParams(0.184)},
        {0.311, GeometricParams(0.528)},
        {0.562, GeometricParams(0.940)},
    });

    // Oracle: expected stub totals are n*mu on each side; the trim fraction
    // converges to |n_m mu_m - n_a mu_a| / (n_m mu_m + n_a mu_a).
    const double mu_m = 11.5;
    const double mu_a = actor_dist.mean();

    SUBCASE("1:10 node ratio leaves a large expected surplus") {
        const std::uint32_t nm = 1000, na = 10000;
        const double expect =
            std::abs(nm * mu_m - na * mu_a) / (nm * mu_m + na * mu_a);
        const auto result = generate_network(movie_dist, actor_dist, nm, na, 31);
        const double got =
            static_cast<double>(result.audit.trimmed) /
            static_cast<double>(result.audit.movie_stubs + result.audit.actor_stubs);
        CHECK(got == doctest::Approx(expect).epsilon(0.08));
    }

    SUBCASE("stub-balanced node counts trim under 5 percent") {
        const std::uint32_t nm = 1000;
        const auto na = static_cast<std::uint32_t>(nm * mu_m / mu_a);
        const auto result = generate_network(movie_dist, actor_dist, nm, na, 32);
        const double got =
            static_cast<double>(result.audit.trimmed) /
            static_cast<double>(result.audit.movie_stubs + result.audit.actor_stubs);
        CHECK(got < 0.05);
    }
}

TEST_CASE("generate_network honors the degree offset") {
    rsl::GenerateOptions options;
    options.degree_offset = 1;
    const auto result = generate_network(
        GeometricMixture::single(GeometricParams(1.0)),
        GeometricMixture::single(GeometricParams(1.0)), 4, 4, 9, options);
    // p=1 samples all zeros; the offset lifts every degree to exactly 1
    CHECK(result.graph.links().size() == 4);
    CHECK(degree_sequence(result.graph, NodeClass::movie).degrees ==
          std::vector<std::uint32_t>{1, 1, 1, 1});
}

TEST_SUITE_END();
