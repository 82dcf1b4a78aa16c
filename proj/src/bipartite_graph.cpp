#include "rsl/bipartite_graph.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "rsl/kernels.hpp"
#include "rsl/rng.hpp"

namespace rsl {

BipartiteGraph::BipartiteGraph(std::uint32_t n_movies, std::uint32_t n_actors,
                               std::vector<Link> links)
    : n_movies_(n_movies), n_actors_(n_actors), links_(std::move(links)) {
    for (const Link& link : links_) {
        if (link.first >= n_movies_ || link.second >= n_actors_)
            throw std::invalid_argument("link index out of range");
    }
}

DegreeSequence degree_sequence(const BipartiteGraph& graph, NodeClass side) {
    DegreeSequence seq;
    seq.label = side;
    seq.degrees.assign(side == NodeClass::movie ? graph.n_movies()
                                                : graph.n_actors(),
                       0);
    for (const BipartiteGraph::Link& link : graph.links())
        ++seq.degrees[side == NodeClass::movie ? link.first : link.second];
    return seq;
}

namespace {

std::vector<std::uint32_t> expand_stubs(std::span<const std::uint32_t> degrees,
                                        std::uint64_t total) {
    std::vector<std::uint32_t> stubs;
    stubs.reserve(total);
    for (std::uint32_t node = 0; node < degrees.size(); ++node)
        stubs.insert(stubs.end(), degrees[node], node);
    return stubs;
}

// Fisher-Yates with the pinned uniform mapping, so shuffles are identical
// across standard libraries.
void shuffle_stubs(std::vector<std::uint32_t>& stubs, std::mt19937_64& rng) {
    for (std::size_t i = stubs.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
        std::swap(stubs[i - 1], stubs[j < i ? j : i - 1]);
    }
}

// Shrinks degrees from the tail of the node list until the total drops by
// `excess`. Deterministic, no RNG.
void shrink_from_tail(std::vector<std::uint32_t>& degrees, std::uint64_t excess) {
    for (auto it = degrees.rbegin(); it != degrees.rend() && excess > 0; ++it) {
        const std::uint32_t cut =
            static_cast<std::uint64_t>(*it) <= excess ? *it : static_cast<std::uint32_t>(excess);
        *it -= cut;
        excess -= cut;
    }
}

}  // namespace

LinkResult configuration_link(const DegreeSequence& movies,
                              const DegreeSequence& actors,
                              std::uint64_t rng_seed, BalancePolicy policy) {
    if (movies.degrees.empty() || actors.degrees.empty())
        throw std::invalid_argument("configuration_link: empty degree sequence");

    std::vector<std::uint32_t> movie_deg = movies.degrees;
    std::vector<std::uint32_t> actor_deg = actors.degrees;

    BalanceAudit audit;
    audit.movie_stubs = kernels::sum(std::span<const std::uint32_t>(movie_deg));
    audit.actor_stubs = kernels::sum(std::span<const std::uint32_t>(actor_deg));

    std::mt19937_64 balance_rng(derive_seed(rng_seed, "link:balance"));

    std::uint64_t movie_total = audit.movie_stubs;
    std::uint64_t actor_total = audit.actor_stubs;

    if (movie_total != actor_total && policy == BalancePolicy::resample_last) {
        if (movie_total > actor_total)
            shrink_from_tail(movie_deg, movie_total - actor_total);
        else
            shrink_from_tail(actor_deg, actor_total - movie_total);
        audit.trimmed = movie_total > actor_total ? movie_total - actor_total
                                                  : actor_total - movie_total;
        movie_total = actor_total = std::min(movie_total, actor_total);
    }

    if (movie_total != actor_total && policy == BalancePolicy::pad) {
        const bool pad_movies = movie_total < actor_total;
        std::vector<std::uint32_t>& deg = pad_movies ? movie_deg : actor_deg;
        std::uint64_t deficit = pad_movies ? actor_total - movie_total
                                           : movie_total - actor_total;
        audit.padded = deficit;
        while (deficit-- > 0) {
            const auto node = static_cast<std::size_t>(
                uniform01(balance_rng) * static_cast<double>(deg.size()));
            ++deg[node < deg.size() ? node : deg.size() - 1];
        }
        movie_total = actor_total = std::max(movie_total, actor_total);
    }

    std::vector<std::uint32_t> movie_stubs = expand_stubs(movie_deg, movie_total);
    std::vector<std::uint32_t> actor_stubs = expand_stubs(actor_deg, actor_total);

    if (movie_stubs.size() != actor_stubs.size()) {
        // trim_random: a full shuffle of the surplus side, then truncate — a
        // uniformly random subset of its stubs survives.
        std::vector<std::uint32_t>& surplus =
            movie_stubs.size() > actor_stubs.size() ? movie_stubs : actor_stubs;
        const std::size_t keep = std::min(movie_stubs.size(), actor_stubs.size());
        audit.trimmed = surplus.size() - keep;
        shuffle_stubs(surplus, balance_rng);
        surplus.resize(keep);
    }

    std::mt19937_64 match_rng(derive_seed(rng_seed, "link:shuffle"));
    shuffle_stubs(actor_stubs, match_rng);

    std::vector<BipartiteGraph::Link> links;
    links.reserve(movie_stubs.size());
    for (std::size_t i = 0; i < movie_stubs.size(); ++i)
        links.emplace_back(movie_stubs[i], actor_stubs[i]);

    return LinkResult{
        BipartiteGraph(static_cast<std::uint32_t>(movies.degrees.size()),
                       static_cast<std::uint32_t>(actors.degrees.size()),
                       std::move(links)),
        audit};
}

LinkResult generate_network(const GeometricMixture& movie_dist,
                            const GeometricMixture& actor_dist,
                            std::uint32_t n_movies, std::uint32_t n_actors,
                            std::uint64_t rng_seed,
                            const GenerateOptions& options) {
    if (n_movies == 0 || n_actors == 0)
        throw std::invalid_argument("generate_network: node counts must be >= 1");

    DegreeSequence movies{
        sample_degrees(movie_dist, n_movies, derive_seed(rng_seed, "generate:movie")),
        NodeClass::movie};
    DegreeSequence actors{
        sample_degrees(actor_dist, n_actors, derive_seed(rng_seed, "generate:actor")),
        NodeClass::actor};

    if (options.degree_offset > 0) {
        for (std::uint32_t& d : movies.degrees) d += options.degree_offset;
        for (std::uint32_t& d : actors.degrees) d += options.degree_offset;
    }

    return configuration_link(movies, actors, derive_seed(rng_seed, "generate:link"),
                              options.balance);
}

}  // namespace rsl
