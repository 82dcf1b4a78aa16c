#include "rsl/projection.hpp"

#include <string>

#include "rsl/errors.hpp"

namespace rsl {
namespace {

// CSR incidence: for each movie the actor ids on its links, and for each
// actor the movie ids on its links (with multiplicity).
struct Incidence {
    std::vector<std::uint64_t> movie_off, actor_off;
    std::vector<std::uint32_t> movie_cast, actor_movies;
};

Incidence build_incidence(const BipartiteGraph& graph) {
    Incidence inc;
    inc.movie_off.assign(graph.n_movies() + 1, 0);
    inc.actor_off.assign(graph.n_actors() + 1, 0);
    for (const auto& [m, a] : graph.links()) {
        ++inc.movie_off[m + 1];
        ++inc.actor_off[a + 1];
    }
    for (std::size_t i = 1; i < inc.movie_off.size(); ++i)
        inc.movie_off[i] += inc.movie_off[i - 1];
    for (std::size_t i = 1; i < inc.actor_off.size(); ++i)
        inc.actor_off[i] += inc.actor_off[i - 1];

    inc.movie_cast.resize(graph.links().size());
    inc.actor_movies.resize(graph.links().size());
    std::vector<std::uint64_t> mpos(inc.movie_off.begin(), inc.movie_off.end() - 1);
    std::vector<std::uint64_t> apos(inc.actor_off.begin(), inc.actor_off.end() - 1);
    for (const auto& [m, a] : graph.links()) {
        inc.movie_cast[mpos[m]++] = a;
        inc.actor_movies[apos[a]++] = m;
    }
    return inc;
}

// Visits the distinct co-actors of `actor` once each. `mark`/`stamp` is the
// reusable visited set (stamp = actor id + 1 keeps it allocation-free).
template <typename Fn>
void for_each_co_actor(const Incidence& inc, std::uint32_t actor,
                       std::vector<std::uint32_t>& mark, Fn&& fn) {
    const std::uint32_t stamp = actor + 1;
    for (std::uint64_t mi = inc.actor_off[actor]; mi < inc.actor_off[actor + 1]; ++mi) {
        const std::uint32_t movie = inc.actor_movies[mi];
        for (std::uint64_t ci = inc.movie_off[movie]; ci < inc.movie_off[movie + 1]; ++ci) {
            const std::uint32_t other = inc.movie_cast[ci];
            if (other == actor || mark[other] == stamp) continue;
            mark[other] = stamp;
            fn(other);
        }
    }
}

}  // namespace

ProjectedDegrees project_actor_degrees(const BipartiteGraph& graph) {
    const Incidence inc = build_incidence(graph);
    ProjectedDegrees out;
    out.degrees.assign(graph.n_actors(), 0);
    std::vector<std::uint32_t> mark(graph.n_actors(), 0);
    for (std::uint32_t actor = 0; actor < graph.n_actors(); ++actor) {
        std::uint32_t count = 0;
        for_each_co_actor(inc, actor, mark, [&](std::uint32_t) { ++count; });
        out.degrees[actor] = count;
    }
    return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> project_edge_list(
    const BipartiteGraph& graph, std::uint64_t max_pairs) {
    // The degree pass is cheap and gives the exact pair count up front, so
    // the cap check happens before anything is materialized.
    const ProjectedDegrees degrees = project_actor_degrees(graph);
    std::uint64_t degree_sum = 0;
    for (std::uint32_t d : degrees.degrees) degree_sum += d;
    const std::uint64_t n_pairs = degree_sum / 2;
    if (n_pairs > max_pairs)
        throw OutputTooLarge("projected edge list has " + std::to_string(n_pairs) +
                             " pairs, cap is " + std::to_string(max_pairs));

    const Incidence inc = build_incidence(graph);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(n_pairs);
    std::vector<std::uint32_t> mark(graph.n_actors(), 0);
    for (std::uint32_t actor = 0; actor < graph.n_actors(); ++actor) {
        for_each_co_actor(inc, actor, mark, [&](std::uint32_t other) {
            if (other > actor) pairs.emplace_back(actor, other);
        });
    }
    return pairs;
}

}  // namespace rsl
