#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rsl/distributions.hpp"

namespace rsl {

enum class NodeClass { movie, actor };

struct DegreeSequence {
    std::vector<std::uint32_t> degrees;
    NodeClass label = NodeClass::movie;
};

/// How configuration_link reconciles unequal stub totals before matching.
///  - trim_random:   delete uniformly random stubs from the surplus side
///  - resample_last: shrink degrees from the tail of the surplus side's
///                   node list until the totals agree (no randomness)
///  - pad:           add stubs to uniformly random nodes on the deficit side
enum class BalancePolicy { trim_random, resample_last, pad };

struct BalanceAudit {
    std::uint64_t movie_stubs = 0;  // totals before balancing
    std::uint64_t actor_stubs = 0;
    std::uint64_t trimmed = 0;
    std::uint64_t padded = 0;
};

/// Bipartite multigraph over two node classes. Node identity is positional;
/// parallel links are permitted (stub matching can produce them).
class BipartiteGraph {
public:
    using Link = std::pair<std::uint32_t, std::uint32_t>;  // (movie, actor)

    BipartiteGraph(std::uint32_t n_movies, std::uint32_t n_actors,
                   std::vector<Link> links);

    std::uint32_t n_movies() const noexcept { return n_movies_; }
    std::uint32_t n_actors() const noexcept { return n_actors_; }
    std::span<const Link> links() const noexcept { return links_; }

private:
    std::uint32_t n_movies_;
    std::uint32_t n_actors_;
    std::vector<Link> links_;
};

/// Per-node link counts, parallel links counted with multiplicity.
DegreeSequence degree_sequence(const BipartiteGraph& graph, NodeClass side);

struct LinkResult {
    BipartiteGraph graph;
    BalanceAudit audit;
};

/// Configuration-model matching: each node becomes degree-many stubs, the
/// stub totals are balanced per the policy, and one stub array is shuffled
/// and zipped against the other — a uniformly random perfect matching. The
/// output degree sequences equal the balanced inputs exactly.
LinkResult configuration_link(const DegreeSequence& movies,
                              const DegreeSequence& actors,
                              std::uint64_t rng_seed,
                              BalancePolicy policy = BalancePolicy::trim_random);

struct GenerateOptions {
    BalancePolicy balance = BalancePolicy::trim_random;
    /// Added to every sampled degree; 1 selects the shifted-support
    /// convention where empirical degree distributions start at 1.
    std::uint32_t degree_offset = 0;
};

/// Samples both degree sequences from the given mixtures and links them.
LinkResult generate_network(const GeometricMixture& movie_dist,
                            const GeometricMixture& actor_dist,
                            std::uint32_t n_movies, std::uint32_t n_actors,
                            std::uint64_t rng_seed,
                            const GenerateOptions& options = {});

}  // namespace rsl
