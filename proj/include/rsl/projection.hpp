#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rsl/bipartite_graph.hpp"

namespace rsl {

struct ProjectedDegrees {
    std::vector<std::uint32_t> degrees;  // one per actor node
};

/// Unipartite actor-actor degree: degrees[i] counts the distinct actors
/// j != i sharing at least one movie with i. Repeat co-appearances and
/// parallel links count once. Works from per-actor neighbor marking, never
/// materializing the clique edges (large casts would blow up memory).
ProjectedDegrees project_actor_degrees(const BipartiteGraph& graph);

/// All distinct co-appearance pairs, each once with first < second.
/// Throws OutputTooLarge when the pair count would exceed max_pairs.
std::vector<std::pair<std::uint32_t, std::uint32_t>> project_edge_list(
    const BipartiteGraph& graph, std::uint64_t max_pairs = 100000000);

}  // namespace rsl
