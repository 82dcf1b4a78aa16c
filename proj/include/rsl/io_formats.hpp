#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rsl/bipartite_graph.hpp"
#include "rsl/netstats.hpp"
#include "rsl/tailfit.hpp"

namespace rsl {

struct LabeledBipartiteNetwork {
    BipartiteGraph graph;
    std::vector<std::string> movie_labels;
    std::vector<std::string> actor_labels;
};

/// Two-mode Pajek .net reader: a *Vertices section whose count line carries
/// the first-mode size, then *Edges / *Arcs link sections. Movies sit below
/// the mode boundary, actors above it. Tolerates CR/LF and '%' comments.
/// Throws ParseError / ModeViolation with the offending line number.
LabeledBipartiteNetwork read_pajek_bipartite(const std::filesystem::path& path);

/// Two-column text: movie id, actor id, whitespace- or comma-separated;
/// ids are interned in first-appearance order. '#' comments and blank
/// lines are skipped.
LabeledBipartiteNetwork read_edge_list(const std::filesystem::path& path);

void write_edge_list(const LabeledBipartiteNetwork& network,
                     const std::filesystem::path& path);

/// Projected actor-actor pairs as two-column text, one "i j" line per
/// distinct co-appearing pair.
void write_projected_edges(
    std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs,
    const std::filesystem::path& path);

/// Two-column CSV "degree,ccdf" over the observed positive degrees;
/// CCDF(k) = fraction of all nodes with degree >= k.
void write_ccdf(std::span<const std::uint32_t> degrees,
                const std::filesystem::path& path);

nlohmann::ordered_json mixture_to_json(const GeometricMixture& mix);
GeometricMixture mixture_from_json(const nlohmann::json& j);

/// One analyzed degree distribution: the Table-shaped row.
struct DistributionRow {
    std::string name;
    std::size_t n_nodes = 0;
    DegreeStats stats;
    TailFitReport tail;
    double zero_fraction = 0.0;
};

struct RunReport {
    std::string command;
    std::uint64_t seed = 0;
    std::string input;  // source path, or "synthetic"
    bool shift_degrees = false;
    std::string balance_policy;  // empty when no balancing happened
    std::optional<BalanceAudit> audit;
    std::vector<DistributionRow> rows;
    std::vector<std::pair<std::string, double>> metrics;
};

nlohmann::ordered_json report_to_json(const RunReport& report);
void write_report(const RunReport& report, const std::filesystem::path& path);

/// Fixed-width text table over the report rows (one line per distribution).
std::string render_table(const RunReport& report);

}  // namespace rsl
