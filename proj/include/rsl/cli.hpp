#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "rsl/io_formats.hpp"

namespace rsl::cli {

/// Shared run configuration. Every stochastic stage derives its stream from
/// the one root seed, and the seed is echoed into the report.
struct RunConfig {
    std::uint64_t seed = 1;
    bool shift_degrees = false;
    double scale = 1.0;
    std::string balance = "trim-random";  // trim-random | resample-last | pad
    std::filesystem::path out = "report.json";
    std::filesystem::path ccdf_dir;          // empty: no CCDF emission
    std::filesystem::path projection_edges;  // empty: no edge export
    std::string format = "auto";             // auto | pajek | edgelist
    bool quiet = false;                      // suppress the stdout table
};

BalancePolicy parse_balance(const std::string& name);
LabeledBipartiteNetwork load_network(const std::filesystem::path& input,
                                     const std::string& format);

struct AnalyzeArgs {
    std::filesystem::path input;
    RunConfig run;
};

struct RelinkArgs {
    std::filesystem::path input;
    RunConfig run;
};

struct GenerateArgs {
    // Mixtures come from fit files and/or inline parameters; for each side
    // exactly one source must be present.
    std::filesystem::path movie_fit;  // JSON written by cmd_fit
    std::filesystem::path actor_fit;
    double movie_p = 0.0;              // inline single geometric
    std::string actor_mixture;         // inline "weight:p[,weight:p...]"
    std::uint32_t n_movies = 0;
    std::uint32_t n_actors = 0;
    RunConfig run;
};

struct FitArgs {
    std::filesystem::path input;
    std::string side = "movie";  // movie | actor
    std::size_t components = 1;
    std::size_t restarts = 16;
    double gradient_tol = 1e-8;
    double step_tol = 1e-10;
    RunConfig run;
};

/// Degree extraction + stats + k_min scan on the movie side, actor side and
/// actor-actor projection; writes the report (and CCDF files when asked).
RunReport cmd_analyze(const AnalyzeArgs& args);

/// Configuration-model relink of the empirical degree sequences, then the
/// full analysis of the relinked network; reports the projection's
/// two-sample KS against the original.
RunReport cmd_relink(const RelinkArgs& args);

/// Sampled degree sequences -> configuration link -> full analysis.
RunReport cmd_generate(const GenerateArgs& args);

/// Fits one side's degree distribution and writes a fit file consumable by
/// cmd_generate.
nlohmann::ordered_json cmd_fit(const FitArgs& args);

}  // namespace rsl::cli
