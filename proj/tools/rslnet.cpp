#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

#include "rsl/cli.hpp"

namespace {

void add_run_flags(CLI::App* cmd, rsl::cli::RunConfig& run, bool with_balance) {
    cmd->add_option("--seed", run.seed, "root seed; every stage derives from it");
    cmd->add_flag("--shift-degrees", run.shift_degrees,
                  "treat degree distributions as starting at 1 (fit on k-1, "
                  "generate as 1+k)");
    cmd->add_option("--out", run.out, "report path")->capture_default_str();
    cmd->add_option("--ccdf-dir", run.ccdf_dir,
                    "directory for degree,ccdf CSV plot data");
    cmd->add_option("--projection-edges", run.projection_edges,
                    "write the distinct actor-actor pairs to this path");
    cmd->add_option("--format", run.format, "input format: auto|pajek|edgelist")
        ->capture_default_str();
    cmd->add_flag("--quiet", run.quiet, "suppress the stdout table");
    if (with_balance)
        cmd->add_option("--balance", run.balance,
                        "stub balancing: trim-random|resample-last|pad")
            ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bipartite randomly stopped linking model: fit, relink, "
                 "generate and test degree distributions for scale-freeness"};
    app.require_subcommand(1);

    rsl::cli::AnalyzeArgs analyze;
    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze", "degree stats and k_min scan for a real network");
    analyze_cmd->add_option("input", analyze.input, "network file")->required();
    add_run_flags(analyze_cmd, analyze.run, false);

    rsl::cli::RelinkArgs relink;
    CLI::App* relink_cmd = app.add_subcommand(
        "relink", "break every link and rematch stubs, then analyze");
    relink_cmd->add_option("input", relink.input, "network file")->required();
    add_run_flags(relink_cmd, relink.run, true);

    rsl::cli::GenerateArgs generate;
    CLI::App* generate_cmd = app.add_subcommand(
        "generate", "sample degree sequences from fitted mixtures and link");
    generate_cmd->add_option("--movie-fit", generate.movie_fit,
                             "fit file for the movie side");
    generate_cmd->add_option("--actor-fit", generate.actor_fit,
                             "fit file for the actor side");
    generate_cmd->add_option("--movie-p", generate.movie_p,
                             "inline single geometric p for the movie side");
    generate_cmd->add_option("--actor-mixture", generate.actor_mixture,
                             "inline actor mixture, weight:p[,weight:p...]");
    generate_cmd->add_option("--movies", generate.n_movies, "movie node count")
        ->required();
    generate_cmd->add_option("--actors", generate.n_actors, "actor node count")
        ->required();
    generate_cmd
        ->add_option("--scale", generate.run.scale,
                     "node count multiplier (CI runs use small scales)")
        ->capture_default_str();
    add_run_flags(generate_cmd, generate.run, true);

    rsl::cli::FitArgs fit;
    CLI::App* fit_cmd = app.add_subcommand(
        "fit", "fit a geometric (or mixture) to one side's degrees");
    fit_cmd->add_option("input", fit.input, "network file")->required();
    fit_cmd->add_option("--side", fit.side, "movie|actor")->capture_default_str();
    fit_cmd->add_option("--components", fit.components, "mixture size K")
        ->capture_default_str();
    fit_cmd->add_option("--restarts", fit.restarts, "multi-start count")
        ->capture_default_str();
    fit_cmd->add_option("--tol-grad", fit.gradient_tol, "gradient tolerance")
        ->capture_default_str();
    fit_cmd->add_option("--tol-step", fit.step_tol, "step tolerance")
        ->capture_default_str();
    add_run_flags(fit_cmd, fit.run, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze_cmd->parsed()) rsl::cli::cmd_analyze(analyze);
        if (relink_cmd->parsed()) rsl::cli::cmd_relink(relink);
        if (generate_cmd->parsed()) rsl::cli::cmd_generate(generate);
        if (fit_cmd->parsed()) rsl::cli::cmd_fit(fit);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
