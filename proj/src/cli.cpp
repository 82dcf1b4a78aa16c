#include "rsl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "rsl/errors.hpp"
#include "rsl/fitting.hpp"
#include "rsl/netstats.hpp"
#include "rsl/projection.hpp"
#include "rsl/rng.hpp"
#include "rsl/tailfit.hpp"

namespace rsl::cli {
namespace {

DistributionRow make_row(std::string name, std::span<const std::uint32_t> degrees) {
    DistributionRow row;
    row.name = std::move(name);
    row.n_nodes = degrees.size();
    row.stats = compute_stats(degrees);
    row.tail = scan_k_min(degrees);
    std::size_t zeros = 0;
    for (std::uint32_t d : degrees)
        if (d == 0) ++zeros;
    row.zero_fraction = static_cast<double>(zeros) / static_cast<double>(degrees.size());
    return row;
}

void append_network_rows(RunReport& report, const BipartiteGraph& graph,
                         const std::string& prefix) {
    const DegreeSequence movies = degree_sequence(graph, NodeClass::movie);
    const DegreeSequence actors = degree_sequence(graph, NodeClass::actor);
    const ProjectedDegrees projected = project_actor_degrees(graph);
    report.rows.push_back(make_row(prefix + "actors per movie", movies.degrees));
    report.rows.push_back(make_row(prefix + "movies per actor", actors.degrees));
    report.rows.push_back(make_row(prefix + "actor-actor degree", projected.degrees));
}

void emit_artifacts(const BipartiteGraph& graph, const RunConfig& run) {
    if (!run.ccdf_dir.empty()) {
        std::filesystem::create_directories(run.ccdf_dir);
        write_ccdf(degree_sequence(graph, NodeClass::movie).degrees,
                   run.ccdf_dir / "movie_degree_ccdf.csv");
        write_ccdf(degree_sequence(graph, NodeClass::actor).degrees,
                   run.ccdf_dir / "actor_degree_ccdf.csv");
        write_ccdf(project_actor_degrees(graph).degrees,
                   run.ccdf_dir / "projection_degree_ccdf.csv");
    }
    if (!run.projection_edges.empty())
        write_projected_edges(project_edge_list(graph), run.projection_edges);
}

void finish(RunReport& report, const RunConfig& run) {
    write_report(report, run.out);
    if (!run.quiet) std::cout << render_table(report);
}

GeometricMixture mixture_from_fit_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open fit file: " + path.string());
    nlohmann::json j;
    in >> j;
    return mixture_from_json(j.at("mixture"));
}

GeometricMixture parse_inline_mixture(const std::string& text) {
    std::vector<MixtureComponent> comps;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string part = text.substr(pos, comma - pos);
        const std::size_t colon = part.find(':');
        if (colon == std::string::npos)
            throw Error("mixture component '" + part + "' is not weight:p");
        comps.push_back(MixtureComponent{
            std::stod(part.substr(0, colon)),
            GeometricParams(std::stod(part.substr(colon + 1)))});
        pos = comma + 1;
    }
    return GeometricMixture(std::move(comps));
}

std::uint32_t scaled_count(std::uint32_t n, double scale) {
    const double s = std::max(1.0, std::round(static_cast<double>(n) * scale));
    return static_cast<std::uint32_t>(s);
}

}  // namespace

BalancePolicy parse_balance(const std::string& name) {
    if (name == "trim-random") return BalancePolicy::trim_random;
    if (name == "resample-last") return BalancePolicy::resample_last;
    if (name == "pad") return BalancePolicy::pad;
    throw Error("unknown balance policy: " + name);
}

LabeledBipartiteNetwork load_network(const std::filesystem::path& input,
                                     const std::string& format) {
    if (format == "pajek") return read_pajek_bipartite(input);
    if (format == "edgelist") return read_edge_list(input);
    if (format == "auto")
        return input.extension() == ".net" ? read_pajek_bipartite(input)
                                           : read_edge_list(input);
    throw Error("unknown input format: " + format);
}

RunReport cmd_analyze(const AnalyzeArgs& args) {
    const LabeledBipartiteNetwork network = load_network(args.input, args.run.format);
    RunReport report;
    report.command = "analyze";
    report.input = args.input.string();
    report.seed = args.run.seed;
    report.shift_degrees = args.run.shift_degrees;
    append_network_rows(report, network.graph, "");
    emit_artifacts(network.graph, args.run);
    finish(report, args.run);
    return report;
}

RunReport cmd_relink(const RelinkArgs& args) {
    const LabeledBipartiteNetwork network = load_network(args.input, args.run.format);
    const DegreeSequence movies = degree_sequence(network.graph, NodeClass::movie);
    const DegreeSequence actors = degree_sequence(network.graph, NodeClass::actor);

    const LinkResult relinked =
        configuration_link(movies, actors, derive_seed(args.run.seed, "relink"),
                           parse_balance(args.run.balance));

    RunReport report;
    report.command = "relink";
    report.input = args.input.string();
    report.seed = args.run.seed;
    report.shift_degrees = args.run.shift_degrees;
    report.balance_policy = args.run.balance;
    report.audit = relinked.audit;
    append_network_rows(report, relinked.graph, "relinked ");

    const ProjectedDegrees original = project_actor_degrees(network.graph);
    const ProjectedDegrees rewired = project_actor_degrees(relinked.graph);
    report.metrics.emplace_back("ks_projection_vs_original",
                                ks_two_sample(rewired.degrees, original.degrees));

    emit_artifacts(relinked.graph, args.run);
    finish(report, args.run);
    return report;
}

RunReport cmd_generate(const GenerateArgs& args) {
    const GeometricMixture movie_dist =
        !args.movie_fit.empty()
            ? mixture_from_fit_file(args.movie_fit)
            : GeometricMixture::single(GeometricParams(args.movie_p));
    const GeometricMixture actor_dist = !args.actor_fit.empty()
                                            ? mixture_from_fit_file(args.actor_fit)
                                            : parse_inline_mixture(args.actor_mixture);
    if (args.n_movies == 0 || args.n_actors == 0)
        throw Error("generate needs --movies and --actors counts");

    GenerateOptions options;
    options.balance = parse_balance(args.run.balance);
    options.degree_offset = args.run.shift_degrees ? 1 : 0;

    const std::uint32_t n_movies = scaled_count(args.n_movies, args.run.scale);
    const std::uint32_t n_actors = scaled_count(args.n_actors, args.run.scale);
    const LinkResult generated =
        generate_network(movie_dist, actor_dist, n_movies, n_actors,
                         derive_seed(args.run.seed, "generate"), options);

    RunReport report;
    report.command = "generate";
    report.input = "synthetic";
    report.seed = args.run.seed;
    report.shift_degrees = args.run.shift_degrees;
    report.balance_policy = args.run.balance;
    report.audit = generated.audit;
    append_network_rows(report, generated.graph, "generated ");

    const double total_stubs = static_cast<double>(generated.audit.movie_stubs +
                                                   generated.audit.actor_stubs);
    if (total_stubs > 0)
        report.metrics.emplace_back(
            "stub_trim_fraction",
            static_cast<double>(generated.audit.trimmed) / total_stubs);
    report.metrics.emplace_back("n_movies", static_cast<double>(n_movies));
    report.metrics.emplace_back("n_actors", static_cast<double>(n_actors));

    emit_artifacts(generated.graph, args.run);
    finish(report, args.run);
    return report;
}

nlohmann::ordered_json cmd_fit(const FitArgs& args) {
    if (args.side != "actor" && args.side != "movie")
        throw Error("fit --side must be movie or actor");
    const LabeledBipartiteNetwork network = load_network(args.input, args.run.format);
    const DegreeSequence side = degree_sequence(
        network.graph, args.side == "actor" ? NodeClass::actor : NodeClass::movie);

    const EmpiricalPMF pmf =
        EmpiricalPMF::from_degrees(side.degrees, args.run.shift_degrees);
    const double mu = pmf.mean();

    nlohmann::ordered_json j;
    j["command"] = "fit";
    j["input"] = args.input.string();
    j["side"] = args.side;
    j["seed"] = args.run.seed;
    j["shift_degrees"] = args.run.shift_degrees;
    j["components_requested"] = args.components;
    j["empirical_mean"] = mu;
    // Both single-geometric parameter conventions, so either can be fed back
    // into generation: p_from_mean follows the k>=0 support; the shifted
    // convention treats the data as starting at k = 1.
    j["p_from_mean"] = 1.0 / (1.0 + mu);
    if (mu > 0.0) j["p_shifted_convention"] = 1.0 / mu;

    if (args.components <= 1) {
        const GeometricParams params = fit_single_geometric(pmf);
        const GeometricMixture mix = GeometricMixture::single(params);
        j["converged"] = true;
        j["iterations"] = 0;
        j["residual_norm"] = nullptr;
        j["dropped_components"] = 0;
        j["ks"] = mixture_ks(mix, pmf);
        j["mixture"] = mixture_to_json(mix);
    } else {
        FitOptions options;
        options.restarts = args.restarts;
        options.gradient_tol = args.gradient_tol;
        options.step_tol = args.step_tol;
        options.seed = derive_seed(args.run.seed, "fit");
        const MixtureFitResult result =
            fit_geometric_mixture(pmf, args.components, options);
        j["converged"] = result.converged;
        j["iterations"] = result.iterations;
        j["residual_norm"] = result.residual_norm;
        j["dropped_components"] = result.dropped_components;
        j["ks"] = result.ks_statistic;
        j["mixture"] = mixture_to_json(result.mixture);
    }

    std::ofstream out(args.run.out, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + args.run.out.string());
    out << j.dump(2) << '\n';
    if (!args.run.quiet)
        std::cout << "fit written to " << args.run.out.string() << " (ks="
                  << j["ks"].dump() << ")\n";
    return j;
}

}  // namespace rsl::cli
