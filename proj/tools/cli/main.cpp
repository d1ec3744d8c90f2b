// supplyrank: rank distribution packages by Katz centrality and enrich the
// ranking with tracker and repository data.

#include "commands.hpp"

#include <supplyrank/error.hpp>
#include <supplyrank/version.hpp>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

namespace {

using namespace supplyrank;
using supplyrank::cli::OutputFormat;
using supplyrank::cli::PipelineConfig;

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kInvalidInput = 2,
    kNetwork = 3,
    kDivergence = 4,
    kIo = 5,
};

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::validation:
    case ErrorKind::not_found:
        return kInvalidInput;
    case ErrorKind::network:
        return kNetwork;
    case ErrorKind::divergence:
        return kDivergence;
    case ErrorKind::io:
        return kIo;
    case ErrorKind::domain:
    case ErrorKind::environment:
        return kFailure;
    }
    return kFailure;
}

std::string env_or(const char* name, std::string fallback)
{
    const char* value = std::getenv(name);
    return value && *value ? value : fallback;
}

struct Flags {
    std::string as_of;
    std::string format = "json";
    std::string output;
    std::string max_age = "24h";
    bool paper_mode = false;
    bool no_normalize = false;
    bool verbose = false;
    bool quiet = false;
};

std::chrono::seconds parse_duration(const std::string& text)
{
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    const std::string unit = text.substr(used);
    if (used == 0 || value < 0 || !(unit == "s" || unit == "m" || unit == "h" || unit == "d" || unit.empty())) {
        throw Error(ErrorKind::validation, "--max-age expects a duration such as 90s, 30m, 24h or 7d");
    }
    const long long scale = unit == "m" ? 60 : unit == "h" ? 3600 : unit == "d" ? 86400 : 1;
    return std::chrono::seconds{value * scale};
}

void finalize(PipelineConfig& config, const Flags& flags)
{
    if (!flags.as_of.empty()) {
        config.as_of = parse_utc(flags.as_of);
    } else if (flags.paper_mode) {
        config.as_of = parse_utc(cli::kStudyEvaluationDate);
    } else {
        config.as_of = today_utc();
    }
    if (flags.paper_mode) {
        config.top_k = 200;
        config.release = "stable";
    }
    config.format = flags.format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (!flags.output.empty()) {
        config.output = flags.output;
    }
    config.centrality.normalize = !flags.no_normalize;
    config.max_age = parse_duration(flags.max_age);
    if (flags.quiet) {
        spdlog::set_level(spdlog::level::err);
    } else if (flags.verbose) {
        spdlog::set_level(spdlog::level::debug);
    }
}

void emit(const PipelineConfig& config, const std::string& rendered)
{
    if (!config.output) {
        std::cout << rendered;
    }
}

} // namespace

int main(int argc, char** argv)
{
    auto logger = spdlog::stderr_color_mt("supplyrank");
    logger->set_pattern("%^%l%$: %v");
    spdlog::set_default_logger(logger);

    PipelineConfig config;
    config.tracker_endpoint = env_or("SUPPLYRANK_TRACKER_URL", std::string(kDefaultTrackerUrl));
    config.cache_dir = env_or("SUPPLYRANK_CACHE_DIR", "");
    Flags flags;

    CLI::App app{"Rank packages by supply-chain criticality"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    auto common = [&](CLI::App* cmd) {
        cmd->add_option("-o,--output", flags.output, "Output path (stdout when omitted)");
        cmd->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        cmd->add_flag("--strict", config.strict, "Treat recoverable data problems as errors");
        cmd->add_option("--as-of", flags.as_of, "Evaluation date, YYYY-MM-DD (default: today)");
        cmd->add_flag("--paper-mode", flags.paper_mode, "Evaluation date 2024-03-18, top 200, Debian stable");
        cmd->add_flag("-v,--verbose", flags.verbose, "Debug logging");
        cmd->add_flag("-q,--quiet", flags.quiet, "Errors only");
    };

    auto* rank = app.add_subcommand("rank", "Rank graph nodes by Katz centrality");
    common(rank);
    rank->add_option("graph", config.graph_path, "Graph export JSON")->required();
    rank->add_option("--top-k", config.top_k, "Entries to keep")->check(CLI::PositiveNumber);
    rank->add_option("--alpha", config.centrality.alpha, "Attenuation factor");
    rank->add_option("--beta", config.centrality.beta, "Base weight");
    rank->add_option("--tolerance", config.centrality.tolerance, "Convergence threshold per node");
    rank->add_option("--max-iterations", config.centrality.max_iterations, "Iteration cap before reporting divergence");
    rank->add_flag("--no-normalize", flags.no_normalize, "Keep raw scores instead of L2-normalizing");

    std::string ranking_path;
    auto* vuln = app.add_subcommand("vuln", "Summarize tracker status for the mapped packages");
    common(vuln);
    vuln->add_option("--curated", config.curated_path, "Curated metadata CSV")->required();
    vuln->add_option("--ranking", ranking_path, "Restrict to packages in this ranking artifact");
    vuln->add_option("--endpoint", config.tracker_endpoint, "Tracker JSON URL (env SUPPLYRANK_TRACKER_URL)");
    vuln->add_option("--cache-dir", config.cache_dir, "Snapshot cache directory (env SUPPLYRANK_CACHE_DIR)");
    vuln->add_option("--release", config.release, "Release name or alias (stable, testing, ...)");
    vuln->add_option("--max-age", flags.max_age, "Reuse a cached snapshot younger than this");
    vuln->add_flag("--offline", config.offline, "Never touch the network; use the cache as is");

    std::string repos_dir;
    auto* metrics = app.add_subcommand("metrics", "Mine repository histories for maintenance metrics");
    common(metrics);
    metrics->add_option("--curated", config.curated_path, "Curated metadata CSV")->required();
    metrics->add_option("--repos", repos_dir, "Directory of clones or .commits files")->required();
    metrics->add_option("-j,--jobs", config.jobs, "Worker threads (default: all cores)");

    cli::ReportInputs inputs;
    std::string vuln_path;
    std::string metrics_path;
    auto* report = app.add_subcommand("report", "Join the stage artifacts into the final report");
    common(report);
    report->add_option("--ranking", ranking_path, "Ranking artifact")->required();
    report->add_option("--curated", config.curated_path, "Curated metadata CSV");
    report->add_option("--vuln", vuln_path, "Vulnerability artifact");
    report->add_option("--metrics", metrics_path, "Metrics artifact");

    cli::InspectRequest inspect_request;
    std::vector<std::string> roots;
    std::string direction = "forward";
    auto* graph = app.add_subcommand("graph", "Graph utilities");
    graph->require_subcommand(1);
    auto* inspect = graph->add_subcommand("inspect", "Summarize a graph export or extract a subgraph");
    common(inspect);
    inspect->add_option("graph", config.graph_path, "Graph export JSON")->required();
    inspect->add_option("--package", inspect_request.package, "Show one package and its dependents");
    inspect->add_option("--root", roots, "Extract the subgraph around these ids");
    inspect->add_option("--direction", direction)->check(CLI::IsMember({"forward", "reverse"}));
    inspect->add_option("--depth", inspect_request.depth, "Hops from the roots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInvalidInput;
    }

    try {
        finalize(config, flags);
        if (*rank) {
            emit(config, cli::cmd_rank(config).rendered);
        } else if (*vuln) {
            CurlTransport transport;
            std::optional<std::filesystem::path> restrict_to;
            if (!ranking_path.empty()) {
                restrict_to = ranking_path;
            }
            emit(config, cli::cmd_vuln(config, transport, restrict_to).rendered);
        } else if (*metrics) {
            emit(config, cli::cmd_metrics(config, repos_dir).rendered);
        } else if (*report) {
            inputs.ranking = ranking_path;
            if (!vuln_path.empty()) {
                inputs.vuln = vuln_path;
            }
            if (!metrics_path.empty()) {
                inputs.metrics = metrics_path;
            }
            emit(config, cli::cmd_report(config, inputs));
        } else if (*inspect) {
            inspect_request.roots.insert(roots.begin(), roots.end());
            inspect_request.direction = direction == "reverse" ? Direction::reverse : Direction::forward;
            emit(config, cli::cmd_graph_inspect(config, inspect_request));
        }
    } catch (const DivergenceError& e) {
        spdlog::error("{}", e.what());
        return kDivergence;
    } catch (const Error& e) {
        spdlog::error("{} error: {}", to_string(e.kind()), e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kFailure;
    }
    return kOk;
}
