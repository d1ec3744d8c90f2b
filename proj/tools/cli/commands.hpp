#pragma once

#include <supplyrank/artifacts.hpp>
#include <supplyrank/centrality.hpp>
#include <supplyrank/depgraph.hpp>
#include <supplyrank/timeutil.hpp>
#include <supplyrank/vulndb.hpp>

#include <chrono>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace supplyrank::cli {

enum class OutputFormat { json, csv };

inline constexpr std::string_view kStudyEvaluationDate = "2024-03-18";

struct PipelineConfig {
    std::filesystem::path graph_path;
    std::filesystem::path curated_path;
    std::string tracker_endpoint{kDefaultTrackerUrl};
    std::filesystem::path cache_dir;
    std::string release = "stable";
    std::size_t top_k = 200;
    Timestamp as_of{};
    CentralityParams centrality;
    bool strict = false;

    OutputFormat format = OutputFormat::json;
    std::optional<std::filesystem::path> output; // stdout when unset
    bool offline = false;
    std::chrono::seconds max_age{std::chrono::hours{24}};
    unsigned jobs = 0; // 0: hardware concurrency
    std::optional<Timestamp> clock;    // fetch-time clock override
};

/// $XDG_CACHE_HOME/supplyrank, else ~/.cache/supplyrank, else ./.supplyrank-cache.
std::filesystem::path default_cache_dir();

struct RankOutcome {
    RankingArtifact artifact;
    std::string rendered;
};

RankOutcome cmd_rank(const PipelineConfig& config);

struct VulnOutcome {
    VulnArtifact artifact;
    std::string rendered;
    std::vector<std::string> warnings;
};

/// Packages in scope are the non-excluded curated records, restricted to the
/// ranking when one is given. A mapped source absent from the tracker gets a
/// zero row: the tracker only lists packages that have entries.
VulnOutcome cmd_vuln(const PipelineConfig& config, HttpTransport& transport,
                     const std::optional<std::filesystem::path>& ranking_path = std::nullopt);

struct MetricsOutcome {
    MetricsArtifact artifact;
    std::string rendered;
};

/// Per package: `<repos_dir>/<id>/` is a git checkout (history + LoC);
/// otherwise `<repos_dir>/<id>.commits` is an interchange file, with LoC taken
/// from `<repos_dir>/<id>.tree/` when present.
MetricsOutcome cmd_metrics(const PipelineConfig& config, const std::filesystem::path& repos_dir);

struct ReportInputs {
    std::filesystem::path ranking;
    std::optional<std::filesystem::path> vuln;
    std::optional<std::filesystem::path> metrics;
};

/// Writes the report to config.output (a file for json, a directory for csv).
/// Returns the JSON document text.
std::string cmd_report(const PipelineConfig& config, const ReportInputs& inputs);

struct InspectRequest {
    std::optional<std::string> package;
    std::set<std::string> roots;
    Direction direction = Direction::forward;
    std::size_t depth = 1;
};

/// Summary JSON for the graph, plus per-package dependents when a package is
/// named. With roots, renders the extracted subgraph in export format instead.
std::string cmd_graph_inspect(const PipelineConfig& config, const InspectRequest& request);

} // namespace supplyrank::cli
