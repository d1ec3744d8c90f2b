#pragma once

#include "supplyrank/centrality.hpp"
#include "supplyrank/dataset.hpp"
#include "supplyrank/depgraph.hpp"
#include "supplyrank/gitmetrics.hpp"
#include "supplyrank/report.hpp"
#include "supplyrank/vulndb.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Files exchanged between pipeline stages (rank -> vuln/metrics -> report).
// Each carries a schema name and version; readers reject anything else with
// Error{validation}.

namespace supplyrank {

inline constexpr int kArtifactSchemaVersion = 1;

struct RankingArtifact {
    GraphSummary graph;
    std::size_t duplicate_edges = 0;
    std::size_t dangling_edges = 0;
    std::size_t ignored_label_edges = 0;
    CentralityParams params;
    int iterations = 0;
    double residual = 0.0;
    double spectral_radius_bound = 0.0;
    std::vector<RankedPackage> entries;
};

/// Ranks a loaded graph and packages the top-k with node metadata.
RankingArtifact make_ranking(const GraphLoad& load, std::string_view document_sha256, const CentralityParams& params,
                             std::size_t top_k);

std::string ranking_to_json(const RankingArtifact& artifact);
RankingArtifact ranking_from_json(std::string_view text);
/// `id,score,rank`
std::string ranking_to_csv(const RankingArtifact& artifact);

struct VulnEntry {
    std::string package_id;
    PackageVulnStats stats;
};

struct VulnArtifact {
    SnapshotMeta snapshot;
    TrackerTotals tracker;
    std::vector<VulnEntry> packages; // ordered by package_id
    std::vector<std::string> unmapped;

    /// Stats keyed by Debian source package, as build_table expects.
    std::map<std::string, PackageVulnStats> by_source() const;
};

std::string vuln_to_json(const VulnArtifact& artifact);
VulnArtifact vuln_from_json(std::string_view text);
/// `package_id,debian_source,total_entries,open_count,resolved_count`
std::string vuln_to_csv(const VulnArtifact& artifact);

struct MetricsEntry {
    std::string package_id;
    RepoMetrics metrics;
};

struct MetricsIssue {
    std::string package_id;
    std::string message;
};

struct MetricsArtifact {
    Timestamp as_of{};
    double bus_factor_threshold = kDefaultBusFactorThreshold;
    std::vector<MetricsEntry> repos; // ordered by package_id
    std::vector<MetricsIssue> missing;
    std::vector<MetricsIssue> errors;

    std::map<std::string, RepoMetrics> by_package() const;
};

std::string metrics_to_json(const MetricsArtifact& artifact);
MetricsArtifact metrics_from_json(std::string_view text);
std::string metrics_to_csv(const MetricsArtifact& artifact);

} // namespace supplyrank
