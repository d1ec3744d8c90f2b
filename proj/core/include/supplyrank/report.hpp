#pragma once

#include "supplyrank/centrality.hpp"
#include "supplyrank/dataset.hpp"
#include "supplyrank/stats.hpp"
#include "supplyrank/timeutil.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace supplyrank {

struct GraphSummary {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::string sha256; // digest of the export document

    friend bool operator==(const GraphSummary&, const GraphSummary&) = default;
};

/// Provenance of the vulnerability snapshot a report was built from.
struct SnapshotMeta {
    std::string source_url;
    Timestamp fetched_at{};
    std::string sha256;
    bool stale = false;
    std::string release_requested;
    std::string release_resolved;

    friend bool operator==(const SnapshotMeta&, const SnapshotMeta&) = default;
};

struct OpenIssue {
    std::size_t rank;
    std::string package_id;
    std::size_t open_count;

    friend bool operator==(const OpenIssue&, const OpenIssue&) = default;
};

/// Rows with at least one open issue, in centrality-rank order. Rows without
/// vulnerability stats are skipped.
std::vector<OpenIssue> open_issues_by_centrality(std::span<const AnalysisRow> rows);

struct Report {
    Timestamp generated_at{};
    std::string tool_version;
    GraphSummary graph_summary;
    CentralityParams params;
    std::optional<SnapshotMeta> snapshot_meta;
    std::vector<std::string> notes;

    std::vector<AnalysisRow> ranking;
    std::optional<std::vector<OpenIssue>> open_issues;
    std::optional<std::vector<std::string>> missing_in_debian;
    std::map<std::string, BoxStats> box_stats;
    std::map<std::string, std::vector<BreakdownEntry>> breakdowns;
    std::map<std::string, RegressionFit> regressions;
};

struct ReportContext {
    Timestamp generated_at{};
    GraphSummary graph_summary;
    CentralityParams params;
    std::optional<SnapshotMeta> snapshot_meta; // set iff vulnerability stats were joined
    bool has_metrics = false;
};

/// Derives every report section from the joined table.
Report assemble_report(const AnalysisTable& table, const ReportContext& context);

/// Single self-describing JSON document with sorted keys, LF-terminated.
std::string report_to_json(const Report& report);

enum class ReportFormat { json, csv_bundle };

struct EmittedFile {
    std::string file;
    std::size_t rows;
    std::string sha256;
};

/// json: writes `target` as one file. csv_bundle: writes one CSV per table
/// into the directory `target` plus `manifest.json` listing `{file, rows,
/// sha256}` for each. Returns the files written (excluding the manifest).
/// Throws Error{io} naming the path.
std::vector<EmittedFile> emit_report(const Report& report, ReportFormat format, const std::filesystem::path& target);

} // namespace supplyrank
