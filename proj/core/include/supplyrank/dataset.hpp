#pragma once

#include "supplyrank/gitmetrics.hpp"
#include "supplyrank/vulndb.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace supplyrank {

enum class Backer { single_person, npo, company, multi, unknown };
enum class ExclusionReason { duplicate_version, docs_only, legacy_vcs, other };

std::string_view to_string(Backer b) noexcept;
std::string_view to_string(ExclusionReason r) noexcept;
/// Case-insensitive; accepts `single person`, `single-person`, `single`, `npo`, ...
std::optional<Backer> parse_backer(std::string_view text);
std::optional<ExclusionReason> parse_exclusion_reason(std::string_view text);

/// Manually curated facts about one ranked package. Empty CSV cells are absent.
struct CuratedRecord {
    std::string package_id;
    std::optional<std::string> repo_url;
    std::optional<std::string> language;
    std::optional<std::string> category;
    std::optional<Backer> backer;
    std::optional<std::string> debian_source;
    bool excluded = false;
    std::optional<ExclusionReason> exclusion_reason;

    friend bool operator==(const CuratedRecord&, const CuratedRecord&) = default;
};

inline constexpr std::string_view kCuratedHeader =
    "package_id,repo_url,language,category,backer,debian_source,excluded,exclusion_reason";

struct CuratedLoad {
    std::vector<CuratedRecord> records;
    std::vector<std::string> warnings;

    std::size_t excluded_count() const;
};

/// Reads the curated CSV. Unknown columns produce warnings; a missing
/// package_id, an invalid enum value, an excluded flag without a reason (or
/// the reverse) and duplicate ids are Error{validation} naming the line.
CuratedLoad load_curated(std::string_view csv_text);

std::string serialize_curated(std::span<const CuratedRecord> records);

/// One entry of the centrality ranking as carried between pipeline stages.
struct RankedPackage {
    std::string package_id;
    std::string name;
    std::vector<std::string> licenses;
    double katz_score = 0.0;
    std::size_t rank = 0;
    std::size_t reverse_dependencies = 0;
};

struct AnalysisRow {
    std::string package_id;
    std::string name;
    std::size_t rank = 0;
    double katz_score = 0.0;
    std::size_t reverse_dependencies = 0;
    std::vector<std::string> licenses;
    CuratedRecord metadata; // package_id only when no curated record exists
    std::optional<PackageVulnStats> vuln;
    std::optional<RepoMetrics> metrics;
};

struct AnalysisTable {
    std::vector<AnalysisRow> rows;
    /// Non-excluded ranked packages without a Debian mapping; only filled when
    /// vulnerability stats were supplied.
    std::vector<std::string> missing_in_debian;
    std::vector<std::string> excluded;
    std::vector<std::string> warnings;
};

/// Left-joins ranking, curation, vulnerability stats (keyed by Debian source
/// package) and repository metrics (keyed by package id). Rows keep ranking
/// order; excluded packages are dropped. Throws Error{domain} for an empty
/// ranking.
AnalysisTable build_table(std::span<const RankedPackage> ranking, std::span<const CuratedRecord> curated,
                          const std::optional<std::map<std::string, PackageVulnStats>>& vuln_by_source,
                          const std::map<std::string, RepoMetrics>& metrics_by_package);

} // namespace supplyrank
