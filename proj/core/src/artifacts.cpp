#include "supplyrank/artifacts.hpp"

#include "codec.hpp"
#include "supplyrank/csv.hpp"
#include "supplyrank/error.hpp"
#include "supplyrank/version.hpp"

#include <fmt/format.h>

#include <array>

namespace supplyrank {

using nlohmann::json;

namespace {

constexpr const char* kRankingSchema = "supplyrank.ranking";
constexpr const char* kVulnSchema = "supplyrank.vuln";
constexpr const char* kMetricsSchema = "supplyrank.metrics";

json header(const char* schema)
{
    return {{"schema", schema}, {"schema_version", kArtifactSchemaVersion}, {"tool_version", kToolVersion}};
}

json open_artifact(std::string_view text, const char* schema)
{
    json doc = detail::parse_json(text, schema);
    if (!doc.is_object()) {
        throw Error(ErrorKind::validation, fmt::format("{}: top level must be an object", schema));
    }
    const json* name = detail::member(doc, "schema");
    const json* version = detail::member(doc, "schema_version");
    if (!name || !name->is_string() || name->get<std::string>() != schema) {
        throw Error(ErrorKind::validation, fmt::format("schema mismatch: expected a '{}' artifact, got '{}'", schema,
                                                       name && name->is_string() ? name->get<std::string>() : "?"));
    }
    if (!version || !version->is_number_integer() || version->get<int>() != kArtifactSchemaVersion) {
        throw Error(ErrorKind::validation,
                    fmt::format("schema-version mismatch: '{}' artifact has version {}, this tool reads version {}",
                                schema, version ? version->dump() : "none", kArtifactSchemaVersion));
    }
    return doc;
}

template <typename F>
auto decode(const char* schema, F&& body)
{
    try {
        return body();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::validation, fmt::format("{} artifact: {}", schema, e.what()));
    }
}

json issues_json(const std::vector<MetricsIssue>& issues)
{
    json out = json::array();
    for (const MetricsIssue& i : issues) {
        out.push_back({{"package_id", i.package_id}, {"message", i.message}});
    }
    return out;
}

std::vector<MetricsIssue> issues_from(const json& j)
{
    std::vector<MetricsIssue> out;
    for (const json& i : j) {
        out.push_back({i.at("package_id").get<std::string>(), i.at("message").get<std::string>()});
    }
    return out;
}

} // namespace

RankingArtifact make_ranking(const GraphLoad& load, std::string_view document_sha256, const CentralityParams& params,
                             std::size_t top_k)
{
    const DependencyGraph& g = load.graph;
    const CentralityScores scores = katz_centrality(g, params);

    RankingArtifact out;
    out.graph = {g.node_count(), g.edge_count(), std::string(document_sha256)};
    out.duplicate_edges = load.report.duplicate_edges;
    out.dangling_edges = load.report.dangling_edges;
    out.ignored_label_edges = load.report.ignored_label_edges;
    out.params = params;
    out.iterations = scores.iterations();
    out.residual = scores.residual();
    out.spectral_radius_bound = spectral_radius_upper_bound(g);
    for (const RankedEntry& e : rank(scores, top_k)) {
        const NodeIndex i = g.index_of(e.id);
        const PackageNode& node = g.node(i);
        out.entries.push_back({e.id, node.name, node.licenses, e.score, e.rank, g.in_degree(i)});
    }
    return out;
}

std::string ranking_to_json(const RankingArtifact& a)
{
    json entries = json::array();
    for (const RankedPackage& p : a.entries) {
        entries.push_back({{"rank", p.rank},
                           {"id", p.package_id},
                           {"name", p.name},
                           {"licenses", p.licenses},
                           {"score", p.katz_score},
                           {"reverse_dependencies", p.reverse_dependencies}});
    }
    json doc = header(kRankingSchema);
    doc["graph"] = detail::graph_summary_json(a.graph);
    doc["ingest"] = {{"duplicate_edges", a.duplicate_edges},
                     {"dangling_edges", a.dangling_edges},
                     {"ignored_label_edges", a.ignored_label_edges}};
    doc["params"] = detail::params_json(a.params);
    doc["convergence"] = {{"iterations", a.iterations},
                          {"converged", true},
                          {"residual", a.residual},
                          {"spectral_radius_bound", a.spectral_radius_bound}};
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

RankingArtifact ranking_from_json(std::string_view text)
{
    const json doc = open_artifact(text, kRankingSchema);
    return decode(kRankingSchema, [&] {
        RankingArtifact a;
        a.graph = detail::graph_summary_from(doc.at("graph"));
        const json& ingest = doc.at("ingest");
        a.duplicate_edges = ingest.at("duplicate_edges").get<std::size_t>();
        a.dangling_edges = ingest.at("dangling_edges").get<std::size_t>();
        a.ignored_label_edges = ingest.at("ignored_label_edges").get<std::size_t>();
        a.params = detail::params_from(doc.at("params"));
        const json& conv = doc.at("convergence");
        a.iterations = conv.at("iterations").get<int>();
        a.residual = conv.at("residual").get<double>();
        a.spectral_radius_bound = conv.at("spectral_radius_bound").get<double>();
        for (const json& e : doc.at("entries")) {
            a.entries.push_back({e.at("id").get<std::string>(), e.at("name").get<std::string>(),
                                 e.at("licenses").get<std::vector<std::string>>(), e.at("score").get<double>(),
                                 e.at("rank").get<std::size_t>(), e.at("reverse_dependencies").get<std::size_t>()});
        }
        return a;
    });
}

std::string ranking_to_csv(const RankingArtifact& a)
{
    std::string out = "id,score,rank\n";
    for (const RankedPackage& p : a.entries) {
        const std::array<std::string, 3> row{p.package_id, csv::format_number(p.katz_score), std::to_string(p.rank)};
        out += csv::format_row(row);
    }
    return out;
}

std::map<std::string, PackageVulnStats> VulnArtifact::by_source() const
{
    std::map<std::string, PackageVulnStats> out;
    for (const VulnEntry& e : packages) {
        out.emplace(e.stats.source_package, e.stats);
    }
    return out;
}

std::string vuln_to_json(const VulnArtifact& a)
{
    json packages = json::array();
    for (const VulnEntry& e : a.packages) {
        json item = detail::vuln_json(e.stats);
        item["package_id"] = e.package_id;
        packages.push_back(std::move(item));
    }
    json doc = header(kVulnSchema);
    doc["snapshot"] = detail::snapshot_json(a.snapshot);
    doc["tracker"] = {{"package_count", a.tracker.package_count},
                      {"cve_entries", a.tracker.cve_entries},
                      {"open_entries", a.tracker.open_entries}};
    doc["packages"] = std::move(packages);
    doc["unmapped"] = a.unmapped;
    return doc.dump(2) + "\n";
}

VulnArtifact vuln_from_json(std::string_view text)
{
    const json doc = open_artifact(text, kVulnSchema);
    return decode(kVulnSchema, [&] {
        VulnArtifact a;
        a.snapshot = detail::snapshot_from(doc.at("snapshot"));
        const json& t = doc.at("tracker");
        a.tracker = {t.at("package_count").get<std::size_t>(), t.at("cve_entries").get<std::size_t>(),
                     t.at("open_entries").get<std::size_t>()};
        for (const json& p : doc.at("packages")) {
            a.packages.push_back({p.at("package_id").get<std::string>(), detail::vuln_from(p)});
        }
        a.unmapped = doc.at("unmapped").get<std::vector<std::string>>();
        return a;
    });
}

std::string vuln_to_csv(const VulnArtifact& a)
{
    std::string out = "package_id,debian_source,total_entries,open_count,resolved_count\n";
    for (const VulnEntry& e : a.packages) {
        const std::array<std::string, 5> row{e.package_id, e.stats.source_package, std::to_string(e.stats.total_entries),
                                             std::to_string(e.stats.open_count),
                                             std::to_string(e.stats.resolved_count)};
        out += csv::format_row(row);
    }
    return out;
}

std::map<std::string, RepoMetrics> MetricsArtifact::by_package() const
{
    std::map<std::string, RepoMetrics> out;
    for (const MetricsEntry& e : repos) {
        out.emplace(e.package_id, e.metrics);
    }
    return out;
}

std::string metrics_to_json(const MetricsArtifact& a)
{
    json repos = json::array();
    for (const MetricsEntry& e : a.repos) {
        json item = detail::metrics_json(e.metrics);
        item["package_id"] = e.package_id;
        repos.push_back(std::move(item));
    }
    json doc = header(kMetricsSchema);
    doc["as_of"] = format_utc(a.as_of);
    doc["bus_factor_threshold"] = a.bus_factor_threshold;
    doc["repos"] = std::move(repos);
    doc["missing"] = issues_json(a.missing);
    doc["errors"] = issues_json(a.errors);
    return doc.dump(2) + "\n";
}

MetricsArtifact metrics_from_json(std::string_view text)
{
    const json doc = open_artifact(text, kMetricsSchema);
    return decode(kMetricsSchema, [&] {
        MetricsArtifact a;
        a.as_of = parse_utc(doc.at("as_of").get<std::string>());
        a.bus_factor_threshold = doc.at("bus_factor_threshold").get<double>();
        for (const json& r : doc.at("repos")) {
            a.repos.push_back({r.at("package_id").get<std::string>(), detail::metrics_from(r)});
        }
        a.missing = issues_from(doc.at("missing"));
        a.errors = issues_from(doc.at("errors"));
        return a;
    });
}

std::string metrics_to_csv(const MetricsArtifact& a)
{
    std::string out =
        "package_id,repo_url,age_days,commit_count,author_count,bus_factor,loc,first_commit,last_commit\n";
    for (const MetricsEntry& e : a.repos) {
        const RepoMetrics& m = e.metrics;
        const std::array<std::string, 9> row{e.package_id,
                                             m.repo_url,
                                             std::to_string(m.age_days),
                                             std::to_string(m.commit_count),
                                             std::to_string(m.author_count),
                                             std::to_string(m.bus_factor),
                                             m.loc ? std::to_string(*m.loc) : std::string{},
                                             format_utc(m.first_commit),
                                             format_utc(m.last_commit)};
        out += csv::format_row(row);
    }
    return out;
}

} // namespace supplyrank
