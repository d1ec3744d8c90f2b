#pragma once

// JSON encodings shared by the report and the stage artifacts.

#include "json_util.hpp"
#include "supplyrank/centrality.hpp"
#include "supplyrank/dataset.hpp"
#include "supplyrank/gitmetrics.hpp"
#include "supplyrank/report.hpp"
#include "supplyrank/stats.hpp"
#include "supplyrank/vulndb.hpp"

namespace supplyrank::detail {

using nlohmann::json;

template <typename T>
json optional_json(const std::optional<T>& value)
{
    return value ? json(*value) : json(nullptr);
}

inline json params_json(const CentralityParams& p)
{
    return {{"alpha", p.alpha},
            {"beta", p.beta},
            {"tolerance", p.tolerance},
            {"max_iterations", p.max_iterations},
            {"normalize", p.normalize}};
}

inline CentralityParams params_from(const json& j)
{
    CentralityParams p;
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    p.tolerance = j.at("tolerance").get<double>();
    p.max_iterations = j.at("max_iterations").get<int>();
    p.normalize = j.at("normalize").get<bool>();
    return p;
}

inline json graph_summary_json(const GraphSummary& g)
{
    return {{"node_count", g.node_count}, {"edge_count", g.edge_count}, {"sha256", g.sha256}};
}

inline GraphSummary graph_summary_from(const json& j)
{
    return {j.at("node_count").get<std::size_t>(), j.at("edge_count").get<std::size_t>(),
            j.at("sha256").get<std::string>()};
}

inline json snapshot_json(const SnapshotMeta& s)
{
    return {{"source_url", s.source_url},
            {"fetched_at", format_utc(s.fetched_at)},
            {"sha256", s.sha256},
            {"stale", s.stale},
            {"release_requested", s.release_requested},
            {"release_resolved", s.release_resolved}};
}

inline SnapshotMeta snapshot_from(const json& j)
{
    SnapshotMeta s;
    s.source_url = j.at("source_url").get<std::string>();
    s.fetched_at = parse_utc(j.at("fetched_at").get<std::string>());
    s.sha256 = j.at("sha256").get<std::string>();
    s.stale = j.at("stale").get<bool>();
    s.release_requested = j.at("release_requested").get<std::string>();
    s.release_resolved = j.at("release_resolved").get<std::string>();
    return s;
}

inline json vuln_json(const PackageVulnStats& v)
{
    return {{"source_package", v.source_package},
            {"total_entries", v.total_entries},
            {"open_count", v.open_count},
            {"resolved_count", v.resolved_count}};
}

inline PackageVulnStats vuln_from(const json& j)
{
    PackageVulnStats v;
    v.source_package = j.at("source_package").get<std::string>();
    v.total_entries = j.at("total_entries").get<std::size_t>();
    v.open_count = j.at("open_count").get<std::size_t>();
    v.resolved_count = j.at("resolved_count").get<std::size_t>();
    if (v.open_count + v.resolved_count > v.total_entries) {
        throw Error(ErrorKind::validation,
                    fmt::format("vulnerability stats for '{}' exceed the entry total", v.source_package));
    }
    return v;
}

inline json metrics_json(const RepoMetrics& m)
{
    json activity = json::array();
    for (const ActivityPoint& p : m.activity) {
        activity.push_back(json::array({p.label, p.count}));
    }
    return {{"repo_url", m.repo_url},
            {"age_days", m.age_days},
            {"commit_count", m.commit_count},
            {"author_count", m.author_count},
            {"bus_factor", m.bus_factor},
            {"loc", optional_json(m.loc)},
            {"first_commit", format_utc(m.first_commit)},
            {"last_commit", format_utc(m.last_commit)},
            {"future_commits", m.future_commits},
            {"activity", std::move(activity)}};
}

inline RepoMetrics metrics_from(const json& j)
{
    RepoMetrics m;
    m.repo_url = j.at("repo_url").get<std::string>();
    m.age_days = j.at("age_days").get<std::int64_t>();
    m.commit_count = j.at("commit_count").get<std::size_t>();
    m.author_count = j.at("author_count").get<std::size_t>();
    m.bus_factor = j.at("bus_factor").get<std::size_t>();
    if (const json& loc = j.at("loc"); !loc.is_null()) {
        m.loc = loc.get<std::uint64_t>();
    }
    m.first_commit = parse_utc(j.at("first_commit").get<std::string>());
    m.last_commit = parse_utc(j.at("last_commit").get<std::string>());
    m.future_commits = j.at("future_commits").get<std::size_t>();
    for (const json& p : j.at("activity")) {
        m.activity.push_back({p.at(0).get<std::string>(), p.at(1).get<std::size_t>()});
    }
    return m;
}

inline json box_json(const BoxStats& b)
{
    return {{"n", b.n},
            {"q1", b.q1},
            {"median", b.median},
            {"q3", b.q3},
            {"iqr", b.iqr},
            {"whisker_low", b.whisker_low},
            {"whisker_high", b.whisker_high},
            {"fliers", b.fliers}};
}

inline json regression_json(const RegressionFit& f)
{
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"r", f.r}, {"n", f.n}};
}

inline json breakdown_json(const std::vector<BreakdownEntry>& entries)
{
    json out = json::array();
    for (const BreakdownEntry& e : entries) {
        out.push_back({{"label", e.label}, {"count", e.count}, {"share", e.share}});
    }
    return out;
}

} // namespace supplyrank::detail
