#include "supplyrank/report.hpp"

#include "codec.hpp"
#include "supplyrank/csv.hpp"
#include "supplyrank/error.hpp"
#include "supplyrank/fileio.hpp"
#include "supplyrank/version.hpp"

#include <fmt/format.h>

#include <array>

namespace supplyrank {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kReportSchema = "supplyrank.report";
constexpr const char* kBundleSchema = "supplyrank.report-bundle";
constexpr int kReportSchemaVersion = 1;

constexpr std::array kBreakdownFields{BreakdownField::language, BreakdownField::license, BreakdownField::category,
                                      BreakdownField::backer};

void add_box(Report& report, const std::string& name, const std::vector<double>& sample)
{
    if (!sample.empty()) {
        report.box_stats.emplace(name, box_stats(sample));
    }
}

template <typename Pick>
std::vector<double> collect(std::span<const AnalysisRow> rows, Pick pick)
{
    std::vector<double> out;
    for (const AnalysisRow& row : rows) {
        if (std::optional<double> v = pick(row)) {
            out.push_back(*v);
        }
    }
    return out;
}

// Monthly series are kept in the metrics artifact; the report carries yearly
// totals.
json metrics_row_json(const RepoMetrics& metrics)
{
    json out = detail::metrics_json(metrics);
    std::map<std::string, std::size_t> years;
    for (const ActivityPoint& p : metrics.activity) {
        years[p.label.substr(0, 4)] += p.count;
    }
    json activity = json::array();
    for (const auto& [year, count] : years) {
        activity.push_back(json::array({year, count}));
    }
    out.erase("activity");
    out["activity_yearly"] = std::move(activity);
    return out;
}

json row_json(const AnalysisRow& row)
{
    const CuratedRecord& m = row.metadata;
    return {{"rank", row.rank},
            {"package_id", row.package_id},
            {"name", row.name},
            {"katz_score", row.katz_score},
            {"reverse_dependencies", row.reverse_dependencies},
            {"licenses", row.licenses},
            {"repo_url", detail::optional_json(m.repo_url)},
            {"language", detail::optional_json(m.language)},
            {"category", detail::optional_json(m.category)},
            {"backer", m.backer ? json(to_string(*m.backer)) : json(nullptr)},
            {"debian_source", detail::optional_json(m.debian_source)},
            {"vuln", row.vuln ? detail::vuln_json(*row.vuln) : json(nullptr)},
            {"metrics", row.metrics ? metrics_row_json(*row.metrics) : json(nullptr)}};
}

json provenance_json(const Report& report)
{
    json out = {{"generated_at", format_utc(report.generated_at)},
                {"tool_version", report.tool_version},
                {"graph_summary", detail::graph_summary_json(report.graph_summary)},
                {"params", detail::params_json(report.params)}};
    if (report.snapshot_meta) {
        out["snapshot_meta"] = detail::snapshot_json(*report.snapshot_meta);
    }
    return out;
}

std::string count_cell(std::size_t n)
{
    return std::to_string(n);
}

struct CsvTable {
    std::string file;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const
    {
        std::string out = csv::format_row(header);
        for (const auto& r : rows) {
            out += csv::format_row(r);
        }
        return out;
    }
};

std::vector<CsvTable> csv_tables(const Report& report)
{
    std::vector<CsvTable> tables;

    CsvTable ranking{"ranking.csv",
                     {"rank", "package_id", "name", "katz_score", "reverse_dependencies", "licenses", "repo_url",
                      "language", "category", "backer", "debian_source", "cve_total", "cve_open", "cve_resolved",
                      "age_days", "commit_count", "author_count", "bus_factor", "loc"},
                     {}};
    for (const AnalysisRow& row : report.ranking) {
        std::string licenses;
        for (std::size_t i = 0; i < row.licenses.size(); ++i) {
            licenses += (i ? ";" : "") + row.licenses[i];
        }
        const auto& m = row.metadata;
        const auto& v = row.vuln;
        const auto& g = row.metrics;
        ranking.rows.push_back({
            count_cell(row.rank),
            row.package_id,
            row.name,
            csv::format_number(row.katz_score),
            count_cell(row.reverse_dependencies),
            licenses,
            m.repo_url.value_or(""),
            m.language.value_or(""),
            m.category.value_or(""),
            m.backer ? std::string(to_string(*m.backer)) : std::string{},
            m.debian_source.value_or(""),
            v ? count_cell(v->total_entries) : "",
            v ? count_cell(v->open_count) : "",
            v ? count_cell(v->resolved_count) : "",
            g ? std::to_string(g->age_days) : "",
            g ? count_cell(g->commit_count) : "",
            g ? count_cell(g->author_count) : "",
            g ? count_cell(g->bus_factor) : "",
            g && g->loc ? std::to_string(*g->loc) : "",
        });
    }
    tables.push_back(std::move(ranking));

    if (report.open_issues) {
        CsvTable t{"open_issues.csv", {"rank", "package_id", "open_count"}, {}};
        for (const OpenIssue& o : *report.open_issues) {
            t.rows.push_back({count_cell(o.rank), o.package_id, count_cell(o.open_count)});
        }
        tables.push_back(std::move(t));
    }
    if (report.missing_in_debian) {
        CsvTable t{"missing_in_debian.csv", {"package_id"}, {}};
        for (const std::string& id : *report.missing_in_debian) {
            t.rows.push_back({id});
        }
        tables.push_back(std::move(t));
    }

    CsvTable box{"box_stats.csv",
                 {"metric", "n", "q1", "median", "q3", "iqr", "whisker_low", "whisker_high", "fliers"},
                 {}};
    for (const auto& [metric, b] : report.box_stats) {
        std::string fliers;
        for (std::size_t i = 0; i < b.fliers.size(); ++i) {
            fliers += (i ? ";" : "") + csv::format_number(b.fliers[i]);
        }
        box.rows.push_back({metric, count_cell(b.n), csv::format_number(b.q1), csv::format_number(b.median),
                            csv::format_number(b.q3), csv::format_number(b.iqr), csv::format_number(b.whisker_low),
                            csv::format_number(b.whisker_high), fliers});
    }
    tables.push_back(std::move(box));

    for (const auto& [field, entries] : report.breakdowns) {
        CsvTable t{fmt::format("breakdown_{}.csv", field), {"label", "count", "share"}, {}};
        for (const BreakdownEntry& e : entries) {
            t.rows.push_back({e.label, count_cell(e.count), csv::format_number(e.share)});
        }
        tables.push_back(std::move(t));
    }

    CsvTable regression{"regression.csv", {"name", "slope", "intercept", "r", "n"}, {}};
    for (const auto& [name, f] : report.regressions) {
        regression.rows.push_back({name, csv::format_number(f.slope), csv::format_number(f.intercept),
                                   csv::format_number(f.r), count_cell(f.n)});
    }
    tables.push_back(std::move(regression));
    return tables;
}

} // namespace

std::vector<OpenIssue> open_issues_by_centrality(std::span<const AnalysisRow> rows)
{
    std::vector<OpenIssue> out;
    for (const AnalysisRow& row : rows) {
        if (row.vuln && row.vuln->open_count > 0) {
            out.push_back({row.rank, row.package_id, row.vuln->open_count});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const OpenIssue& a, const OpenIssue& b) { return a.rank < b.rank; });
    return out;
}

Report assemble_report(const AnalysisTable& table, const ReportContext& context)
{
    Report report;
    report.generated_at = context.generated_at;
    report.tool_version = kToolVersion;
    report.graph_summary = context.graph_summary;
    report.params = context.params;
    report.snapshot_meta = context.snapshot_meta;
    report.ranking = table.rows;
    report.notes = table.warnings;

    const std::span<const AnalysisRow> rows = table.rows;
    if (context.snapshot_meta) {
        report.open_issues = open_issues_by_centrality(rows);
        report.missing_in_debian = table.missing_in_debian;
        if (context.snapshot_meta->stale) {
            report.notes.push_back(fmt::format("vulnerability snapshot from {} was stale when used",
                                               format_utc(context.snapshot_meta->fetched_at)));
        }
    } else {
        report.notes.push_back("vulnerability data not supplied: open-issue and CVE sections omitted");
    }
    if (!context.has_metrics) {
        report.notes.push_back("repository metrics not supplied: age, LoC and bus-factor sections omitted");
    }

    add_box(report, "reverse_dependencies",
            collect(rows, [](const AnalysisRow& r) { return std::optional<double>(r.reverse_dependencies); }));
    add_box(report, "age_days", collect(rows, [](const AnalysisRow& r) {
                return r.metrics ? std::optional<double>(static_cast<double>(r.metrics->age_days)) : std::nullopt;
            }));
    add_box(report, "commit_count", collect(rows, [](const AnalysisRow& r) {
                return r.metrics ? std::optional<double>(r.metrics->commit_count) : std::nullopt;
            }));
    add_box(report, "author_count", collect(rows, [](const AnalysisRow& r) {
                return r.metrics ? std::optional<double>(r.metrics->author_count) : std::nullopt;
            }));
    add_box(report, "bus_factor", collect(rows, [](const AnalysisRow& r) {
                return r.metrics ? std::optional<double>(r.metrics->bus_factor) : std::nullopt;
            }));
    add_box(report, "loc", collect(rows, [](const AnalysisRow& r) {
                return r.metrics && r.metrics->loc ? std::optional<double>(static_cast<double>(*r.metrics->loc))
                                                   : std::nullopt;
            }));
    add_box(report, "cve_total", collect(rows, [](const AnalysisRow& r) {
                return r.vuln ? std::optional<double>(r.vuln->total_entries) : std::nullopt;
            }));
    add_box(report, "cve_open", collect(rows, [](const AnalysisRow& r) {
                return r.vuln ? std::optional<double>(r.vuln->open_count) : std::nullopt;
            }));

    if (!rows.empty()) {
        for (BreakdownField field : kBreakdownFields) {
            report.breakdowns.emplace(std::string(to_string(field)), breakdown(rows, field));
        }
    }

    std::vector<std::pair<double, double>> cve_vs_loc;
    for (const AnalysisRow& r : rows) {
        if (r.vuln && r.metrics && r.metrics->loc) {
            cve_vs_loc.emplace_back(static_cast<double>(*r.metrics->loc), static_cast<double>(r.vuln->total_entries));
        }
    }
    if (context.snapshot_meta && context.has_metrics) {
        try {
            report.regressions.emplace("cve_total_vs_loc", linear_regression(cve_vs_loc));
        } catch (const Error& e) {
            report.notes.push_back(fmt::format("cve_total_vs_loc regression skipped: {}", e.what()));
        }
    }
    return report;
}

std::string report_to_json(const Report& report)
{
    json ranking = json::array();
    for (const AnalysisRow& row : report.ranking) {
        ranking.push_back(row_json(row));
    }
    json tables = {{"ranking", std::move(ranking)}, {"box_stats", json::object()}, {"breakdowns", json::object()},
                   {"regression", json::object()}};
    if (report.open_issues) {
        json issues = json::array();
        for (const OpenIssue& o : *report.open_issues) {
            issues.push_back({{"rank", o.rank}, {"package_id", o.package_id}, {"open_count", o.open_count}});
        }
        tables["open_issues"] = std::move(issues);
    }
    if (report.missing_in_debian) {
        tables["missing_in_debian"] = *report.missing_in_debian;
    }
    for (const auto& [name, b] : report.box_stats) {
        tables["box_stats"][name] = detail::box_json(b);
    }
    for (const auto& [field, entries] : report.breakdowns) {
        tables["breakdowns"][field] = detail::breakdown_json(entries);
    }
    for (const auto& [name, f] : report.regressions) {
        tables["regression"][name] = detail::regression_json(f);
    }

    json doc = provenance_json(report);
    doc["schema"] = kReportSchema;
    doc["schema_version"] = kReportSchemaVersion;
    doc["notes"] = report.notes;
    doc["tables"] = std::move(tables);
    return doc.dump(2) + "\n";
}

std::vector<EmittedFile> emit_report(const Report& report, ReportFormat format, const fs::path& target)
{
    if (format == ReportFormat::json) {
        const std::string text = report_to_json(report);
        write_file_atomic(target, text);
        return {{target.filename().string(), report.ranking.size(), sha256_hex(text)}};
    }

    std::vector<EmittedFile> written;
    json files = json::array();
    for (const CsvTable& table : csv_tables(report)) {
        const std::string text = table.render();
        write_file_atomic(target / table.file, text);
        written.push_back({table.file, table.rows.size(), sha256_hex(text)});
        files.push_back({{"file", table.file}, {"rows", table.rows.size()}, {"sha256", written.back().sha256}});
    }
    json manifest = {{"schema", kBundleSchema},
                     {"schema_version", kReportSchemaVersion},
                     {"provenance", provenance_json(report)},
                     {"notes", report.notes},
                     {"files", std::move(files)}};
    write_file_atomic(target / "manifest.json", manifest.dump(2) + "\n");
    return written;
}

} // namespace supplyrank
