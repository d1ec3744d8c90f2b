#include "supplyrank/dataset.hpp"

#include "supplyrank/csv.hpp"
#include "supplyrank/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace supplyrank {

namespace {

std::string normalize_token(std::string_view text)
{
    std::string out;
    for (char c : text) {
        if (c == ' ' || c == '_') {
            c = '-';
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    const auto first = out.find_first_not_of('-');
    const auto last = out.find_last_not_of('-');
    return first == std::string::npos ? std::string{} : out.substr(first, last - first + 1);
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

std::optional<std::string> cell(std::string_view raw)
{
    const auto v = trim(raw);
    if (v.empty()) {
        return std::nullopt;
    }
    return std::string(v);
}

std::optional<bool> parse_flag(std::string_view text)
{
    const std::string t = normalize_token(text);
    if (t.empty() || t == "false" || t == "0" || t == "no" || t == "n") {
        return false;
    }
    if (t == "true" || t == "1" || t == "yes" || t == "y") {
        return true;
    }
    return std::nullopt;
}

enum Column { package_id, repo_url, language, category, backer, debian_source, excluded, exclusion_reason, count };

constexpr std::array<std::string_view, Column::count> kColumns{
    "package_id", "repo_url", "language", "category", "backer", "debian_source", "excluded", "exclusion_reason"};

} // namespace

std::string_view to_string(Backer b) noexcept
{
    switch (b) {
    case Backer::single_person: return "single-person";
    case Backer::npo: return "npo";
    case Backer::company: return "company";
    case Backer::multi: return "multi";
    case Backer::unknown: return "unknown";
    }
    return "unknown";
}

std::string_view to_string(ExclusionReason r) noexcept
{
    switch (r) {
    case ExclusionReason::duplicate_version: return "duplicate-version";
    case ExclusionReason::docs_only: return "docs-only";
    case ExclusionReason::legacy_vcs: return "legacy-vcs";
    case ExclusionReason::other: return "other";
    }
    return "other";
}

std::optional<Backer> parse_backer(std::string_view text)
{
    const std::string t = normalize_token(text);
    if (t == "single-person" || t == "single" || t == "person") {
        return Backer::single_person;
    }
    if (t == "npo" || t == "non-profit" || t == "nonprofit") {
        return Backer::npo;
    }
    if (t == "company" || t == "corporate") {
        return Backer::company;
    }
    if (t == "multi" || t == "multiple") {
        return Backer::multi;
    }
    if (t == "unknown") {
        return Backer::unknown;
    }
    return std::nullopt;
}

std::optional<ExclusionReason> parse_exclusion_reason(std::string_view text)
{
    const std::string t = normalize_token(text);
    for (auto r : {ExclusionReason::duplicate_version, ExclusionReason::docs_only, ExclusionReason::legacy_vcs,
                   ExclusionReason::other}) {
        if (t == to_string(r)) {
            return r;
        }
    }
    return std::nullopt;
}

std::size_t CuratedLoad::excluded_count() const
{
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const CuratedRecord& r) { return r.excluded; }));
}

CuratedLoad load_curated(std::string_view csv_text)
{
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) {
        throw Error(ErrorKind::validation, "curated CSV: missing header row");
    }
    CuratedLoad out;
    std::array<std::optional<std::size_t>, Column::count> position{};
    const auto& header = rows.front().fields;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = std::string(trim(header[i]));
        auto it = std::find(kColumns.begin(), kColumns.end(), name);
        if (it == kColumns.end()) {
            out.warnings.push_back(fmt::format("curated CSV: unknown column '{}' ignored", name));
            continue;
        }
        const auto col = static_cast<std::size_t>(it - kColumns.begin());
        if (position[col]) {
            throw Error(ErrorKind::validation, fmt::format("curated CSV: duplicate column '{}'", name));
        }
        position[col] = i;
    }
    if (!position[Column::package_id]) {
        throw Error(ErrorKind::validation, "curated CSV: header lacks the package_id column");
    }

    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto get = [&](Column c) -> std::optional<std::string> {
            if (!position[c] || *position[c] >= row.fields.size()) {
                return std::nullopt;
            }
            return cell(row.fields[*position[c]]);
        };
        auto fail = [&](const std::string& what) {
            throw Error(ErrorKind::validation, fmt::format("curated CSV line {}: {}", row.line, what));
        };

        CuratedRecord rec;
        auto id = get(Column::package_id);
        if (!id) {
            fail("missing package_id");
        }
        rec.package_id = std::move(*id);
        rec.repo_url = get(Column::repo_url);
        rec.language = get(Column::language);
        rec.category = get(Column::category);
        rec.debian_source = get(Column::debian_source);
        if (auto b = get(Column::backer)) {
            rec.backer = parse_backer(*b);
            if (!rec.backer) {
                fail(fmt::format("unknown backer '{}'", *b));
            }
        }
        const auto flag = parse_flag(get(Column::excluded).value_or(""));
        if (!flag) {
            fail(fmt::format("excluded must be true/false, got '{}'", *get(Column::excluded)));
        }
        rec.excluded = *flag;
        if (auto reason = get(Column::exclusion_reason)) {
            rec.exclusion_reason = parse_exclusion_reason(*reason);
            if (!rec.exclusion_reason) {
                fail(fmt::format("unknown exclusion_reason '{}'", *reason));
            }
        }
        if (rec.excluded != rec.exclusion_reason.has_value()) {
            fail(fmt::format("'{}': excluded requires an exclusion_reason and vice versa", rec.package_id));
        }
        if (!seen.insert(rec.package_id).second) {
            fail(fmt::format("duplicate package_id '{}'", rec.package_id));
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

std::string serialize_curated(std::span<const CuratedRecord> records)
{
    std::string out(kCuratedHeader);
    out += '\n';
    for (const CuratedRecord& r : records) {
        const std::array<std::string, Column::count> fields{
            r.package_id,
            r.repo_url.value_or(""),
            r.language.value_or(""),
            r.category.value_or(""),
            r.backer ? std::string(to_string(*r.backer)) : std::string{},
            r.debian_source.value_or(""),
            r.excluded ? "true" : "false",
            r.exclusion_reason ? std::string(to_string(*r.exclusion_reason)) : std::string{}};
        out += csv::format_row(fields);
    }
    return out;
}

AnalysisTable build_table(std::span<const RankedPackage> ranking, std::span<const CuratedRecord> curated,
                          const std::optional<std::map<std::string, PackageVulnStats>>& vuln_by_source,
                          const std::map<std::string, RepoMetrics>& metrics_by_package)
{
    if (ranking.empty()) {
        throw Error(ErrorKind::domain, "build_table: ranking is empty");
    }
    AnalysisTable table;
    std::map<std::string_view, const CuratedRecord*> by_id;
    for (const CuratedRecord& r : curated) {
        by_id.emplace(r.package_id, &r);
    }
    std::set<std::string_view> ranked_ids;
    for (const RankedPackage& p : ranking) {
        ranked_ids.insert(p.package_id);
    }
    for (const CuratedRecord& r : curated) {
        if (!ranked_ids.contains(r.package_id)) {
            table.warnings.push_back(fmt::format("curated record '{}' does not match a ranked package", r.package_id));
        }
    }

    for (const RankedPackage& p : ranking) {
        auto it = by_id.find(p.package_id);
        const CuratedRecord* meta = it == by_id.end() ? nullptr : it->second;
        if (meta && meta->excluded) {
            table.excluded.push_back(p.package_id);
            continue;
        }
        AnalysisRow row;
        row.package_id = p.package_id;
        row.name = p.name;
        row.rank = p.rank;
        row.katz_score = p.katz_score;
        row.reverse_dependencies = p.reverse_dependencies;
        row.licenses = p.licenses;
        if (meta) {
            row.metadata = *meta;
        } else {
            row.metadata.package_id = p.package_id;
        }
        if (vuln_by_source) {
            if (!row.metadata.debian_source) {
                table.missing_in_debian.push_back(p.package_id);
            } else if (auto v = vuln_by_source->find(*row.metadata.debian_source); v != vuln_by_source->end()) {
                row.vuln = v->second;
            } else {
                table.warnings.push_back(fmt::format("'{}': no vulnerability stats for Debian source '{}'",
                                                     p.package_id, *row.metadata.debian_source));
            }
        }
        if (row.metadata.repo_url) {
            if (auto m = metrics_by_package.find(p.package_id); m != metrics_by_package.end()) {
                row.metrics = m->second;
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace supplyrank
