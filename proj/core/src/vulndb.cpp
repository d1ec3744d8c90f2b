#include "supplyrank/vulndb.hpp"

#include "json_util.hpp"
#include "supplyrank/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>

namespace supplyrank {

using nlohmann::json;

std::string_view to_string(ReleaseStatus status) noexcept
{
    switch (status) {
    case ReleaseStatus::open: return "open";
    case ReleaseStatus::resolved: return "resolved";
    case ReleaseStatus::undetermined: return "undetermined";
    }
    return "undetermined";
}

bool is_cve_id(std::string_view id)
{
    constexpr std::string_view prefix = "CVE-";
    if (id.size() < prefix.size() + 4 + 1 + 4 || id.substr(0, prefix.size()) != prefix || id[8] != '-') {
        return false;
    }
    int year = 0;
    auto [ptr, ec] = std::from_chars(id.data() + 4, id.data() + 8, year);
    if (ec != std::errc{} || ptr != id.data() + 8 || year < 1999) {
        return false;
    }
    const std::string_view number = id.substr(9);
    return std::all_of(number.begin(), number.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool CveRecord::is_cve() const
{
    return is_cve_id(cve_id);
}

namespace {

[[noreturn]] void shape_error(std::string_view package, std::string_view key, std::string_view problem)
{
    throw Error(ErrorKind::validation, fmt::format("tracker document: package '{}', key '{}': {}", package, key, problem));
}

std::optional<std::string> optional_string(const json& object, const char* key, std::string_view package,
                                           std::string_view id)
{
    const json* value = detail::member(object, key);
    if (!value || value->is_null()) {
        return std::nullopt;
    }
    if (!value->is_string()) {
        shape_error(package, id, fmt::format("'{}' must be a string", key));
    }
    return value->get<std::string>();
}

} // namespace

TrackerParse parse_tracker_document(std::string_view document)
{
    const json doc = detail::parse_json(document, "tracker document");
    if (!doc.is_object()) {
        throw Error(ErrorKind::validation, "tracker document: top level must be an object");
    }
    TrackerParse out;
    for (const auto& [package, entries] : doc.items()) {
        if (!entries.is_object()) {
            shape_error(package, package, "package value must be an object");
        }
        auto& records = out.database.packages[package];
        records.reserve(entries.size());
        for (const auto& [id, entry] : entries.items()) {
            if (!entry.is_object()) {
                shape_error(package, id, "entry must be an object");
            }
            CveRecord record;
            record.cve_id = id;
            record.description = optional_string(entry, "description", package, id).value_or("");
            if (const json* releases = detail::member(entry, "releases"); releases && !releases->is_null()) {
                if (!releases->is_object()) {
                    shape_error(package, id, "'releases' must be an object");
                }
                for (const auto& [release, info] : releases->items()) {
                    if (!info.is_object()) {
                        shape_error(package, id, fmt::format("release '{}' must be an object", release));
                    }
                    ReleaseEntry rel;
                    const auto status = optional_string(info, "status", package, id);
                    if (status == "open") {
                        rel.status = ReleaseStatus::open;
                    } else if (status == "resolved") {
                        rel.status = ReleaseStatus::resolved;
                    } else if (status != "undetermined") {
                        ++out.unknown_status_count;
                        out.warnings.push_back(fmt::format("{}/{}/{}: unknown status '{}' treated as undetermined",
                                                           package, id, release, status.value_or("<missing>")));
                    }
                    rel.fixed_version = optional_string(info, "fixed_version", package, id);
                    rel.urgency = optional_string(info, "urgency", package, id);
                    record.releases.emplace(release, std::move(rel));
                }
            }
            if (!record.is_cve()) {
                ++out.non_cve_entries;
            }
            records.push_back(std::move(record));
        }
    }
    return out;
}

std::string serialize_tracker(const TrackerDatabase& db)
{
    json doc = json::object();
    for (const auto& [package, records] : db.packages) {
        json entries = json::object();
        for (const CveRecord& record : records) {
            json releases = json::object();
            for (const auto& [release, rel] : record.releases) {
                json info = {{"status", to_string(rel.status)}};
                if (rel.fixed_version) {
                    info["fixed_version"] = *rel.fixed_version;
                }
                if (rel.urgency) {
                    info["urgency"] = *rel.urgency;
                }
                releases[release] = std::move(info);
            }
            entries[record.cve_id] = {{"description", record.description}, {"releases", std::move(releases)}};
        }
        doc[package] = std::move(entries);
    }
    return doc.dump();
}

PackageVulnStats summarize(std::span<const CveRecord> records, std::string_view release)
{
    PackageVulnStats stats;
    for (const CveRecord& record : records) {
        if (!record.is_cve()) {
            continue;
        }
        ++stats.total_entries;
        auto it = record.releases.find(std::string(release));
        if (it == record.releases.end()) {
            continue;
        }
        if (it->second.status == ReleaseStatus::open) {
            ++stats.open_count;
        } else if (it->second.status == ReleaseStatus::resolved) {
            ++stats.resolved_count;
        }
    }
    return stats;
}

TrackerTotals tracker_totals(const TrackerDatabase& db, std::string_view release)
{
    TrackerTotals totals;
    totals.package_count = db.packages.size();
    for (const auto& [package, records] : db.packages) {
        const PackageVulnStats s = summarize(records, release);
        totals.cve_entries += s.total_entries;
        totals.open_entries += s.open_count;
    }
    return totals;
}

namespace {

struct DebianRelease {
    std::string_view codename;
    std::chrono::year_month_day released;
};

using namespace std::chrono_literals;

// Stable release dates; the entry after the current stable is "testing".
constexpr std::array kDebianReleases{
    DebianRelease{"potato", 2000y / 8 / 15},   DebianRelease{"woody", 2002y / 7 / 19},
    DebianRelease{"sarge", 2005y / 6 / 6},     DebianRelease{"etch", 2007y / 4 / 8},
    DebianRelease{"lenny", 2009y / 2 / 14},    DebianRelease{"squeeze", 2011y / 2 / 6},
    DebianRelease{"wheezy", 2013y / 5 / 4},    DebianRelease{"jessie", 2015y / 4 / 25},
    DebianRelease{"stretch", 2017y / 6 / 17},  DebianRelease{"buster", 2019y / 7 / 6},
    DebianRelease{"bullseye", 2021y / 8 / 14}, DebianRelease{"bookworm", 2023y / 6 / 10},
    DebianRelease{"trixie", 2025y / 8 / 9},    DebianRelease{"forky", std::chrono::year_month_day{}},
};

} // namespace

std::string resolve_release(std::string_view name, Timestamp as_of)
{
    if (name == "unstable" || name == "sid") {
        return "sid";
    }
    std::size_t offset = 0;
    bool next = false;
    if (name == "stable") {
        offset = 0;
    } else if (name == "oldstable") {
        offset = 1;
    } else if (name == "oldoldstable") {
        offset = 2;
    } else if (name == "testing") {
        next = true;
    } else {
        return std::string(name);
    }

    const auto day = std::chrono::floor<std::chrono::days>(as_of);
    std::optional<std::size_t> current;
    for (std::size_t i = 0; i < kDebianReleases.size(); ++i) {
        const auto& rel = kDebianReleases[i];
        if (rel.released.ok() && std::chrono::sys_days{rel.released} <= day) {
            current = i;
        }
    }
    if (!current) {
        throw Error(ErrorKind::validation,
                    fmt::format("no Debian release was '{}' on {}", name, format_date(as_of)));
    }
    if (next) {
        if (*current + 1 >= kDebianReleases.size()) {
            throw Error(ErrorKind::validation, fmt::format("testing codename unknown on {}", format_date(as_of)));
        }
        return std::string(kDebianReleases[*current + 1].codename);
    }
    if (offset > *current) {
        throw Error(ErrorKind::validation, fmt::format("no Debian release was '{}' on {}", name, format_date(as_of)));
    }
    return std::string(kDebianReleases[*current - offset].codename);
}

} // namespace supplyrank
