#pragma once

#include "supplyrank/error.hpp"
#include "supplyrank/timeutil.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace supplyrank {

inline constexpr std::string_view kDefaultTrackerUrl = "https://security-tracker.debian.org/tracker/data/json";

enum class ReleaseStatus { open, resolved, undetermined };

std::string_view to_string(ReleaseStatus status) noexcept;

struct ReleaseEntry {
    ReleaseStatus status = ReleaseStatus::undetermined;
    std::optional<std::string> fixed_version;
    std::optional<std::string> urgency;

    friend bool operator==(const ReleaseEntry&, const ReleaseEntry&) = default;
};

/// One tracker entry of a source package. Entries whose id is not a CVE
/// (e.g. `TEMP-...`) are kept but never counted.
struct CveRecord {
    std::string cve_id;
    std::string description;
    std::map<std::string, ReleaseEntry> releases;

    bool is_cve() const;

    friend bool operator==(const CveRecord&, const CveRecord&) = default;
};

/// True for `CVE-<year>-<4+ digits>` with year >= 1999.
bool is_cve_id(std::string_view id);

struct TrackerDatabase {
    /// source package -> records, records ordered by id
    std::map<std::string, std::vector<CveRecord>> packages;

    friend bool operator==(const TrackerDatabase&, const TrackerDatabase&) = default;
};

struct TrackerParse {
    TrackerDatabase database;
    /// Status strings outside {open, resolved, undetermined}; mapped to undetermined.
    std::size_t unknown_status_count = 0;
    std::size_t non_cve_entries = 0;
    std::vector<std::string> warnings;
};

/// Parses the tracker's `package -> id -> {description, releases}` document.
/// Throws Error{parse} for malformed JSON and Error{validation} naming the
/// package and key for a structurally wrong document.
TrackerParse parse_tracker_document(std::string_view document);

/// Emits the modeled fields in the tracker's own shape.
std::string serialize_tracker(const TrackerDatabase& db);

struct PackageVulnStats {
    std::string source_package;
    std::size_t total_entries = 0;
    std::size_t open_count = 0;
    std::size_t resolved_count = 0;

    friend bool operator==(const PackageVulnStats&, const PackageVulnStats&) = default;
};

/// Counts CVE records for one release; records lacking the release count
/// toward total_entries only.
PackageVulnStats summarize(std::span<const CveRecord> records, std::string_view release);

struct TrackerTotals {
    std::size_t package_count = 0;
    std::size_t cve_entries = 0;
    std::size_t open_entries = 0;
};

TrackerTotals tracker_totals(const TrackerDatabase& db, std::string_view release);

/// Resolves suite aliases (stable, oldstable, testing, unstable, ...) to the
/// codename that held the role at `as_of`. Codenames pass through unchanged.
std::string resolve_release(std::string_view name, Timestamp as_of);

// ---- fetching ---------------------------------------------------------------

/// Minimal HTTP GET abstraction so the fetch logic can be exercised offline.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    /// Returns the body of a 200 response. Throws Error{network} otherwise.
    virtual std::string get(const std::string& url) = 0;
};

/// libcurl-backed transport.
class CurlTransport final : public HttpTransport {
public:
    explicit CurlTransport(std::chrono::seconds timeout = std::chrono::seconds{300});
    std::string get(const std::string& url) override;

private:
    std::chrono::seconds timeout_;
};

struct CacheMeta {
    std::string source_url;
    Timestamp fetched_at{};
    std::string sha256;
    std::size_t bytes = 0;
};

struct FetchOptions {
    std::string endpoint{kDefaultTrackerUrl};
    std::filesystem::path cache_dir;
    std::chrono::seconds max_age{std::chrono::hours{24}};
    /// Use the cache unconditionally; never touch the network.
    bool offline = false;
    /// On network failure, fall back to a stale cache with a warning.
    bool lenient = true;
    /// Injected clock for tests.
    std::optional<Timestamp> now;
};

struct FetchResult {
    std::string document;
    CacheMeta meta;
    bool from_cache = false;
    bool stale = false;
    std::vector<std::string> warnings;
};

/// Raised when no usable document can be produced.
class FetchError : public Error {
public:
    enum class Reason { no_cache, stale_cache_available };

    FetchError(Reason reason, const std::string& message) : Error(ErrorKind::network, message), reason_(reason) {}
    Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

/// Cache layout: `<cache_dir>/tracker.json` + `<cache_dir>/tracker.meta.json`.
/// Access is serialized per cache directory with an advisory lock.
FetchResult fetch_tracker(const FetchOptions& options, HttpTransport& transport);

std::optional<CacheMeta> read_cache_meta(const std::filesystem::path& cache_dir);

/// Seeds a cache directory with a document, e.g. an archived snapshot. The
/// digest and size in `meta` are recomputed from `document`.
void write_cache(const std::filesystem::path& cache_dir, std::string_view document, const CacheMeta& meta);

} // namespace supplyrank
