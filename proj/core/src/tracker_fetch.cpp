#include "supplyrank/error.hpp"
#include "supplyrank/fileio.hpp"
#include "supplyrank/version.hpp"
#include "supplyrank/vulndb.hpp"

#include "json_util.hpp"

#include <curl/curl.h>
#include <fmt/format.h>

#include <cerrno>
#include <cstring>
#include <memory>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace supplyrank {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDocumentFile = "tracker.json";
constexpr const char* kMetaFile = "tracker.meta.json";
constexpr const char* kLockFile = ".tracker.lock";

size_t append_body(char* data, size_t size, size_t count, void* user)
{
    static_cast<std::string*>(user)->append(data, size * count);
    return size * count;
}

class CurlGlobal {
public:
    CurlGlobal() { curl_global_init(CURL_GLOBAL_DEFAULT); }
    ~CurlGlobal() { curl_global_cleanup(); }
};

/// flock-based exclusive lock on a file inside the cache directory.
class DirectoryLock {
public:
    explicit DirectoryLock(const fs::path& dir)
    {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) {
            throw Error(ErrorKind::io, fmt::format("cannot create cache directory '{}': {}", dir.string(), ec.message()));
        }
        const fs::path lock_path = dir / kLockFile;
        fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
            const std::string reason = std::strerror(errno);
            if (fd_ >= 0) {
                ::close(fd_);
            }
            throw Error(ErrorKind::io, fmt::format("cannot lock '{}': {}", lock_path.string(), reason));
        }
    }
    ~DirectoryLock()
    {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    int fd_ = -1;
};

std::string meta_to_json(const CacheMeta& meta)
{
    const json doc = {{"source_url", meta.source_url},
                      {"fetched_at", format_utc(meta.fetched_at)},
                      {"sha256", meta.sha256},
                      {"bytes", meta.bytes}};
    return doc.dump(2) + "\n";
}

struct CachedDocument {
    CacheMeta meta;
    std::string document;
};

/// Returns the cached document when both files exist and the digest matches.
std::optional<CachedDocument> load_cache(const fs::path& dir, std::vector<std::string>& warnings)
{
    auto meta = read_cache_meta(dir);
    if (!meta || !fs::exists(dir / kDocumentFile)) {
        return std::nullopt;
    }
    std::string document = read_text_file(dir / kDocumentFile);
    if (sha256_hex(document) != meta->sha256) {
        warnings.push_back(fmt::format("cache '{}' failed its digest check and was ignored", dir.string()));
        return std::nullopt;
    }
    return CachedDocument{std::move(*meta), std::move(document)};
}

std::string describe_age(std::chrono::seconds age)
{
    return fmt::format("{:.1f} h", static_cast<double>(age.count()) / 3600.0);
}

} // namespace

CurlTransport::CurlTransport(std::chrono::seconds timeout) : timeout_(timeout)
{
    static CurlGlobal global;
}

std::string CurlTransport::get(const std::string& url)
{
    std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), &curl_easy_cleanup);
    if (!curl) {
        throw Error(ErrorKind::network, "curl initialization failed");
    }
    std::string body;
    curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, &append_body);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &body);
    curl_easy_setopt(curl.get(), CURLOPT_TIMEOUT, static_cast<long>(timeout_.count()));
    curl_easy_setopt(curl.get(), CURLOPT_CONNECTTIMEOUT, 30L);
    curl_easy_setopt(curl.get(), CURLOPT_ACCEPT_ENCODING, "");
    curl_easy_setopt(curl.get(), CURLOPT_USERAGENT, "supplyrank/" SUPPLYRANK_VERSION);
    const CURLcode rc = curl_easy_perform(curl.get());
    if (rc != CURLE_OK) {
        throw Error(ErrorKind::network, fmt::format("GET {} failed: {}", url, curl_easy_strerror(rc)));
    }
    long status = 0;
    curl_easy_getinfo(curl.get(), CURLINFO_RESPONSE_CODE, &status);
    if (status != 200) {
        throw Error(ErrorKind::network, fmt::format("GET {} returned HTTP {}", url, status));
    }
    return body;
}

std::optional<CacheMeta> read_cache_meta(const fs::path& cache_dir)
{
    const fs::path path = cache_dir / kMetaFile;
    if (!fs::exists(path)) {
        return std::nullopt;
    }
    const std::string text = read_text_file(path);
    const json doc = detail::parse_json(text, path.string());
    try {
        CacheMeta meta;
        meta.source_url = doc.at("source_url").get<std::string>();
        meta.fetched_at = parse_utc(doc.at("fetched_at").get<std::string>());
        meta.sha256 = doc.at("sha256").get<std::string>();
        meta.bytes = doc.at("bytes").get<std::size_t>();
        return meta;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::validation, fmt::format("{}: {}", path.string(), e.what()));
    }
}

void write_cache(const fs::path& cache_dir, std::string_view document, const CacheMeta& meta)
{
    CacheMeta stored = meta;
    stored.sha256 = sha256_hex(document);
    stored.bytes = document.size();
    write_file_atomic(cache_dir / kDocumentFile, document);
    write_file_atomic(cache_dir / kMetaFile, meta_to_json(stored));
}

FetchResult fetch_tracker(const FetchOptions& options, HttpTransport& transport)
{
    if (options.cache_dir.empty()) {
        throw Error(ErrorKind::validation, "fetch_tracker: cache directory not set");
    }
    DirectoryLock lock(options.cache_dir);
    const Timestamp now = options.now.value_or(now_utc());

    FetchResult result;
    auto cached = load_cache(options.cache_dir, result.warnings);
    const auto age = cached ? now - cached->meta.fetched_at : std::chrono::seconds{0};

    auto from_cache = [&](bool stale) {
        result.document = std::move(cached->document);
        result.meta = std::move(cached->meta);
        result.from_cache = true;
        result.stale = stale;
        return std::move(result);
    };

    if (options.offline) {
        if (!cached) {
            throw FetchError(FetchError::Reason::no_cache,
                             fmt::format("offline mode: no tracker cache in '{}'", options.cache_dir.string()));
        }
        const bool stale = age >= options.max_age;
        if (stale) {
            result.warnings.push_back(fmt::format("offline mode: using stale tracker snapshot from {} (age {})",
                                                  format_utc(cached->meta.fetched_at), describe_age(age)));
        }
        return from_cache(stale);
    }

    if (cached && cached->meta.source_url == options.endpoint && age >= std::chrono::seconds{0} &&
        age < options.max_age) {
        return from_cache(false);
    }

    try {
        std::string body = transport.get(options.endpoint);
        if (!json::accept(body)) {
            throw Error(ErrorKind::network, fmt::format("GET {} returned a body that is not JSON", options.endpoint));
        }
        CacheMeta meta{options.endpoint, now, {}, 0};
        write_cache(options.cache_dir, body, meta);
        result.meta = *read_cache_meta(options.cache_dir);
        result.document = std::move(body);
        result.from_cache = false;
        return result;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::network) {
            throw;
        }
        if (!cached) {
            throw FetchError(FetchError::Reason::no_cache,
                             fmt::format("{}; no tracker cache in '{}'", e.what(), options.cache_dir.string()));
        }
        if (!options.lenient) {
            throw FetchError(FetchError::Reason::stale_cache_available,
                             fmt::format("{}; a stale snapshot from {} is available (rerun without --strict to "
                                         "use it)",
                                         e.what(), format_utc(cached->meta.fetched_at)));
        }
        result.warnings.push_back(fmt::format("{}; using stale tracker snapshot from {} (age {})", e.what(),
                                              format_utc(cached->meta.fetched_at), describe_age(age)));
        return from_cache(true);
    }
}

} // namespace supplyrank
