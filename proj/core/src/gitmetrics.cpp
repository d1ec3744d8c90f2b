#include "supplyrank/gitmetrics.hpp"

#include "supplyrank/error.hpp"
#include "supplyrank/fileio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace supplyrank {

namespace fs = std::filesystem;

namespace {

std::string lowercase(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

void check_threshold(double threshold)
{
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw Error(ErrorKind::validation, fmt::format("bus factor threshold must be in (0, 1], got {}", threshold));
    }
}

std::map<std::string, std::size_t> commits_per_author(std::span<const CommitRecord> commits)
{
    std::map<std::string, std::size_t> counts;
    for (const CommitRecord& c : commits) {
        ++counts[normalized_author(c)];
    }
    return counts;
}

} // namespace

std::string normalized_author(const CommitRecord& commit)
{
    const std::string_view email = trim(commit.author_email);
    if (!email.empty()) {
        return lowercase(email);
    }
    return lowercase(trim(commit.author_name));
}

std::size_t bus_factor_from_counts(std::span<const std::size_t> counts, double threshold)
{
    check_threshold(threshold);
    std::vector<std::size_t> sorted;
    std::size_t total = 0;
    for (std::size_t c : counts) {
        if (c > 0) {
            sorted.push_back(c);
            total += c;
        }
    }
    if (total == 0) {
        throw Error(ErrorKind::domain, "bus factor of an empty history is undefined");
    }
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::size_t cumulative = 0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        if (static_cast<double>(cumulative) / static_cast<double>(total) >= threshold) {
            return k + 1;
        }
    }
    return sorted.size();
}

std::size_t bus_factor(std::span<const CommitRecord> commits, double threshold)
{
    check_threshold(threshold);
    if (commits.empty()) {
        throw Error(ErrorKind::domain, "bus factor of an empty history is undefined");
    }
    std::vector<std::size_t> counts;
    for (const auto& [author, n] : commits_per_author(commits)) {
        counts.push_back(n);
    }
    return bus_factor_from_counts(counts, threshold);
}

std::chrono::seconds project_age(std::span<const CommitRecord> commits, Timestamp as_of)
{
    if (commits.empty()) {
        throw Error(ErrorKind::domain, "project age of an empty history is undefined");
    }
    const auto first = std::min_element(commits.begin(), commits.end(), [](const auto& a, const auto& b) {
                           return a.timestamp < b.timestamp;
                       })->timestamp;
    if (as_of < first) {
        throw Error(ErrorKind::domain, fmt::format("evaluation date {} precedes the first commit {}",
                                                   format_utc(as_of), format_utc(first)));
    }
    return as_of - first;
}

std::uint64_t count_lines(std::string_view content)
{
    if (content.empty()) {
        return 0;
    }
    const auto newlines = static_cast<std::uint64_t>(std::count(content.begin(), content.end(), '\n'));
    return newlines + (content.back() == '\n' ? 0 : 1);
}

bool looks_binary(std::string_view content)
{
    return content.substr(0, 8000).find('\0') != std::string_view::npos;
}

std::uint64_t count_loc(const fs::path& root)
{
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw Error(ErrorKind::io, fmt::format("'{}' is not a readable directory", root.string()));
    }
    std::uint64_t total = 0;
    fs::recursive_directory_iterator it(root, fs::directory_options::none, ec);
    if (ec) {
        throw Error(ErrorKind::io, fmt::format("cannot read '{}': {}", root.string(), ec.message()));
    }
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) {
            throw Error(ErrorKind::io, fmt::format("cannot traverse '{}': {}", root.string(), ec.message()));
        }
        const fs::directory_entry& entry = *it;
        if (entry.is_symlink()) {
            continue;
        }
        if (entry.is_directory()) {
            if (entry.path().filename() == ".git") {
                it.disable_recursion_pending();
            }
            continue;
        }
        if (!entry.is_regular_file()) {
            continue;
        }
        const std::string content = read_text_file(entry.path());
        if (!looks_binary(content)) {
            total += count_lines(content);
        }
    }
    return total;
}

std::vector<ActivityPoint> commit_activity(std::span<const CommitRecord> commits, ActivityBucket bucket)
{
    using namespace std::chrono;
    if (commits.empty()) {
        return {};
    }
    // months since year 0 as a linear bucket key
    auto key_of = [&](Timestamp t) {
        const year_month_day ymd{floor<days>(t)};
        const int y = static_cast<int>(ymd.year());
        return bucket == ActivityBucket::year ? y : y * 12 + static_cast<int>(static_cast<unsigned>(ymd.month())) - 1;
    };
    std::map<int, std::size_t> counts;
    for (const CommitRecord& c : commits) {
        ++counts[key_of(c.timestamp)];
    }
    std::vector<ActivityPoint> out;
    const int first = counts.begin()->first;
    const int last = counts.rbegin()->first;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    for (int key = first; key <= last; ++key) {
        auto it = counts.find(key);
        const std::size_t n = it == counts.end() ? 0 : it->second;
        std::string label = bucket == ActivityBucket::year
                                ? fmt::format("{:04}", key)
                                : fmt::format("{:04}-{:02}", key / 12, key % 12 + 1);
        out.push_back({std::move(label), n});
    }
    return out;
}

std::vector<CommitRecord> parse_commit_interchange(std::string_view text)
{
    std::vector<CommitRecord> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto end = text.find('\n');
        std::string_view line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
        if (tab2 == std::string_view::npos) {
            throw Error(ErrorKind::parse,
                        fmt::format("commit stream line {}: expected <timestamp>\\t<email>\\t<name>", line_no));
        }
        const std::string_view ts = line.substr(0, tab1);
        std::int64_t seconds = 0;
        auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), seconds);
        if (ts.empty() || ec != std::errc{} || ptr != ts.data() + ts.size()) {
            throw Error(ErrorKind::parse, fmt::format("commit stream line {}: invalid timestamp '{}'", line_no, ts));
        }
        if (seconds < 0) {
            throw Error(ErrorKind::parse,
                        fmt::format("commit stream line {}: timestamp {} precedes 1970-01-01", line_no, seconds));
        }
        CommitRecord record;
        record.timestamp = Timestamp{std::chrono::seconds{seconds}};
        record.author_email = std::string(line.substr(tab1 + 1, tab2 - tab1 - 1));
        record.author_name = std::string(line.substr(tab2 + 1));
        out.push_back(std::move(record));
    }
    return out;
}

std::string git_log_interchange(const fs::path& repo)
{
    int fds[2];
    if (::pipe(fds) != 0) {
        throw Error(ErrorKind::io, fmt::format("pipe failed: {}", std::strerror(errno)));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, fds[0]);
    posix_spawn_file_actions_addclose(&actions, fds[1]);
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);

    const std::string repo_arg = repo.string();
    std::vector<std::string> args{"git", "-C", repo_arg, "-c", "log.showSignature=false", "log",
                                  "--format=%at%x09%ae%x09%an", "HEAD", "--"};
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    argv.push_back(nullptr);

    pid_t pid = 0;
    const int rc = posix_spawnp(&pid, "git", &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(fds[1]);
    if (rc != 0) {
        ::close(fds[0]);
        if (rc == ENOENT) {
            throw Error(ErrorKind::environment, "the git tool was not found on PATH");
        }
        throw Error(ErrorKind::environment, fmt::format("cannot run git: {}", std::strerror(rc)));
    }
    std::string output;
    char buffer[65536];
    for (;;) {
        const ssize_t n = ::read(fds[0], buffer, sizeof buffer);
        if (n > 0) {
            output.append(buffer, static_cast<std::size_t>(n));
        } else if (n == 0 || errno != EINTR) {
            break;
        }
    }
    ::close(fds[0]);
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        throw Error(ErrorKind::parse, fmt::format("git log failed in '{}' (exit status {})", repo_arg,
                                                  WIFEXITED(status) ? WEXITSTATUS(status) : -1));
    }
    return output;
}

std::vector<CommitRecord> read_commit_stream(const fs::path& source)
{
    std::error_code ec;
    if (fs::is_directory(source, ec)) {
        return parse_commit_interchange(git_log_interchange(source));
    }
    const std::string text = read_text_file(source);
    try {
        return parse_commit_interchange(text);
    } catch (const Error& e) {
        throw Error(e.kind(), fmt::format("{}: {}", source.string(), e.what()));
    }
}

RepoMetrics compute_repo_metrics(std::string repo_url, std::span<const CommitRecord> commits, Timestamp as_of,
                                 std::optional<std::uint64_t> loc, double threshold)
{
    if (commits.empty()) {
        throw Error(ErrorKind::domain, fmt::format("'{}' has an empty history", repo_url));
    }
    RepoMetrics m;
    m.repo_url = std::move(repo_url);
    const auto [first, last] = std::minmax_element(
        commits.begin(), commits.end(), [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    m.first_commit = first->timestamp;
    m.last_commit = last->timestamp;
    m.age_days = std::chrono::floor<std::chrono::days>(project_age(commits, as_of)).count();
    m.commit_count = commits.size();
    m.author_count = commits_per_author(commits).size();
    m.bus_factor = bus_factor(commits, threshold);
    m.loc = loc;
    m.activity = commit_activity(commits, ActivityBucket::month);
    const Timestamp horizon = as_of + std::chrono::days{1};
    m.future_commits = static_cast<std::size_t>(
        std::count_if(commits.begin(), commits.end(), [&](const auto& c) { return c.timestamp > horizon; }));
    return m;
}

} // namespace supplyrank
