#pragma once

#include "supplyrank/timeutil.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace supplyrank {

struct CommitRecord {
    std::string author_name;
    std::string author_email;
    Timestamp timestamp{};

    friend bool operator==(const CommitRecord&, const CommitRecord&) = default;
};

/// Identity used to merge authors: lowercased email, or the lowercased
/// trimmed name when the email is empty.
std::string normalized_author(const CommitRecord& commit);

inline constexpr double kDefaultBusFactorThreshold = 0.8;

/// Smallest k such that the k most active authors own at least `threshold`
/// of all commits. Throws Error{domain} for an empty history and
/// Error{validation} for a threshold outside (0, 1].
std::size_t bus_factor(std::span<const CommitRecord> commits, double threshold = kDefaultBusFactorThreshold);

/// Same rule over precomputed per-author commit counts (zero counts ignored).
std::size_t bus_factor_from_counts(std::span<const std::size_t> counts, double threshold = kDefaultBusFactorThreshold);

/// `as_of` minus the earliest commit. Throws Error{domain} for an empty
/// history or when `as_of` precedes the first commit.
std::chrono::seconds project_age(std::span<const CommitRecord> commits, Timestamp as_of);

/// Newline-delimited line count of one buffer; a trailing partial line counts.
std::uint64_t count_lines(std::string_view content);

/// True if a NUL byte occurs within the first 8000 bytes.
bool looks_binary(std::string_view content);

/// Text lines under `root`, skipping `.git`, symlinks and binary files.
/// Throws Error{io}.
std::uint64_t count_loc(const std::filesystem::path& root);

enum class ActivityBucket { month, year };

struct ActivityPoint {
    std::string label; // "YYYY-MM" or "YYYY"
    std::size_t count;

    friend bool operator==(const ActivityPoint&, const ActivityPoint&) = default;
};

/// Commits per UTC calendar bucket, ascending, zero-filled between the first
/// and last bucket.
std::vector<ActivityPoint> commit_activity(std::span<const CommitRecord> commits, ActivityBucket bucket);

/// Parses the interchange format: one `<unix-ts>\t<email>\t<name>` per line.
/// Blank lines are skipped. Throws Error{parse} naming the line number.
std::vector<CommitRecord> parse_commit_interchange(std::string_view text);

/// Reads history from a git checkout (via the system `git`) or from an
/// interchange file. Throws Error{environment} if git is needed but missing.
std::vector<CommitRecord> read_commit_stream(const std::filesystem::path& source);

/// Runs `git log` on HEAD of `repo` and returns the interchange text.
std::string git_log_interchange(const std::filesystem::path& repo);

struct RepoMetrics {
    std::string repo_url;
    std::int64_t age_days = 0;
    std::size_t commit_count = 0;
    std::size_t author_count = 0;
    std::size_t bus_factor = 0;
    std::optional<std::uint64_t> loc; // absent without a worktree
    std::vector<ActivityPoint> activity;
    Timestamp first_commit{};
    Timestamp last_commit{};
    /// Commits dated more than one day after `as_of`.
    std::size_t future_commits = 0;

    friend bool operator==(const RepoMetrics&, const RepoMetrics&) = default;
};

/// All metrics for one history. Throws Error{domain} for an empty history.
RepoMetrics compute_repo_metrics(std::string repo_url, std::span<const CommitRecord> commits, Timestamp as_of,
                                 std::optional<std::uint64_t> loc = std::nullopt,
                                 double threshold = kDefaultBusFactorThreshold);

} // namespace supplyrank
