#include "commands.hpp"

#include <supplyrank/csv.hpp>
#include <supplyrank/dataset.hpp>
#include <supplyrank/error.hpp>
#include <supplyrank/fileio.hpp>
#include <supplyrank/gitmetrics.hpp>
#include <supplyrank/report.hpp>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <thread>

namespace supplyrank::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_output(const PipelineConfig& config, const std::string& rendered)
{
    if (config.output) {
        write_file_atomic(*config.output, rendered);
        spdlog::info("wrote {}", config.output->string());
    }
}

std::vector<CuratedRecord> load_curated_records(const fs::path& path)
{
    if (path.empty()) {
        return {};
    }
    CuratedLoad load = load_curated(read_text_file(path));
    for (const std::string& w : load.warnings) {
        spdlog::warn("{}: {}", path.string(), w);
    }
    return std::move(load.records);
}

std::set<std::string> ranked_ids(const fs::path& ranking_path)
{
    std::set<std::string> ids;
    for (const RankedPackage& p : ranking_from_json(read_text_file(ranking_path)).entries) {
        ids.insert(p.package_id);
    }
    return ids;
}

// Curated records still in play: not excluded and, when a ranking is given,
// present in it. Ordered by package_id.
std::vector<CuratedRecord> in_scope(std::vector<CuratedRecord> records, const std::optional<fs::path>& ranking_path)
{
    std::optional<std::set<std::string>> ranked;
    if (ranking_path) {
        ranked = ranked_ids(*ranking_path);
    }
    std::erase_if(records, [&](const CuratedRecord& r) {
        return r.excluded || (ranked && !ranked->count(r.package_id));
    });
    std::sort(records.begin(), records.end(),
              [](const CuratedRecord& a, const CuratedRecord& b) { return a.package_id < b.package_id; });
    return records;
}

unsigned worker_count(unsigned requested, std::size_t tasks)
{
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

struct RepoOutcome {
    std::optional<RepoMetrics> metrics;
    std::optional<std::string> missing;
    std::optional<std::string> error;
};

RepoOutcome measure_repo(const CuratedRecord& record, const fs::path& repos_dir, Timestamp as_of)
{
    const fs::path checkout = repos_dir / record.package_id;
    const fs::path interchange = repos_dir / (record.package_id + ".commits");
    const fs::path tree = repos_dir / (record.package_id + ".tree");

    RepoOutcome out;
    try {
        std::vector<CommitRecord> commits;
        std::optional<std::uint64_t> loc;
        if (fs::is_directory(checkout)) {
            commits = read_commit_stream(checkout);
            loc = count_loc(checkout);
        } else if (fs::is_regular_file(interchange)) {
            commits = read_commit_stream(interchange);
            if (fs::is_directory(tree)) {
                loc = count_loc(tree);
            }
        } else {
            out.missing = fmt::format("no clone or commit file under {}", repos_dir.string());
            return out;
        }
        out.metrics = compute_repo_metrics(*record.repo_url, commits, as_of, loc);
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

json summary_json(const GraphLoad& load, const std::string& digest)
{
    const DependencyGraph& g = load.graph;
    std::size_t max_in = 0;
    std::size_t max_out = 0;
    std::size_t isolated = 0;
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        max_in = std::max(max_in, g.in_degree(i));
        max_out = std::max(max_out, g.out_degree(i));
        isolated += (g.in_degree(i) == 0 && g.out_degree(i) == 0);
    }
    return {{"nodes", g.node_count()},
            {"edges", g.edge_count()},
            {"sha256", digest},
            {"weak_components", weak_component_count(g)},
            {"isolated_nodes", isolated},
            {"max_in_degree", max_in},
            {"max_out_degree", max_out},
            {"duplicate_edges", load.report.duplicate_edges},
            {"dangling_edges", load.report.dangling_edges},
            {"ignored_label_edges", load.report.ignored_label_edges}};
}

} // namespace

fs::path default_cache_dir()
{
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
        return fs::path(xdg) / "supplyrank";
    }
    if (const char* home = std::getenv("HOME"); home && *home) {
        return fs::path(home) / ".cache" / "supplyrank";
    }
    return ".supplyrank-cache";
}

RankOutcome cmd_rank(const PipelineConfig& config)
{
    if (config.top_k == 0) {
        throw Error(ErrorKind::validation, "--top-k must be at least 1");
    }
    config.centrality.validate();

    const std::string text = read_text_file(config.graph_path);
    const GraphLoad load = load_graph(text, LoadOptions{config.strict});
    if (load.report.duplicate_edges) {
        spdlog::info("collapsed {} duplicate edges", load.report.duplicate_edges);
    }
    if (load.report.dangling_edges) {
        spdlog::warn("dropped {} dangling edges (use --strict to reject them)", load.report.dangling_edges);
    }
    if (load.report.ignored_label_edges) {
        spdlog::warn("ignored {} edges with a label other than {}", load.report.ignored_label_edges, kDependsOn);
    }

    const double bound = spectral_radius_upper_bound(load.graph);
    if (config.centrality.alpha * bound >= 1.0) {
        spdlog::warn("alpha {} times the spectral-radius bound {} is >= 1; convergence is not guaranteed",
                     config.centrality.alpha, bound);
    }

    RankOutcome out;
    out.artifact = make_ranking(load, sha256_hex(text), config.centrality, config.top_k);
    spdlog::info("katz: {} nodes, {} edges, converged after {} iterations (residual {:.3e})",
                 load.graph.node_count(), load.graph.edge_count(), out.artifact.iterations, out.artifact.residual);

    out.rendered = config.format == OutputFormat::csv ? ranking_to_csv(out.artifact) : ranking_to_json(out.artifact);
    write_output(config, out.rendered);
    return out;
}

VulnOutcome cmd_vuln(const PipelineConfig& config, HttpTransport& transport,
                     const std::optional<fs::path>& ranking_path)
{
    const std::vector<CuratedRecord> records = in_scope(load_curated_records(config.curated_path), ranking_path);

    FetchOptions fetch;
    fetch.endpoint = config.tracker_endpoint;
    fetch.cache_dir = config.cache_dir.empty() ? default_cache_dir() : config.cache_dir;
    fetch.max_age = config.max_age;
    fetch.offline = config.offline;
    fetch.lenient = !config.strict;
    fetch.now = config.clock;
    const FetchResult fetched = fetch_tracker(fetch, transport);

    VulnOutcome out;
    out.warnings = fetched.warnings;

    const TrackerParse parsed = parse_tracker_document(fetched.document);
    out.warnings.insert(out.warnings.end(), parsed.warnings.begin(), parsed.warnings.end());

    const std::string release = resolve_release(config.release, config.as_of);
    VulnArtifact& a = out.artifact;
    a.snapshot = {fetched.meta.source_url, fetched.meta.fetched_at, fetched.meta.sha256,
                  fetched.stale,           config.release,          release};
    a.tracker = tracker_totals(parsed.database, release);

    static const std::vector<CveRecord> kNone;
    for (const CuratedRecord& r : records) {
        if (!r.debian_source) {
            a.unmapped.push_back(r.package_id);
            continue;
        }
        const auto it = parsed.database.packages.find(*r.debian_source);
        PackageVulnStats stats = summarize(it == parsed.database.packages.end() ? kNone : it->second, release);
        stats.source_package = *r.debian_source;
        a.packages.push_back({r.package_id, std::move(stats)});
    }

    if (!a.unmapped.empty()) {
        const std::string list = fmt::format("{}", fmt::join(a.unmapped, ", "));
        if (config.strict) {
            throw Error(ErrorKind::validation,
                        fmt::format("{} package(s) have no Debian source mapping: {}", a.unmapped.size(), list));
        }
        out.warnings.push_back(fmt::format("{} package(s) have no Debian source mapping: {}", a.unmapped.size(), list));
    }
    for (const std::string& w : out.warnings) {
        spdlog::warn("{}", w);
    }
    spdlog::info("tracker snapshot {} ({}), release {} -> {}: {} mapped packages", format_utc(a.snapshot.fetched_at),
                 fetched.from_cache ? "cache" : "download", config.release, release, a.packages.size());

    out.rendered = config.format == OutputFormat::csv ? vuln_to_csv(a) : vuln_to_json(a);
    write_output(config, out.rendered);
    return out;
}

MetricsOutcome cmd_metrics(const PipelineConfig& config, const fs::path& repos_dir)
{
    if (!fs::is_directory(repos_dir)) {
        throw Error(ErrorKind::io, fmt::format("repository directory '{}' does not exist", repos_dir.string()));
    }
    std::vector<CuratedRecord> records = in_scope(load_curated_records(config.curated_path), std::nullopt);
    std::erase_if(records, [](const CuratedRecord& r) { return !r.repo_url; });

    std::vector<RepoOutcome> results(records.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) {
            results[i] = measure_repo(records[i], repos_dir, config.as_of);
        }
    };
    std::vector<std::jthread> pool;
    const unsigned workers = worker_count(config.jobs, records.size());
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    pool.clear();

    MetricsOutcome out;
    MetricsArtifact& a = out.artifact;
    a.as_of = config.as_of;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string& id = records[i].package_id;
        if (results[i].metrics) {
            if (results[i].metrics->future_commits) {
                spdlog::warn("{}: {} commit(s) dated after {}", id, results[i].metrics->future_commits,
                             format_date(config.as_of));
            }
            a.repos.push_back({id, std::move(*results[i].metrics)});
        } else if (results[i].missing) {
            spdlog::warn("{}: {}", id, *results[i].missing);
            a.missing.push_back({id, std::move(*results[i].missing)});
        } else {
            spdlog::error("{}: {}", id, *results[i].error);
            a.errors.push_back({id, std::move(*results[i].error)});
        }
    }
    spdlog::info("metrics: {} repositories measured, {} missing, {} failed", a.repos.size(), a.missing.size(),
                 a.errors.size());

    out.rendered = config.format == OutputFormat::csv ? metrics_to_csv(a) : metrics_to_json(a);
    write_output(config, out.rendered);
    return out;
}

std::string cmd_report(const PipelineConfig& config, const ReportInputs& inputs)
{
    const RankingArtifact ranking = ranking_from_json(read_text_file(inputs.ranking));
    const std::vector<CuratedRecord> curated = load_curated_records(config.curated_path);

    std::optional<VulnArtifact> vuln;
    if (inputs.vuln) {
        vuln = vuln_from_json(read_text_file(*inputs.vuln));
    }
    std::optional<MetricsArtifact> metrics;
    if (inputs.metrics) {
        metrics = metrics_from_json(read_text_file(*inputs.metrics));
    }

    std::optional<std::map<std::string, PackageVulnStats>> by_source;
    if (vuln) {
        by_source = vuln->by_source();
    }
    const AnalysisTable table =
        build_table(ranking.entries, curated, by_source, metrics ? metrics->by_package() : std::map<std::string, RepoMetrics>{});

    ReportContext context;
    context.generated_at = config.as_of;
    context.graph_summary = ranking.graph;
    context.params = ranking.params;
    if (vuln) {
        context.snapshot_meta = vuln->snapshot;
    }
    context.has_metrics = metrics.has_value();

    Report report = assemble_report(table, context);
    if (metrics && metrics->as_of != config.as_of) {
        report.notes.push_back(fmt::format("repository metrics were computed as of {}, report is as of {}",
                                           format_date(metrics->as_of), format_date(config.as_of)));
    }
    if (metrics && !metrics->errors.empty()) {
        report.notes.push_back(fmt::format("repository metrics failed for {} package(s)", metrics->errors.size()));
    }

    const std::string document = report_to_json(report);
    if (config.format == OutputFormat::csv) {
        if (!config.output) {
            throw Error(ErrorKind::validation, "--format csv writes a bundle directory and needs --output");
        }
        const auto files = emit_report(report, ReportFormat::csv_bundle, *config.output);
        spdlog::info("wrote {} tables to {}", files.size(), config.output->string());
    } else if (config.output) {
        emit_report(report, ReportFormat::json, *config.output);
        spdlog::info("wrote {}", config.output->string());
    }
    return document;
}

std::string cmd_graph_inspect(const PipelineConfig& config, const InspectRequest& request)
{
    const std::string text = read_text_file(config.graph_path);
    const GraphLoad load = load_graph(text, LoadOptions{config.strict});
    const DependencyGraph& g = load.graph;

    std::string rendered;
    if (!request.roots.empty()) {
        rendered = serialize_graph(subgraph(g, request.roots, request.direction, request.depth)) + "\n";
    } else {
        json doc = summary_json(load, sha256_hex(text));
        if (request.package) {
            const NodeIndex i = g.index_of(*request.package);
            const PackageNode& node = g.node(i);
            std::vector<std::string> deps;
            for (NodeIndex d : g.dependencies(i)) {
                deps.push_back(g.node(d).id);
            }
            doc["package"] = {{"id", node.id},
                              {"name", node.name},
                              {"version", node.version},
                              {"licenses", node.licenses},
                              {"dependencies", deps},
                              {"reverse_dependencies", reverse_dependencies(g, node.id)},
                              {"transitive_reverse_dependencies", transitive_reverse_dependencies(g, node.id).size()}};
        }
        rendered = doc.dump(2) + "\n";
    }
    write_output(config, rendered);
    return rendered;
}

} // namespace supplyrank::cli
