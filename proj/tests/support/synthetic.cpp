#include "synthetic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <unistd.h>

namespace supplyrank::testing {

namespace fs = std::filesystem;

std::string node_id(std::size_t i)
{
    return fmt::format("n{:06}", i);
}

namespace {

PackageNode make_node(std::string id)
{
    PackageNode node;
    node.name = "pkg-" + id;
    node.version = "1.0";
    node.licenses = {"MIT"};
    node.id = std::move(id);
    return node;
}

std::vector<PackageNode> numbered_nodes(std::size_t n)
{
    std::vector<PackageNode> nodes;
    nodes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes.push_back(make_node(node_id(i)));
    }
    return nodes;
}

std::uint64_t key(std::size_t from, std::size_t to)
{
    return (static_cast<std::uint64_t>(from) << 32) | to;
}

} // namespace

GraphSpec random_graph(std::mt19937_64& rng, std::size_t n, double density)
{
    GraphSpec spec;
    spec.nodes = numbered_nodes(n);
    std::bernoulli_distribution coin(density);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u != v && coin(rng)) {
                spec.edges.push_back({node_id(u), node_id(v)});
            }
        }
    }
    return spec;
}

GraphSpec scale_graph(std::uint64_t seed, std::size_t nodes, std::size_t edges)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> source(1, nodes - 1);

    GraphSpec spec;
    spec.nodes = numbered_nodes(nodes);
    spec.edges.reserve(edges);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges * 2);

    auto add = [&](std::size_t from, std::size_t to) {
        if (from != to && seen.insert(key(from, to)).second) {
            spec.edges.push_back({node_id(from), node_id(to)});
        }
    };

    // A few mutual dependencies so the graph is not a pure DAG.
    for (std::size_t k = 0; k < 16 && spec.edges.size() + 2 <= edges; ++k) {
        const std::size_t a = source(rng);
        const std::size_t b = static_cast<std::size_t>(static_cast<double>(a) * unit(rng));
        add(a, b);
        add(b, a);
    }
    // Older packages are picked far more often: target = u * r^3.
    while (spec.edges.size() < edges) {
        const std::size_t u = source(rng);
        const double r = unit(rng);
        add(u, static_cast<std::size_t>(static_cast<double>(u) * r * r * r));
    }
    return spec;
}

GraphSpec tied_graph(std::uint64_t seed, std::size_t nodes, std::size_t ties)
{
    std::mt19937_64 rng(seed);
    GraphSpec spec;
    spec.nodes = numbered_nodes(nodes);

    // Background: sparse random DAG.
    std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
    std::unordered_set<std::uint64_t> seen;
    for (std::size_t k = 0; k < nodes * 2; ++k) {
        std::size_t a = pick(rng);
        std::size_t b = pick(rng);
        if (a == b) {
            continue;
        }
        if (a < b) {
            std::swap(a, b);
        }
        if (seen.insert(key(a, b)).second) {
            spec.edges.push_back({node_id(a), node_id(b)});
        }
    }

    // Tied hubs: each gets the same number of fresh leaf dependents, which
    // nothing else touches, so their scores are bitwise equal.
    constexpr std::size_t kLeaves = 40;
    for (std::size_t t = 0; t < ties; ++t) {
        const std::string hub = fmt::format("tie{:02}", t);
        spec.nodes.push_back(make_node(hub));
        for (std::size_t l = 0; l < kLeaves; ++l) {
            const std::string leaf = fmt::format("tie{:02}-leaf{:02}", t, l);
            spec.nodes.push_back(make_node(leaf));
            spec.edges.push_back({leaf, hub});
        }
    }
    return spec;
}

std::string to_document(const GraphSpec& spec)
{
    std::string out = "{\"nodes\":[";
    for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
        const PackageNode& n = spec.nodes[i];
        out += fmt::format("{}{{\"id\":\"{}\",\"name\":\"{}\",\"version\":\"{}\",\"licenses\":[", i ? "," : "", n.id,
                           n.name, n.version);
        for (std::size_t l = 0; l < n.licenses.size(); ++l) {
            out += fmt::format("{}\"{}\"", l ? "," : "", n.licenses[l]);
        }
        out += "]}";
    }
    out += "],\"edges\":[";
    for (std::size_t i = 0; i < spec.edges.size(); ++i) {
        out += fmt::format("{}{{\"from\":\"{}\",\"to\":\"{}\",\"label\":\"DEPENDS_ON\"}}", i ? "," : "",
                           spec.edges[i].from, spec.edges[i].to);
    }
    out += "]}\n";
    return out;
}

GraphSpec shuffled(const GraphSpec& spec, std::mt19937_64& rng)
{
    GraphSpec out = spec;
    std::shuffle(out.nodes.begin(), out.nodes.end(), rng);
    std::shuffle(out.edges.begin(), out.edges.end(), rng);
    return out;
}

DependencyGraph build(const GraphSpec& spec)
{
    return DependencyGraph::build(spec.nodes, spec.edges);
}

DependencyGraph make_graph(const std::vector<std::string>& ids,
                           const std::vector<std::pair<std::string, std::string>>& edges)
{
    std::vector<PackageNode> nodes;
    for (const std::string& id : ids) {
        nodes.push_back(make_node(id));
    }
    std::vector<EdgeRef> refs;
    for (const auto& [from, to] : edges) {
        refs.push_back({from, to});
    }
    return DependencyGraph::build(std::move(nodes), std::move(refs));
}

TempDir::TempDir()
{
    std::string pattern = (fs::temp_directory_path() / "supplyrank-test-XXXXXX").string();
    if (!mkdtemp(pattern.data())) {
        throw std::runtime_error("mkdtemp failed");
    }
    path_ = pattern;
}

TempDir::~TempDir()
{
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, const std::string& text)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

void make_git_fixture(const fs::path& dir)
{
    struct Scripted {
        const char* name;
        const char* email;
        const char* date;
    };
    static constexpr Scripted kCommits[] = {
        {"Ada Lovelace", "ada@example.org", "2014-03-18T00:00:00Z"},
        {"Ada Lovelace", "ADA@example.org", "2015-06-01T12:00:00Z"},
        {"Grace Hopper", "grace@example.org", "2016-01-10T08:30:00Z"},
        {"Ada Lovelace", "ada@example.org", "2018-02-02T00:00:00Z"},
        {"Grace Hopper", "grace@example.org", "2020-01-10T00:00:00Z"},
        {"Ada Lovelace", "ada@example.org", "2020-01-20T00:00:00Z"},
        {"Ken T", "", "2023-12-31T23:59:59Z"},
    };

    fs::create_directories(dir);
    const std::string git = fmt::format("git -C '{}' -c init.defaultBranch=main -c commit.gpgsign=false "
                                        "-c user.name=fixture -c user.email=fixture@example.org", dir.string());
    if (std::system(fmt::format("{} init -q", git).c_str()) != 0) {
        throw std::runtime_error("git init failed");
    }
    int n = 0;
    for (const Scripted& c : kCommits) {
        write_text(dir / "src" / "main.c", fmt::format("{}", std::string(static_cast<std::size_t>(++n), '\n')));
        const std::string cmd = fmt::format(
            "GIT_AUTHOR_NAME='{0}' GIT_AUTHOR_EMAIL='{1}' GIT_AUTHOR_DATE='{2}' "
            "GIT_COMMITTER_NAME='{0}' GIT_COMMITTER_EMAIL='{1}' GIT_COMMITTER_DATE='{2}' "
            "{3} add -A && "
            "GIT_AUTHOR_NAME='{0}' GIT_AUTHOR_EMAIL='{1}' GIT_AUTHOR_DATE='{2}' "
            "GIT_COMMITTER_NAME='{0}' GIT_COMMITTER_EMAIL='{1}' GIT_COMMITTER_DATE='{2}' "
            "{3} commit -q --allow-empty-message -m 'commit {4}'",
            c.name, c.email, c.date, git, n);
        if (std::system(cmd.c_str()) != 0) {
            throw std::runtime_error("git commit failed");
        }
    }
    if (std::system(fmt::format("{} tag -a v1.0 -m fixture", git).c_str()) != 0) {
        throw std::runtime_error("git tag failed");
    }
}

fs::path data_dir()
{
    return SUPPLYRANK_TEST_DATA_DIR;
}

} // namespace supplyrank::testing
