#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace supplyrank {

/// Dense index of a node inside one DependencyGraph. Indices follow the
/// bytewise order of node ids, so they are independent of export order.
using NodeIndex = std::uint32_t;

inline constexpr std::string_view kDependsOn = "DEPENDS_ON";

struct PackageNode {
    std::string id;
    std::string name;
    std::string version;
    std::vector<std::string> licenses;
    /// Export fields not modeled above, kept verbatim as compact JSON text.
    std::map<std::string, std::string> attributes;

    friend bool operator==(const PackageNode&, const PackageNode&) = default;
};

/// `from` depends on `to`.
struct Edge {
    NodeIndex from;
    NodeIndex to;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeRef {
    std::string from;
    std::string to;
};

struct LoadOptions {
    /// Strict: dangling edges are a validation error. Lenient: they are dropped and counted.
    bool strict = true;
};

/// Ingestion diagnostics.
struct LoadReport {
    std::size_t duplicate_edges = 0;
    std::size_t dangling_edges = 0;
    std::size_t ignored_label_edges = 0;
    std::vector<EdgeRef> dropped_dangling;
};

enum class Direction { forward, reverse };

/// Immutable directed package graph. Edges run from a dependent to its
/// dependency. Duplicate edges are collapsed and self-loops rejected at
/// construction, so every query sees a simple digraph.
class DependencyGraph {
public:
    DependencyGraph() = default;

    /// Validates and indexes the given nodes and edges.
    static DependencyGraph build(std::vector<PackageNode> nodes, std::vector<EdgeRef> edges,
                                 const LoadOptions& options = {}, LoadReport* report = nullptr);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    std::span<const PackageNode> nodes() const noexcept { return nodes_; }
    const PackageNode& node(NodeIndex i) const { return nodes_.at(i); }

    /// Sorted by (from, to).
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::optional<NodeIndex> find(std::string_view id) const;
    /// Throws Error{not_found}.
    NodeIndex index_of(std::string_view id) const;

    /// Direct dependents of `i` (sources of in-edges), ascending.
    std::span<const NodeIndex> dependents(NodeIndex i) const;
    /// Direct dependencies of `i` (targets of out-edges), ascending.
    std::span<const NodeIndex> dependencies(NodeIndex i) const;

    std::size_t in_degree(NodeIndex i) const { return dependents(i).size(); }
    std::size_t out_degree(NodeIndex i) const { return dependencies(i).size(); }

    friend bool operator==(const DependencyGraph& a, const DependencyGraph& b)
    {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    std::vector<PackageNode> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> in_offsets_;
    std::vector<NodeIndex> in_sources_;
    std::vector<std::size_t> out_offsets_;
    std::vector<NodeIndex> out_targets_;
};

struct GraphLoad {
    DependencyGraph graph;
    LoadReport report;
};

/// Parses a graph export document:
/// `{"nodes":[{"id","name","version","licenses",...}],"edges":[{"from","to","label"}]}`.
/// Throws Error{parse} with line/column for malformed JSON and Error{validation}
/// for contract violations.
GraphLoad load_graph(std::string_view document, const LoadOptions& options = {});
GraphLoad load_graph_file(const std::filesystem::path& path, const LoadOptions& options = {});

/// Serializes back to the export format. Loading the result reproduces the graph.
std::string serialize_graph(const DependencyGraph& g);

std::set<std::string> reverse_dependencies(const DependencyGraph& g, std::string_view id);

/// Every node with a directed path to `id`, excluding `id`.
std::set<std::string> transitive_reverse_dependencies(const DependencyGraph& g, std::string_view id);

/// Induced subgraph over nodes within `depth` hops of `roots` following `direction`.
DependencyGraph subgraph(const DependencyGraph& g, const std::set<std::string>& roots, Direction direction,
                         std::size_t depth);

/// Number of weakly connected components.
std::size_t weak_component_count(const DependencyGraph& g);

} // namespace supplyrank
