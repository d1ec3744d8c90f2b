#include "supplyrank/depgraph.hpp"

#include "json_util.hpp"
#include "supplyrank/error.hpp"
#include "supplyrank/fileio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <numeric>

namespace supplyrank {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxListedOffenders = 20;

void build_csr(std::size_t n, std::span<const Edge> edges, bool by_target, std::vector<std::size_t>& offsets,
               std::vector<NodeIndex>& adjacent)
{
    offsets.assign(n + 1, 0);
    for (const Edge& e : edges) {
        ++offsets[(by_target ? e.to : e.from) + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    adjacent.resize(edges.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    // edges are sorted by (from, to), so both adjacency lists come out ascending
    for (const Edge& e : edges) {
        if (by_target) {
            adjacent[cursor[e.to]++] = e.from;
        } else {
            adjacent[cursor[e.from]++] = e.to;
        }
    }
}

std::string describe_edges(std::span<const EdgeRef> edges)
{
    std::string out;
    for (std::size_t i = 0; i < edges.size() && i < kMaxListedOffenders; ++i) {
        out += fmt::format("{}({} -> {})", i == 0 ? "" : ", ", edges[i].from, edges[i].to);
    }
    if (edges.size() > kMaxListedOffenders) {
        out += fmt::format(", ... and {} more", edges.size() - kMaxListedOffenders);
    }
    return out;
}

} // namespace

DependencyGraph DependencyGraph::build(std::vector<PackageNode> nodes, std::vector<EdgeRef> edges,
                                       const LoadOptions& options, LoadReport* report)
{
    LoadReport local;
    LoadReport& diag = report ? *report : local;

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id.empty()) {
            throw Error(ErrorKind::validation, fmt::format("node #{} has an empty id", i));
        }
        if (nodes[i].name.empty()) {
            throw Error(ErrorKind::validation, fmt::format("node '{}' has an empty name", nodes[i].id));
        }
    }
    std::sort(nodes.begin(), nodes.end(), [](const PackageNode& a, const PackageNode& b) { return a.id < b.id; });
    auto dup = std::adjacent_find(nodes.begin(), nodes.end(),
                                  [](const PackageNode& a, const PackageNode& b) { return a.id == b.id; });
    if (dup != nodes.end()) {
        throw Error(ErrorKind::validation, fmt::format("duplicate node id '{}'", dup->id));
    }
    if (nodes.size() > std::numeric_limits<NodeIndex>::max()) {
        throw Error(ErrorKind::validation, "graph exceeds the supported node count");
    }

    DependencyGraph g;
    g.nodes_ = std::move(nodes);

    std::vector<EdgeRef> dangling;
    g.edges_.reserve(edges.size());
    for (EdgeRef& ref : edges) {
        const auto from = g.find(ref.from);
        const auto to = g.find(ref.to);
        if (!from || !to) {
            dangling.push_back(std::move(ref));
            continue;
        }
        if (*from == *to) {
            throw Error(ErrorKind::validation, fmt::format("self-loop on node '{}'", ref.from));
        }
        g.edges_.push_back({*from, *to});
    }
    if (!dangling.empty()) {
        if (options.strict) {
            throw Error(ErrorKind::validation, fmt::format("{} dangling edge(s): {}", dangling.size(),
                                                           describe_edges(dangling)));
        }
        diag.dangling_edges += dangling.size();
        diag.dropped_dangling = std::move(dangling);
    }

    std::sort(g.edges_.begin(), g.edges_.end());
    const auto unique_end = std::unique(g.edges_.begin(), g.edges_.end());
    diag.duplicate_edges += static_cast<std::size_t>(g.edges_.end() - unique_end);
    g.edges_.erase(unique_end, g.edges_.end());

    build_csr(g.nodes_.size(), g.edges_, true, g.in_offsets_, g.in_sources_);
    build_csr(g.nodes_.size(), g.edges_, false, g.out_offsets_, g.out_targets_);
    return g;
}

std::optional<NodeIndex> DependencyGraph::find(std::string_view id) const
{
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const PackageNode& n, std::string_view key) { return n.id < key; });
    if (it == nodes_.end() || it->id != id) {
        return std::nullopt;
    }
    return static_cast<NodeIndex>(it - nodes_.begin());
}

NodeIndex DependencyGraph::index_of(std::string_view id) const
{
    if (auto i = find(id)) {
        return *i;
    }
    throw Error(ErrorKind::not_found, fmt::format("unknown node id '{}'", id));
}

std::span<const NodeIndex> DependencyGraph::dependents(NodeIndex i) const
{
    return std::span<const NodeIndex>(in_sources_).subspan(in_offsets_.at(i), in_offsets_.at(i + 1) - in_offsets_[i]);
}

std::span<const NodeIndex> DependencyGraph::dependencies(NodeIndex i) const
{
    return std::span<const NodeIndex>(out_targets_)
        .subspan(out_offsets_.at(i), out_offsets_.at(i + 1) - out_offsets_[i]);
}

namespace {

std::string require_string(const json& object, const char* key, std::string_view where)
{
    const json* value = detail::member(object, key);
    if (!value || !value->is_string()) {
        throw Error(ErrorKind::validation, fmt::format("{}: field '{}' must be a string", where, key));
    }
    return value->get<std::string>();
}

PackageNode parse_node(const json& item, std::size_t position)
{
    const std::string where = fmt::format("nodes[{}]", position);
    if (!item.is_object()) {
        throw Error(ErrorKind::validation, fmt::format("{}: expected an object", where));
    }
    PackageNode node;
    node.id = require_string(item, "id", where);
    node.name = require_string(item, "name", where);
    for (const auto& [key, value] : item.items()) {
        if (key == "id" || key == "name") {
            continue;
        }
        if (key == "version") {
            if (value.is_null()) {
                continue;
            }
            if (!value.is_string()) {
                throw Error(ErrorKind::validation, fmt::format("{} ('{}'): version must be a string", where, node.id));
            }
            node.version = value.get<std::string>();
        } else if (key == "licenses") {
            if (value.is_string()) {
                node.licenses.push_back(value.get<std::string>());
            } else if (value.is_array()) {
                for (const json& lic : value) {
                    if (!lic.is_string()) {
                        throw Error(ErrorKind::validation,
                                    fmt::format("{} ('{}'): licenses must be strings", where, node.id));
                    }
                    node.licenses.push_back(lic.get<std::string>());
                }
            } else if (!value.is_null()) {
                throw Error(ErrorKind::validation,
                            fmt::format("{} ('{}'): licenses must be a list of strings", where, node.id));
            }
        } else {
            node.attributes.emplace(key, value.dump());
        }
    }
    return node;
}

} // namespace

GraphLoad load_graph(std::string_view document, const LoadOptions& options)
{
    const json doc = detail::parse_json(document, "graph export");
    if (!doc.is_object()) {
        throw Error(ErrorKind::validation, "graph export: top level must be an object");
    }
    const json* nodes = detail::member(doc, "nodes");
    if (!nodes || !nodes->is_array()) {
        throw Error(ErrorKind::validation, "graph export: 'nodes' must be an array");
    }
    const json* edges = detail::member(doc, "edges");
    if (edges && !edges->is_array() && !edges->is_null()) {
        throw Error(ErrorKind::validation, "graph export: 'edges' must be an array");
    }

    std::vector<PackageNode> parsed_nodes;
    parsed_nodes.reserve(nodes->size());
    for (std::size_t i = 0; i < nodes->size(); ++i) {
        parsed_nodes.push_back(parse_node((*nodes)[i], i));
    }

    GraphLoad out;
    std::vector<EdgeRef> parsed_edges;
    if (edges && edges->is_array()) {
        parsed_edges.reserve(edges->size());
        for (std::size_t i = 0; i < edges->size(); ++i) {
            const json& item = (*edges)[i];
            const std::string where = fmt::format("edges[{}]", i);
            if (!item.is_object()) {
                throw Error(ErrorKind::validation, fmt::format("{}: expected an object", where));
            }
            if (const json* label = detail::member(item, "label"); label && !label->is_null()) {
                if (!label->is_string()) {
                    throw Error(ErrorKind::validation, fmt::format("{}: label must be a string", where));
                }
                if (label->get_ref<const std::string&>() != kDependsOn) {
                    ++out.report.ignored_label_edges;
                    continue;
                }
            }
            parsed_edges.push_back({require_string(item, "from", where), require_string(item, "to", where)});
        }
    }

    out.graph = DependencyGraph::build(std::move(parsed_nodes), std::move(parsed_edges), options, &out.report);
    return out;
}

GraphLoad load_graph_file(const std::filesystem::path& path, const LoadOptions& options)
{
    const std::string text = read_text_file(path);
    try {
        return load_graph(text, options);
    } catch (const Error& e) {
        throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string serialize_graph(const DependencyGraph& g)
{
    json nodes = json::array();
    for (const PackageNode& n : g.nodes()) {
        json item = json::object();
        for (const auto& [key, raw] : n.attributes) {
            item[key] = json::parse(raw);
        }
        item["id"] = n.id;
        item["name"] = n.name;
        item["version"] = n.version;
        item["licenses"] = n.licenses;
        nodes.push_back(std::move(item));
    }
    json edges = json::array();
    for (const Edge& e : g.edges()) {
        edges.push_back({{"from", g.node(e.from).id}, {"to", g.node(e.to).id}, {"label", kDependsOn}});
    }
    json doc = {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
    return doc.dump();
}

std::set<std::string> reverse_dependencies(const DependencyGraph& g, std::string_view id)
{
    std::set<std::string> out;
    for (NodeIndex u : g.dependents(g.index_of(id))) {
        out.insert(g.node(u).id);
    }
    return out;
}

std::set<std::string> transitive_reverse_dependencies(const DependencyGraph& g, std::string_view id)
{
    const NodeIndex start = g.index_of(id);
    std::vector<bool> visited(g.node_count(), false);
    std::deque<NodeIndex> queue{start};
    visited[start] = true;
    std::set<std::string> out;
    while (!queue.empty()) {
        const NodeIndex v = queue.front();
        queue.pop_front();
        for (NodeIndex u : g.dependents(v)) {
            if (!visited[u]) {
                visited[u] = true;
                out.insert(g.node(u).id);
                queue.push_back(u);
            }
        }
    }
    return out;
}

DependencyGraph subgraph(const DependencyGraph& g, const std::set<std::string>& roots, Direction direction,
                         std::size_t depth)
{
    std::vector<std::size_t> distance(g.node_count(), std::numeric_limits<std::size_t>::max());
    std::deque<NodeIndex> queue;
    for (const std::string& root : roots) {
        const NodeIndex r = g.index_of(root);
        if (distance[r] != 0) {
            distance[r] = 0;
            queue.push_back(r);
        }
    }
    while (!queue.empty()) {
        const NodeIndex v = queue.front();
        queue.pop_front();
        if (distance[v] == depth) {
            continue;
        }
        const auto next = direction == Direction::forward ? g.dependencies(v) : g.dependents(v);
        for (NodeIndex w : next) {
            if (distance[w] == std::numeric_limits<std::size_t>::max()) {
                distance[w] = distance[v] + 1;
                queue.push_back(w);
            }
        }
    }

    auto kept = [&](NodeIndex i) { return distance[i] != std::numeric_limits<std::size_t>::max(); };
    std::vector<PackageNode> nodes;
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        if (kept(i)) {
            nodes.push_back(g.node(i));
        }
    }
    std::vector<EdgeRef> edges;
    for (const Edge& e : g.edges()) {
        if (kept(e.from) && kept(e.to)) {
            edges.push_back({g.node(e.from).id, g.node(e.to).id});
        }
    }
    return DependencyGraph::build(std::move(nodes), std::move(edges));
}

std::size_t weak_component_count(const DependencyGraph& g)
{
    std::vector<NodeIndex> parent(g.node_count());
    std::iota(parent.begin(), parent.end(), NodeIndex{0});
    auto root = [&](NodeIndex x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = g.node_count();
    for (const Edge& e : g.edges()) {
        const NodeIndex a = root(e.from);
        const NodeIndex b = root(e.to);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
            --components;
        }
    }
    return components;
}

} // namespace supplyrank
