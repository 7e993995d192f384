#include "collabnet/graph.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "collabnet/error.hpp"

namespace collabnet {

Graph::Graph(std::size_t node_count, std::span<const Edge> edges) {
    if (node_count > std::numeric_limits<std::uint32_t>::max()) throw ValidationError("graph too large");
    std::vector<Edge> arcs;
    arcs.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count)
            throw ValidationError("edge endpoint out of range: " + std::to_string(u) + "-" + std::to_string(v));
        if (u == v) throw ValidationError("self-loop on node " + std::to_string(u));
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    offsets_.assign(node_count + 1, 0);
    for (const auto& a : arcs) ++offsets_[a.first + 1];
    for (std::size_t v = 0; v < node_count; ++v) offsets_[v + 1] += offsets_[v];
    targets_.reserve(arcs.size());
    for (const auto& a : arcs) targets_.push_back(static_cast<std::uint32_t>(a.second));
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(v));
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t u = 0; u < node_count(); ++u)
        for (auto v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph Graph::permuted(std::span<const std::size_t> perm) const {
    std::vector<Edge> relabeled;
    for (auto [u, v] : edges()) relabeled.emplace_back(perm[u], perm[v]);
    return Graph(node_count(), relabeled);
}

}  // namespace collabnet
