#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collabnet/graph.hpp"

namespace collabnet {

/// How undirected links are counted in reported edge totals. Arcs counts
/// each link once per direction, as older Pajek-based tables did.
enum class CountMode { Edges, Arcs };

struct DegreeStats {
    std::vector<std::size_t> degrees;
    /// Reported edge count: edges, or 2 * edges under CountMode::Arcs.
    std::size_t n_edges = 0;
    double avg_degree = 0.0;  // 2 * n_edges / n
    double density = 0.0;     // 2 * n_edges / (n * (n - 1))
};

/// Throws ValidationError("degenerate network") when fewer than two nodes.
DegreeStats degree_stats(const Graph& g, CountMode mode = CountMode::Edges);

struct DiameterResult {
    std::size_t diameter = 0;
    /// The component the diameter was measured on: the largest one, ties
    /// broken by smallest member id.
    std::size_t component_size = 0;
    std::size_t component_root = 0;
    std::size_t n_components = 0;
};

/// Longest shortest path (in steps) inside the largest connected component.
/// Throws ValidationError("no paths") on an edgeless graph.
DiameterResult diameter(const Graph& g);

/// Connected components; `labels[v]` is the smallest node id in v's component.
std::vector<std::size_t> component_labels(const Graph& g);

/// Unnormalized shortest-path betweenness, each unordered endpoint pair
/// counted once, ties split evenly between equal-length paths.
///
/// Sources are processed in fixed blocks whose partial sums are reduced in
/// block order, so the result does not depend on `threads`.
std::vector<double> betweenness(const Graph& g, unsigned threads = 1);

/// Freeman centralization: sum(b_max - b_i) / ((n-1)^2 (n-2) / 2).
/// 1 for a star, 0 for vertex-transitive graphs. Needs n >= 3.
double betweenness_centralization(const Graph& g, unsigned threads = 1);
double betweenness_centralization(std::span<const double> betweenness);

struct ClusteringResult {
    std::uint64_t triangles = 0;
    std::uint64_t connected_triples = 0;
    /// 3 * triangles / connected_triples (0 when there are no triples).
    double transitivity = 0.0;
    /// Mean over all nodes of local clustering; nodes with degree < 2 count as 0.
    double avg_local_clustering = 0.0;
};

/// Needs n >= 3.
ClusteringResult clustering(const Graph& g);

struct PowerLawFit {
    double alpha = 0.0;
    double log_likelihood = 0.0;
    std::size_t n = 0;
    std::size_t k_min = 1;
};

/// Discrete maximum-likelihood exponent for P(k) ~ k^-alpha, k >= k_min.
/// Values below k_min are ignored. k_min is taken as given, never scanned.
/// Needs at least 10 distinct values >= k_min, else throws
/// ValidationError("no power-law support").
PowerLawFit powerlaw_fit(std::span<const std::size_t> values, std::size_t k_min = 1);

/// Log-likelihood of `values` (all >= k_min) under the discrete power law.
double powerlaw_log_likelihood(std::span<const std::size_t> values, double alpha, std::size_t k_min = 1);

struct NetworkStats {
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    std::size_t diameter = 0;
    double avg_degree = 0.0;
    double density = 0.0;
    double betweenness_centralization = 0.0;
    double transitivity = 0.0;
    double avg_local_clustering = 0.0;
    std::size_t n_components = 0;
    std::optional<double> powerlaw_alpha;
    std::size_t diameter_component_size = 0;

    bool operator==(const NetworkStats&) const = default;
};

struct StatsOptions {
    CountMode count_mode = CountMode::Edges;
    unsigned threads = 1;
};

/// The full battery. Needs n >= 3 and at least one edge.
NetworkStats compute_stats(const Graph& g, const StatsOptions& opts = {});

/// `specialty,year,nodes,edges,diameter,avg_degree,density,betweenness_centralization,transitivity,avg_local_clustering,components,alpha`
std::string stats_csv_header();
/// `fixed_decimals` < 0 prints shortest round-trip values.
std::string stats_csv_row(const std::string& specialty, int year, const NetworkStats& s, int fixed_decimals = -1);
std::string stats_json(const std::string& specialty, int year, const NetworkStats& s);

}  // namespace collabnet
