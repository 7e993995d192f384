#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collabnet/corpus.hpp"
#include "collabnet/graph.hpp"
#include "collabnet/metrics.hpp"

namespace collabnet {

enum class IsolatePolicy { Keep, Drop };

enum class ExportFormat { GraphML, Dot, EdgelistCsv };

std::string_view to_string(IsolatePolicy p);
std::string_view to_string(CountMode m);
IsolatePolicy parse_isolate_policy(std::string_view s);
CountMode parse_count_mode(std::string_view s);
/// Accepts graphml, dot, csv or edgelist_csv; anything else throws
/// ValidationError listing the supported formats.
ExportFormat parse_export_format(std::string_view s);

struct CollabEdge {
    std::size_t source = 0;  // index into nodes, source < target
    std::size_t target = 0;
    std::int64_t copub_count = 0;
    double cosine = 0.0;

    bool operator==(const CollabEdge&) const = default;
};

/// Country-to-country co-publication network for one (specialty, year) slice.
struct CollabNetwork {
    std::string specialty;
    int year = 0;
    IsolatePolicy isolate_policy = IsolatePolicy::Drop;
    CountMode count_mode = CountMode::Edges;
    std::vector<std::string> nodes;  // sorted country codes
    std::vector<CollabEdge> edges;   // sorted by (source, target)
    /// Internationally coauthored records involving each node. Empty when
    /// unknown (networks read back from an edge list).
    std::vector<std::int64_t> node_strength;

    std::size_t edge_count() const { return edges.size(); }
    /// Edge total as reported under count_mode (doubled for arcs).
    std::size_t reported_edge_count() const { return edges.size() * (count_mode == CountMode::Arcs ? 2 : 1); }

    /// Binarized topology over the same node indices.
    Graph topology() const;

    bool operator==(const CollabNetwork&) const = default;
};

/// Full counting: every record adds 1 to each unordered pair of its
/// countries. Records must share one specialty and year.
CollabNetwork build(std::span<const PublicationRecord> records, IsolatePolicy isolate_policy = IsolatePolicy::Drop,
                    CountMode count_mode = CountMode::Edges);

/// Salton cosine n_ij / sqrt(n_i * n_j) on every edge.
CollabNetwork cosine_weights(CollabNetwork net);

struct ExportOptions {
    bool header = true;  // edge list only
};

/// Deterministic serialization; nodes and edges in country-code order.
std::string export_network(const CollabNetwork& net, ExportFormat format, const ExportOptions& opts = {});

/// Reads `source,target,copub_count[,cosine]` rows (header optional).
/// Node strengths are left unknown; a missing cosine column leaves cosine 0.
CollabNetwork read_edgelist(std::string_view csv, std::string specialty = "", int year = 0);

}  // namespace collabnet
