#include "collabnet/netbuild.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "collabnet/error.hpp"
#include "collabnet/format.hpp"

namespace collabnet {

std::string_view to_string(IsolatePolicy p) { return p == IsolatePolicy::Keep ? "keep" : "drop"; }
std::string_view to_string(CountMode m) { return m == CountMode::Arcs ? "arcs" : "edges"; }

IsolatePolicy parse_isolate_policy(std::string_view s) {
    if (s == "keep") return IsolatePolicy::Keep;
    if (s == "drop") return IsolatePolicy::Drop;
    throw ValidationError("unknown isolate policy '" + std::string(s) + "'; expected keep or drop");
}

CountMode parse_count_mode(std::string_view s) {
    if (s == "edges") return CountMode::Edges;
    if (s == "arcs") return CountMode::Arcs;
    throw ValidationError("unknown count mode '" + std::string(s) + "'; expected edges or arcs");
}

ExportFormat parse_export_format(std::string_view s) {
    if (s == "graphml") return ExportFormat::GraphML;
    if (s == "dot") return ExportFormat::Dot;
    if (s == "csv" || s == "edgelist_csv") return ExportFormat::EdgelistCsv;
    throw ValidationError("unknown export format '" + std::string(s) + "'; supported: graphml, dot, csv");
}

Graph CollabNetwork::topology() const {
    std::vector<Edge> e;
    e.reserve(edges.size());
    for (const auto& x : edges) e.emplace_back(x.source, x.target);
    return Graph(nodes.size(), e);
}

CollabNetwork build(std::span<const PublicationRecord> records, IsolatePolicy isolate_policy, CountMode count_mode) {
    if (records.empty()) throw ValidationError("empty slice: no records to build a network from");
    const auto& first = records.front();
    for (const auto& r : records) {
        if (r.year != first.year)
            throw ValidationError("mixed years in slice: " + std::to_string(first.year) + " and " +
                                  std::to_string(r.year));
        if (r.specialty != first.specialty)
            throw ValidationError("mixed specialties in slice: '" + first.specialty + "' and '" + r.specialty + "'");
    }

    std::map<std::pair<std::string, std::string>, std::int64_t> pair_counts;
    std::map<std::string, std::int64_t> strength;
    std::set<std::string> seen;
    std::vector<std::string> cs;
    for (const auto& r : records) {
        cs = r.countries;
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        seen.insert(cs.begin(), cs.end());
        if (cs.size() < 2) continue;
        for (const auto& c : cs) ++strength[c];
        for (std::size_t i = 0; i < cs.size(); ++i)
            for (std::size_t j = i + 1; j < cs.size(); ++j) ++pair_counts[{cs[i], cs[j]}];
    }

    CollabNetwork net;
    net.specialty = first.specialty;
    net.year = first.year;
    net.isolate_policy = isolate_policy;
    net.count_mode = count_mode;
    for (const auto& c : seen)
        if (isolate_policy == IsolatePolicy::Keep || strength.count(c)) net.nodes.push_back(c);

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) index[net.nodes[i]] = i;
    net.node_strength.resize(net.nodes.size(), 0);
    for (const auto& [c, k] : strength) net.node_strength[index.at(c)] = k;
    for (const auto& [p, count] : pair_counts) net.edges.push_back({index.at(p.first), index.at(p.second), count, 0.0});
    return cosine_weights(std::move(net));
}

CollabNetwork cosine_weights(CollabNetwork net) {
    if (net.node_strength.size() != net.nodes.size())
        throw InternalError("cosine_weights: node strengths not populated");
    for (auto& e : net.edges) {
        const auto ni = net.node_strength[e.source];
        const auto nj = net.node_strength[e.target];
        if (ni <= 0 || nj <= 0)
            throw InternalError("cosine_weights: zero strength on an endpoint of edge " + net.nodes[e.source] + "-" +
                                net.nodes[e.target]);
        e.cosine = static_cast<double>(e.copub_count) / std::sqrt(static_cast<double>(ni) * static_cast<double>(nj));
    }
    return net;
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

bool has_strength(const CollabNetwork& net) { return net.node_strength.size() == net.nodes.size(); }

std::string to_graphml(const CollabNetwork& net) {
    std::string o;
    o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
    o += "  <key id=\"specialty\" for=\"graph\" attr.name=\"specialty\" attr.type=\"string\"/>\n";
    o += "  <key id=\"year\" for=\"graph\" attr.name=\"year\" attr.type=\"int\"/>\n";
    o += "  <key id=\"isolate_policy\" for=\"graph\" attr.name=\"isolate_policy\" attr.type=\"string\"/>\n";
    o += "  <key id=\"count_mode\" for=\"graph\" attr.name=\"count_mode\" attr.type=\"string\"/>\n";
    o += "  <key id=\"strength\" for=\"node\" attr.name=\"strength\" attr.type=\"long\"/>\n";
    o += "  <key id=\"copub_count\" for=\"edge\" attr.name=\"copub_count\" attr.type=\"long\"/>\n";
    o += "  <key id=\"cosine\" for=\"edge\" attr.name=\"cosine\" attr.type=\"double\"/>\n";
    o += "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    o += "    <data key=\"specialty\">" + xml_escape(net.specialty) + "</data>\n";
    o += "    <data key=\"year\">" + std::to_string(net.year) + "</data>\n";
    o += "    <data key=\"isolate_policy\">" + std::string(to_string(net.isolate_policy)) + "</data>\n";
    o += "    <data key=\"count_mode\">" + std::string(to_string(net.count_mode)) + "</data>\n";
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        o += "    <node id=\"" + xml_escape(net.nodes[i]) + "\"";
        if (has_strength(net))
            o += "><data key=\"strength\">" + std::to_string(net.node_strength[i]) + "</data></node>\n";
        else
            o += "/>\n";
    }
    for (const auto& e : net.edges) {
        o += "    <edge source=\"" + xml_escape(net.nodes[e.source]) + "\" target=\"" + xml_escape(net.nodes[e.target]) +
             "\"><data key=\"copub_count\">" + std::to_string(e.copub_count) + "</data><data key=\"cosine\">" +
             format_real(e.cosine) + "</data></edge>\n";
    }
    o += "  </graph>\n</graphml>\n";
    return o;
}

std::string to_dot(const CollabNetwork& net) {
    std::string o = "graph " + dot_quote(net.specialty + " " + std::to_string(net.year)) + " {\n";
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        o += "  " + dot_quote(net.nodes[i]);
        if (has_strength(net)) o += " [strength=" + std::to_string(net.node_strength[i]) + "]";
        o += ";\n";
    }
    for (const auto& e : net.edges)
        o += "  " + dot_quote(net.nodes[e.source]) + " -- " + dot_quote(net.nodes[e.target]) +
             " [copub_count=" + std::to_string(e.copub_count) + ", cosine=" + format_real(e.cosine) + "];\n";
    o += "}\n";
    return o;
}

std::string to_edgelist(const CollabNetwork& net, const ExportOptions& opts) {
    std::string o;
    if (opts.header) o += "source,target,copub_count,cosine\n";
    for (const auto& e : net.edges)
        o += csv_field(net.nodes[e.source]) + "," + csv_field(net.nodes[e.target]) + "," +
             std::to_string(e.copub_count) + "," + format_real(e.cosine) + "\n";
    return o;
}

template <class T>
T parse_number(const std::string& s, std::size_t line, const char* what) {
    T v{};
    auto t = trim(s);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size())
        throw ValidationError("edge list line " + std::to_string(line) + ": bad " + what + " '" + s + "'");
    return v;
}

}  // namespace

std::string export_network(const CollabNetwork& net, ExportFormat format, const ExportOptions& opts) {
    switch (format) {
        case ExportFormat::GraphML: return to_graphml(net);
        case ExportFormat::Dot: return to_dot(net);
        case ExportFormat::EdgelistCsv: return to_edgelist(net, opts);
    }
    throw InternalError("export_network: unhandled format");
}

CollabNetwork read_edgelist(std::string_view csv, std::string specialty, int year) {
    struct Row {
        std::string a, b;
        std::int64_t count;
        double cosine;
    };
    std::vector<Row> rows;
    std::set<std::string> codes;
    auto lines = split_lines(csv);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto cols = split_csv_line(lines[i]);
        if (i == 0 && trim(cols[0]) == "source") continue;
        if (cols.size() < 3 || cols.size() > 4)
            throw ValidationError("edge list line " + std::to_string(i + 1) + ": expected 3 or 4 columns");
        Row r{trim(cols[0]), trim(cols[1]), parse_number<std::int64_t>(cols[2], i + 1, "copub_count"),
              cols.size() == 4 ? parse_number<double>(cols[3], i + 1, "cosine") : 0.0};
        if (r.a == r.b) throw ValidationError("edge list line " + std::to_string(i + 1) + ": self-loop on " + r.a);
        if (r.count < 1) throw ValidationError("edge list line " + std::to_string(i + 1) + ": copub_count must be >= 1");
        if (r.b < r.a) std::swap(r.a, r.b);
        codes.insert(r.a);
        codes.insert(r.b);
        rows.push_back(std::move(r));
    }
    CollabNetwork net;
    net.specialty = std::move(specialty);
    net.year = year;
    net.nodes.assign(codes.begin(), codes.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) index[net.nodes[i]] = i;
    for (const auto& r : rows) net.edges.push_back({index[r.a], index[r.b], r.count, r.cosine});
    std::sort(net.edges.begin(), net.edges.end(),
              [](const auto& x, const auto& y) { return std::tie(x.source, x.target) < std::tie(y.source, y.target); });
    auto dup = std::adjacent_find(net.edges.begin(), net.edges.end(), [](const auto& x, const auto& y) {
        return x.source == y.source && x.target == y.target;
    });
    if (dup != net.edges.end())
        throw ValidationError("edge list repeats pair " + net.nodes[dup->source] + "-" + net.nodes[dup->target]);
    return net;
}

}  // namespace collabnet
