#include "collabnet/longit.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "collabnet/error.hpp"
#include "collabnet/format.hpp"

namespace collabnet {

void TrendSeries::validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].nodes < 0 || points[i].edges < 0)
            throw ValidationError("negative counts in series '" + specialty + "'");
        if (i > 0 && points[i].year <= points[i - 1].year)
            throw ValidationError("years must strictly increase in series '" + specialty + "'");
    }
}

std::string_view to_string(Trend t) {
    switch (t) {
        case Trend::Decrease: return "decrease";
        case Trend::NoChange: return "no change";
        case Trend::Increase: return "increase";
    }
    return "";
}

std::int64_t round_half_up(double x) { return static_cast<std::int64_t>(std::floor(x + 0.5)); }

Growth growth(const TrendSeries& series) {
    series.validate();
    if (series.points.size() < 2) throw ValidationError("growth needs at least two years in '" + series.specialty + "'");
    const auto& first = series.points.front();
    const auto& last = series.points.back();
    if (first.edges == 0) throw ValidationError("edge growth undefined: zero edges in first year of '" + series.specialty + "'");
    Growth g;
    g.node_change = last.nodes - first.nodes;
    g.edge_growth_pct = 100.0 * static_cast<double>(last.edges - first.edges) / static_cast<double>(first.edges);
    g.edge_growth_pct_rounded = round_half_up(g.edge_growth_pct);
    if (first.diameter && last.diameter) {
        if (*last.diameter < *first.diameter) g.diameter_trend = Trend::Decrease;
        else if (*last.diameter > *first.diameter) g.diameter_trend = Trend::Increase;
        else g.diameter_trend = Trend::NoChange;
    }
    return g;
}

Convergence convergence(std::span<const TrendSeries> series) {
    Convergence out;
    if (series.empty()) return out;
    for (const auto& p : series.front().points) out.years.push_back(p.year);
    for (const auto& s : series) {
        s.validate();
        std::vector<int> years;
        for (const auto& p : s.points) years.push_back(p.year);
        if (years != out.years) throw ValidationError("series '" + s.specialty + "' has a different year grid");
        if (s.points.empty()) continue;
        const auto& last = s.points.back();
        if (last.nodes == 0) throw ValidationError("final-year node count is zero in '" + s.specialty + "'");
        ConvergenceCurve c;
        c.specialty = s.specialty;
        c.years = years;
        for (const auto& p : s.points) {
            c.node_share.push_back(static_cast<double>(p.nodes) / static_cast<double>(last.nodes));
            c.edge_share.push_back(last.edges == 0 ? 0.0
                                                   : static_cast<double>(p.edges) / static_cast<double>(last.edges));
        }
        for (std::size_t i = 1; i < c.node_share.size(); ++i)
            if (c.node_share[i] < c.node_share[i - 1]) c.monotone = false;
        out.curves.push_back(std::move(c));
    }
    for (std::size_t t = 0; t < out.years.size(); ++t) {
        double ns = 0.0, es = 0.0;
        for (const auto& c : out.curves) {
            ns += c.node_share[t];
            es += c.edge_share[t];
        }
        out.pooled_node_share.push_back(ns / static_cast<double>(out.curves.size()));
        out.pooled_edge_share.push_back(es / static_cast<double>(out.curves.size()));
    }
    return out;
}

namespace {

template <class T>
std::optional<T> parse_optional(const std::string& s, std::size_t line, const std::string& name) {
    auto t = trim(s);
    if (t.empty()) return std::nullopt;
    T v{};
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size())
        throw ValidationError("stats line " + std::to_string(line) + ": bad " + name + " '" + s + "'");
    return v;
}

}  // namespace

std::vector<TrendSeries> series_from_stats_csv(std::string_view csv) {
    auto lines = split_lines(csv);
    std::size_t first = 0;
    while (first < lines.size() && trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw ValidationError("stats file is empty");
    std::map<std::string, std::size_t> col;
    auto header = split_csv_line(lines[first]);
    for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
    for (const char* required : {"specialty", "year", "nodes", "edges"})
        if (!col.count(required)) throw ValidationError(std::string("stats header lacks column '") + required + "'");

    std::vector<TrendSeries> out;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto cells = split_csv_line(lines[i]);
        auto get = [&](const std::string& name) -> std::string {
            auto it = col.find(name);
            return it == col.end() || it->second >= cells.size() ? std::string() : cells[it->second];
        };
        auto required_int = [&](const std::string& name) {
            auto v = parse_optional<std::int64_t>(get(name), i + 1, name);
            if (!v) throw ValidationError("stats line " + std::to_string(i + 1) + ": missing " + name);
            return *v;
        };
        TrendPoint p;
        p.year = static_cast<int>(required_int("year"));
        p.nodes = required_int("nodes");
        p.edges = required_int("edges");
        p.diameter = parse_optional<std::int64_t>(get("diameter"), i + 1, "diameter");
        p.avg_degree = parse_optional<double>(get("avg_degree"), i + 1, "avg_degree");
        p.density = parse_optional<double>(get("density"), i + 1, "density");
        p.betweenness_centralization =
            parse_optional<double>(get("betweenness_centralization"), i + 1, "betweenness_centralization");
        p.transitivity = parse_optional<double>(get("transitivity"), i + 1, "transitivity");

        const std::string specialty = trim(get("specialty"));
        auto [it, inserted] = index.emplace(specialty, out.size());
        if (inserted) out.push_back({specialty, {}});
        out[it->second].points.push_back(p);
    }
    for (auto& s : out) {
        std::stable_sort(s.points.begin(), s.points.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
        s.validate();
    }
    return out;
}

std::string trends_csv(std::span<const TrendSeries> series) {
    auto conv = convergence(series);
    std::string out =
        "specialty,year,nodes,edges,node_share,edge_share,pooled_node_share,pooled_edge_share,diameter,avg_degree,"
        "density,monotone\n";
    auto opt_int = [](const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string(); };
    auto opt_real = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& c = conv.curves[s];
        for (std::size_t t = 0; t < series[s].points.size(); ++t) {
            const auto& p = series[s].points[t];
            out += csv_field(series[s].specialty) + "," + std::to_string(p.year) + "," + std::to_string(p.nodes) + "," +
                   std::to_string(p.edges) + "," + format_real(c.node_share[t]) + "," + format_real(c.edge_share[t]) +
                   "," + format_real(conv.pooled_node_share[t]) + "," + format_real(conv.pooled_edge_share[t]) + "," +
                   opt_int(p.diameter) + "," + opt_real(p.avg_degree) + "," + opt_real(p.density) + "," +
                   (c.monotone ? "true" : "false") + "\n";
        }
    }
    return out;
}

std::string render_table2(std::span<const TrendSeries> series) {
    if (series.empty()) return {};
    std::vector<int> years;
    for (const auto& p : series.front().points) years.push_back(p.year);
    for (const auto& s : series) {
        std::vector<int> ys;
        for (const auto& p : s.points) ys.push_back(p.year);
        if (ys != years) throw ValidationError("series '" + s.specialty + "' has a different year grid");
    }
    std::string out = "Field\tNet Measure";
    for (int y : years) out += "\t" + std::to_string(y);
    out += "\tChange between " + std::to_string(years.front()) + " and " + std::to_string(years.back()) + "\n";
    for (const auto& s : series) {
        auto g = growth(s);
        out += s.specialty + "\tNodes";
        for (const auto& p : s.points) out += "\t" + std::to_string(p.nodes);
        out += "\t" + std::to_string(g.node_change) + "\n";
        out += "\tEdges";
        for (const auto& p : s.points) out += "\t" + std::to_string(p.edges);
        out += "\t" + std::to_string(g.edge_growth_pct_rounded) + "%\n";
        bool have_diameter = true;
        for (const auto& p : s.points) have_diameter = have_diameter && p.diameter.has_value();
        if (have_diameter) {
            out += "\tDiameter";
            for (const auto& p : s.points) out += "\t" + std::to_string(*p.diameter);
            const auto trend = *g.diameter_trend;
            out += std::string("\t") +
                   (trend == Trend::Decrease ? "Decrease" : trend == Trend::Increase ? "Increase" : "no change") + "\n";
        }
    }
    return out;
}

}  // namespace collabnet
