#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace collabnet {

/// One snapshot's figures as they enter the trend tables. Only node and edge
/// counts are required; the rest are carried when the stats file has them.
struct TrendPoint {
    int year = 0;
    std::int64_t nodes = 0;
    std::int64_t edges = 0;
    std::optional<std::int64_t> diameter;
    std::optional<double> avg_degree;
    std::optional<double> density;
    std::optional<double> betweenness_centralization;
    std::optional<double> transitivity;
};

struct TrendSeries {
    std::string specialty;
    std::vector<TrendPoint> points;  // strictly increasing years

    /// Throws ValidationError unless years strictly increase and counts are >= 0.
    void validate() const;
};

enum class Trend { Decrease, NoChange, Increase };
std::string_view to_string(Trend t);

/// Half-up rounding to an integer, as printed in the change tables.
std::int64_t round_half_up(double x);

struct Growth {
    std::int64_t node_change = 0;
    double edge_growth_pct = 0.0;
    std::int64_t edge_growth_pct_rounded = 0;
    /// First vs last year; absent when either diameter is unknown.
    std::optional<Trend> diameter_trend;
};

/// Needs two or more years and a non-zero first-year edge count.
Growth growth(const TrendSeries& series);

struct ConvergenceCurve {
    std::string specialty;
    std::vector<int> years;
    std::vector<double> node_share;  // nodes_t / nodes_final
    std::vector<double> edge_share;  // edges_t / edges_final
    /// False when some node_share decreases from one year to the next.
    bool monotone = true;
};

struct Convergence {
    std::vector<ConvergenceCurve> curves;
    std::vector<int> years;
    std::vector<double> pooled_node_share;  // mean across curves per year
    std::vector<double> pooled_edge_share;
};

/// All series must share one year grid.
Convergence convergence(std::span<const TrendSeries> series);

/// Groups stats rows (header with at least specialty,year,nodes,edges) into
/// series in first-appearance order.
std::vector<TrendSeries> series_from_stats_csv(std::string_view csv);

/// `specialty,year,nodes,edges,node_share,edge_share,pooled_node_share,pooled_edge_share,diameter,avg_degree,density,monotone`
std::string trends_csv(std::span<const TrendSeries> series);

/// Nodes/Edges/Diameter rows per specialty with the first-to-last change column.
std::string render_table2(std::span<const TrendSeries> series);

}  // namespace collabnet
