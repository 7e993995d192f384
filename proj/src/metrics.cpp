#include "collabnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <thread>

#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>

#include "collabnet/error.hpp"
#include "collabnet/format.hpp"
#include "collabnet/simd/kernels.hpp"

namespace collabnet {

DegreeStats degree_stats(const Graph& g, CountMode mode) {
    const std::size_t n = g.node_count();
    if (n < 2) throw ValidationError("degenerate network: need at least 2 nodes");
    DegreeStats out;
    out.degrees.resize(n);
    for (std::size_t v = 0; v < n; ++v) out.degrees[v] = g.degree(v);
    out.n_edges = g.edge_count() * (mode == CountMode::Arcs ? 2 : 1);
    const double e = static_cast<double>(out.n_edges);
    const double nn = static_cast<double>(n);
    out.avg_degree = 2.0 * e / nn;
    out.density = 2.0 * e / (nn * (nn - 1.0));
    return out;
}

std::vector<std::size_t> component_labels(const Graph& g) {
    const std::size_t n = g.node_count();
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(n, kUnset);
    std::vector<std::size_t> queue;
    for (std::size_t root = 0; root < n; ++root) {
        if (label[root] != kUnset) continue;
        label[root] = root;
        queue.assign(1, root);
        for (std::size_t head = 0; head < queue.size(); ++head)
            for (auto w : g.neighbors(queue[head]))
                if (label[w] == kUnset) {
                    label[w] = root;
                    queue.push_back(w);
                }
    }
    return label;
}

namespace {

// BFS eccentricity of `source` within its component.
std::size_t eccentricity(const Graph& g, std::size_t source, std::vector<int>& dist, std::vector<std::size_t>& queue) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[source] = 0;
    queue.assign(1, source);
    int far = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        auto v = queue[head];
        for (auto w : g.neighbors(v))
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                far = std::max(far, dist[w]);
                queue.push_back(w);
            }
    }
    return static_cast<std::size_t>(far);
}

}  // namespace

DiameterResult diameter(const Graph& g) {
    if (g.edge_count() == 0) throw ValidationError("no paths: network has no edges");
    const std::size_t n = g.node_count();
    auto labels = component_labels(g);
    std::vector<std::size_t> size(n, 0);
    for (auto l : labels) ++size[l];

    DiameterResult out;
    for (std::size_t r = 0; r < n; ++r) {
        if (size[r] == 0) continue;
        ++out.n_components;
        if (size[r] > out.component_size) {
            out.component_size = size[r];
            out.component_root = r;
        }
    }
    std::vector<int> dist(n);
    std::vector<std::size_t> queue;
    for (std::size_t v = 0; v < n; ++v)
        if (labels[v] == out.component_root) out.diameter = std::max(out.diameter, eccentricity(g, v, dist, queue));
    return out;
}

namespace {

constexpr std::size_t kSourceBlock = 16;

// Adds the Brandes dependencies of every source in [begin, end) into `acc`.
void accumulate_dependencies(const Graph& g, std::size_t begin, std::size_t end, std::vector<double>& acc) {
    const std::size_t n = g.node_count();
    std::vector<int> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t s = begin; s < end; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        dist[s] = 0;
        sigma[s] = 1.0;
        order.assign(1, s);
        for (std::size_t head = 0; head < order.size(); ++head) {
            auto v = order[head];
            for (auto w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    order.push_back(w);
                }
                if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
            }
        }
        for (std::size_t i = order.size(); i-- > 1;) {
            auto w = order[i];
            for (auto v : g.neighbors(w))
                if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            acc[w] += delta[w];
        }
    }
}

}  // namespace

std::vector<double> betweenness(const Graph& g, unsigned threads) {
    const std::size_t n = g.node_count();
    const std::size_t blocks = (n + kSourceBlock - 1) / kSourceBlock;
    std::vector<std::vector<double>> partial(blocks, std::vector<double>(n, 0.0));
    auto run_block = [&](std::size_t b) {
        accumulate_dependencies(g, b * kSourceBlock, std::min(n, (b + 1) * kSourceBlock), partial[b]);
    };
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(blocks, 1));
    if (workers == 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t b = t; b < blocks; b += workers) run_block(b);
            });
    }
    std::vector<double> total(n, 0.0);
    for (const auto& p : partial)
        for (std::size_t v = 0; v < n; ++v) total[v] += p[v];
    // every unordered pair was seen from both endpoints
    for (auto& b : total) b *= 0.5;
    return total;
}

double betweenness_centralization(std::span<const double> b) {
    const std::size_t n = b.size();
    if (n < 3) throw ValidationError("betweenness centralization needs at least 3 nodes");
    const double b_max = *std::max_element(b.begin(), b.end());
    double spread = 0.0;
    for (double x : b) spread += b_max - x;
    const double nn = static_cast<double>(n);
    return spread / ((nn - 1.0) * (nn - 1.0) * (nn - 2.0) / 2.0);
}

double betweenness_centralization(const Graph& g, unsigned threads) {
    if (g.node_count() < 3) throw ValidationError("betweenness centralization needs at least 3 nodes");
    auto b = betweenness(g, threads);
    return betweenness_centralization(b);
}

namespace {

// Bitset rows cost n^2/8 bytes; above this size intersections use sorted merges.
constexpr std::size_t kBitsetLimit = 1u << 14;

std::uint64_t merge_intersection(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    std::uint64_t count = 0;
    auto i = a.begin(), j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

}  // namespace

ClusteringResult clustering(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n < 3) throw ValidationError("clustering needs at least 3 nodes");

    std::vector<std::uint64_t> node_tri2(n, 0);  // twice the triangles at each node
    std::uint64_t tri3 = 0;                      // three times the triangle count

    if (n <= kBitsetLimit) {
        const std::size_t words = (n + 63) / 64;
        std::vector<std::uint64_t> rows(n * words, 0);
        for (std::size_t v = 0; v < n; ++v)
            for (auto w : g.neighbors(v)) rows[v * words + w / 64] |= std::uint64_t{1} << (w % 64);
        auto row = [&](std::size_t v) { return std::span<const std::uint64_t>(rows.data() + v * words, words); };
        for (std::size_t u = 0; u < n; ++u)
            for (auto v : g.neighbors(u)) {
                if (v <= u) continue;
                auto c = simd::and_popcount(row(u), row(v));
                node_tri2[u] += c;
                node_tri2[v] += c;
                tri3 += c;
            }
    } else {
        for (std::size_t u = 0; u < n; ++u)
            for (auto v : g.neighbors(u)) {
                if (v <= u) continue;
                auto c = merge_intersection(g.neighbors(u), g.neighbors(v));
                node_tri2[u] += c;
                node_tri2[v] += c;
                tri3 += c;
            }
    }

    ClusteringResult out;
    out.triangles = tri3 / 3;
    double local_sum = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        const std::uint64_t k = g.degree(v);
        const std::uint64_t pairs = k * (k - (k > 0 ? 1 : 0)) / 2;
        out.connected_triples += pairs;
        if (k >= 2) local_sum += static_cast<double>(node_tri2[v] / 2) / static_cast<double>(pairs);
    }
    out.transitivity = out.connected_triples == 0
                           ? 0.0
                           : static_cast<double>(3 * out.triangles) / static_cast<double>(out.connected_triples);
    out.avg_local_clustering = local_sum / static_cast<double>(n);
    return out;
}

namespace {

double log_hurwitz_zeta(double alpha, std::size_t k_min) {
    double z = std::riemann_zeta(alpha);
    for (std::size_t k = 1; k < k_min; ++k) z -= std::pow(static_cast<double>(k), -alpha);
    return std::log(z);
}

}  // namespace

double powerlaw_log_likelihood(std::span<const std::size_t> values, double alpha, std::size_t k_min) {
    double sum_log = 0.0;
    for (auto k : values) sum_log += std::log(static_cast<double>(k));
    return -alpha * sum_log - static_cast<double>(values.size()) * log_hurwitz_zeta(alpha, k_min);
}

PowerLawFit powerlaw_fit(std::span<const std::size_t> values, std::size_t k_min) {
    if (k_min < 1) throw ValidationError("k_min must be at least 1");
    std::vector<std::size_t> kept;
    std::set<std::size_t> distinct;
    for (auto k : values)
        if (k >= k_min) {
            kept.push_back(k);
            distinct.insert(k);
        }
    if (distinct.size() < 10)
        throw ValidationError("no power-law support: need at least 10 distinct values >= k_min, got " +
                              std::to_string(distinct.size()));

    double sum_log = 0.0;
    for (auto k : kept) sum_log += std::log(static_cast<double>(k));
    const double n = static_cast<double>(kept.size());
    // -loglik is convex in alpha
    auto objective = [&](double a) { return a * sum_log + n * log_hurwitz_zeta(a, k_min); };
    auto [alpha, neg_ll] = boost::math::tools::brent_find_minima(objective, 1.0 + 1e-9, 20.0, 40);

    PowerLawFit fit;
    fit.alpha = alpha;
    fit.log_likelihood = -neg_ll;
    fit.n = kept.size();
    fit.k_min = k_min;
    return fit;
}

NetworkStats compute_stats(const Graph& g, const StatsOptions& opts) {
    if (g.node_count() < 3) throw ValidationError("degenerate network: statistics need at least 3 nodes");
    NetworkStats s;
    auto deg = degree_stats(g, opts.count_mode);
    s.n_nodes = g.node_count();
    s.n_edges = deg.n_edges;
    s.avg_degree = deg.avg_degree;
    s.density = deg.density;
    auto dia = diameter(g);
    s.diameter = dia.diameter;
    s.diameter_component_size = dia.component_size;
    s.n_components = dia.n_components;
    s.betweenness_centralization = betweenness_centralization(g, opts.threads);
    auto cl = clustering(g);
    s.transitivity = cl.transitivity;
    s.avg_local_clustering = cl.avg_local_clustering;

    std::set<std::size_t> distinct;
    for (auto k : deg.degrees)
        if (k > 0) distinct.insert(k);
    if (distinct.size() >= 10) s.powerlaw_alpha = powerlaw_fit(deg.degrees).alpha;
    return s;
}

std::string stats_csv_header() {
    return "specialty,year,nodes,edges,diameter,avg_degree,density,betweenness_centralization,transitivity,"
           "avg_local_clustering,components,alpha";
}

std::string stats_csv_row(const std::string& specialty, int year, const NetworkStats& s, int fixed_decimals) {
    auto real = [&](double x) { return fixed_decimals < 0 ? format_real(x) : format_fixed(x, fixed_decimals); };
    std::string row = csv_field(specialty) + "," + std::to_string(year) + "," + std::to_string(s.n_nodes) + "," +
                      std::to_string(s.n_edges) + "," + std::to_string(s.diameter) + "," + real(s.avg_degree) + "," +
                      real(s.density) + "," + real(s.betweenness_centralization) + "," + real(s.transitivity) + "," +
                      real(s.avg_local_clustering) + "," + std::to_string(s.n_components) + ",";
    if (s.powerlaw_alpha) row += real(*s.powerlaw_alpha);
    return row;
}

std::string stats_json(const std::string& specialty, int year, const NetworkStats& s) {
    nlohmann::ordered_json j;
    j["specialty"] = specialty;
    j["year"] = year;
    j["nodes"] = s.n_nodes;
    j["edges"] = s.n_edges;
    j["diameter"] = s.diameter;
    j["diameter_component_size"] = s.diameter_component_size;
    j["avg_degree"] = s.avg_degree;
    j["density"] = s.density;
    j["betweenness_centralization"] = s.betweenness_centralization;
    j["transitivity"] = s.transitivity;
    j["avg_local_clustering"] = s.avg_local_clustering;
    j["avg_local_clustering_convention"] = "nodes with degree < 2 contribute 0";
    j["components"] = s.n_components;
    j["alpha"] = s.powerlaw_alpha ? nlohmann::ordered_json(*s.powerlaw_alpha) : nlohmann::ordered_json(nullptr);
    return j.dump();
}

}  // namespace collabnet
