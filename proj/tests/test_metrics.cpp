#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "collabnet/error.hpp"
#include "collabnet/graph.hpp"
#include "collabnet/metrics.hpp"
#include "collabnet/simd/kernels.hpp"
#include "oracles.hpp"

using namespace collabnet;

namespace {

Graph complete(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return Graph(n, e);
}

Graph path(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return Graph(n, e);
}

Graph star(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t v = 1; v < n; ++v) e.emplace_back(0, v);
    return Graph(n, e);
}

Graph cycle(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
    return Graph(n, e);
}

Graph shaped(std::size_t n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return Graph(n, oracle::random_graph_exact(rng, n, m));
}

}  // namespace

TEST_CASE("graph construction") {
    std::vector<Edge> e{{0, 1}, {1, 0}, {2, 1}};
    Graph g(4, e);
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(1, 2));
    CHECK_FALSE(g.has_edge(0, 3));
    CHECK(g.degree(3) == 0);
    std::vector<Edge> loop{{1, 1}};
    CHECK_THROWS_AS(Graph(3, loop), ValidationError);
    std::vector<Edge> out_of_range{{0, 5}};
    CHECK_THROWS_AS(Graph(3, out_of_range), ValidationError);
}

TEST_CASE("degree_stats") {
    auto k4 = degree_stats(complete(4));
    CHECK(k4.avg_degree == 3.0);
    CHECK(k4.density == 1.0);

    auto astro = degree_stats(shaped(87, 1251, 1));
    CHECK(std::abs(astro.avg_degree - 28.76) <= 0.005);
    CHECK(std::abs(astro.density - 0.33) <= 0.005);

    auto seis = degree_stats(shaped(101, 619, 2));
    CHECK(std::abs(seis.avg_degree - 12.26) <= 0.005);
    CHECK(std::abs(seis.density - 0.12) <= 0.005);

    CHECK_THROWS_WITH_AS(degree_stats(Graph(1, {})), doctest::Contains("degenerate network"), ValidationError);
}

TEST_CASE("arcs mode doubles the edge count only") {
    auto g = shaped(30, 70, 3);
    auto e = degree_stats(g, CountMode::Edges);
    auto a = degree_stats(g, CountMode::Arcs);
    CHECK(a.n_edges == 2 * e.n_edges);
    CHECK(a.degrees == e.degrees);
}

TEST_CASE("handshake identity on random graphs") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = 2 + rng() % 40;
        Graph g(n, oracle::random_graph(rng, n, 0.2, false));
        auto s = degree_stats(g);
        CHECK(std::accumulate(s.degrees.begin(), s.degrees.end(), std::size_t{0}) == 2 * s.n_edges);
        CHECK(s.avg_degree == 2.0 * s.n_edges / n);
        CHECK(s.density == 2.0 * s.n_edges / (static_cast<double>(n) * (n - 1)));
    }
}

TEST_CASE("diameter") {
    CHECK(diameter(path(4)).diameter == 3);
    for (std::size_t n = 2; n < 9; ++n) {
        CHECK(diameter(complete(n)).diameter == 1);
        CHECK(diameter(path(n)).diameter == n - 1);
    }
    CHECK_THROWS_WITH_AS(diameter(Graph(3, {})), doctest::Contains("no paths"), ValidationError);

    // Largest component wins; ties go to the smallest root.
    std::vector<Edge> two{{0, 1}, {2, 3}, {3, 4}, {4, 5}, {6, 7}, {7, 8}, {8, 9}};
    auto d = diameter(Graph(10, two));
    CHECK(d.component_root == 2);
    CHECK(d.component_size == 4);
    CHECK(d.diameter == 3);
    CHECK(d.n_components == 3);

    std::mt19937_64 rng(5);
    auto e = oracle::random_graph(rng, 50, 0.06, true);
    CHECK(diameter(Graph(50, e)).diameter == static_cast<std::size_t>(oracle::diameter(oracle::adjacency(50, e))));
}

TEST_CASE("adding an edge never increases the diameter") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 40; ++i) {
        const std::size_t n = 5 + rng() % 25;
        auto e = oracle::random_graph(rng, n, 0.1, true);
        const auto before = diameter(Graph(n, e)).diameter;
        std::size_t u = rng() % n, v = rng() % n;
        if (u == v) continue;
        e.emplace_back(std::min(u, v), std::max(u, v));
        CHECK(diameter(Graph(n, e)).diameter <= before);
    }
}

TEST_CASE("betweenness centralization") {
    CHECK(betweenness_centralization(star(7)) == 1.0);
    
    CHECK(std::abs(betweenness_centralization(cycle(6))) < 1e-15);
    CHECK(std::abs(betweenness_centralization(complete(5))) < 1e-15);
    CHECK_THROWS_AS(betweenness_centralization(path(2)), ValidationError);

    auto b = betweenness(path(4));
    CHECK(b == std::vector<double>{0.0, 2.0, 2.0, 0.0});
}

TEST_CASE("betweenness matches path enumeration and is thread-count independent") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 60; ++i) {
        const std::size_t n = 3 + rng() % 6;
        auto e = oracle::random_graph(rng, n, 0.4, true);
        auto got = betweenness(Graph(n, e));
        auto want = oracle::betweenness(oracle::adjacency(n, e));
        for (std::size_t v = 0; v < n; ++v) CHECK(std::abs(got[v] - want[v]) < 1e-9);
    }
    auto big = shaped(120, 700, 8);
    const auto one = betweenness(big, 1);
    for (unsigned t : {2u, 3u, 8u}) CHECK(betweenness(big, t) == one);
}

TEST_CASE("clustering") {
    auto k3 = clustering(complete(3));
    CHECK(k3.transitivity == 1.0);
    CHECK(k3.avg_local_clustering == 1.0);
    CHECK(clustering(star(5)).transitivity == 0.0);

    std::vector<Edge> pendant{{0, 1}, {1, 2}, {0, 2}, {2, 3}};
    auto c = clustering(Graph(4, pendant));
    CHECK(c.triangles == 1);
    CHECK(c.connected_triples == 5);
    CHECK(c.transitivity == doctest::Approx(0.6));
    // locals: 1, 1, 1/3, 0
    CHECK(c.avg_local_clustering == doctest::Approx((1.0 + 1.0 + 1.0 / 3.0) / 4.0));
}

TEST_CASE("transitivity is invariant under relabeling") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 5 + rng() % 30;
        Graph g(n, oracle::random_graph(rng, n, 0.3, false));
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto a = clustering(g), b = clustering(g.permuted(perm));
        CHECK(a.triangles == b.triangles);
        CHECK(a.transitivity == b.transitivity);
    }
}

TEST_CASE("triangle counts agree across kernel variants and the merge path") {
    auto g = shaped(200, 3000, 10);
    const auto isa = simd::active_isa();
    simd::set_active_isa(simd::Isa::Scalar);
    auto scalar = clustering(g);
    if (simd::isa_available(simd::Isa::Avx2)) {
        simd::set_active_isa(simd::Isa::Avx2);
        auto vec = clustering(g);
        CHECK(vec.triangles == scalar.triangles);
        CHECK(vec.avg_local_clustering == scalar.avg_local_clustering);
    }
    simd::set_active_isa(isa);
    auto t = oracle::triples(oracle::adjacency(200, g.edges()));
    CHECK(3 * scalar.triangles == t.closed);
    CHECK(scalar.connected_triples == t.connected);
}

TEST_CASE("power-law fit") {
    std::mt19937_64 rng(13);
    auto samples = oracle::zeta_samples(rng, 2.5, 100000);
    auto f = powerlaw_fit(samples);
    CHECK(f.alpha >= 2.45);
    CHECK(f.alpha <= 2.55);
    // The MLE maximizes the log-likelihood.
    CHECK(f.log_likelihood >= powerlaw_log_likelihood(samples, f.alpha - 0.01));
    CHECK(f.log_likelihood >= powerlaw_log_likelihood(samples, f.alpha + 0.01));

    std::vector<std::size_t> flat(100, 4);
    CHECK_THROWS_WITH_AS(powerlaw_fit(flat), doctest::Contains("no power-law support"), ValidationError);
}

TEST_CASE("power-law fit on a preferential-attachment network") {
    // Linear preferential attachment with m = 3 links per new node.
    std::mt19937_64 rng(14);
    const std::size_t n = 100000, m = 3;
    std::vector<std::size_t> targets;  // one entry per edge endpoint
    std::vector<std::size_t> degree(n, 0);
    for (std::size_t u = 0; u <= m; ++u)
        for (std::size_t v = u + 1; v <= m; ++v) {
            targets.push_back(u);
            targets.push_back(v);
            ++degree[u];
            ++degree[v];
        }
    for (std::size_t v = m + 1; v < n; ++v) {
        std::vector<std::size_t> chosen;
        while (chosen.size() < m) {
            auto t = targets[rng() % targets.size()];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        }
        for (auto t : chosen) {
            targets.push_back(t);
            targets.push_back(v);
            ++degree[t];
            ++degree[v];
        }
    }
    auto f = powerlaw_fit(degree, m);
    CHECK(f.alpha >= 2.5);
    CHECK(f.alpha <= 3.5);
}

TEST_CASE("compute_stats is deterministic across thread counts") {
    auto g = shaped(150, 900, 15);
    auto a = compute_stats(g, {CountMode::Edges, 1});
    auto b = compute_stats(g, {CountMode::Edges, 8});
    CHECK(a == b);
    CHECK(a.n_nodes == 150);
    CHECK(a.n_edges == 900);
    CHECK(a.diameter >= 1);
    CHECK(a.density >= 0.0);
    CHECK(a.density <= 1.0);
    CHECK(a.betweenness_centralization >= 0.0);
    CHECK(a.betweenness_centralization <= 1.0);
}

TEST_CASE("stats rows") {
    auto s = compute_stats(complete(4));
    CHECK(stats_csv_header() ==
          "specialty,year,nodes,edges,diameter,avg_degree,density,betweenness_centralization,transitivity,"
          "avg_local_clustering,components,alpha");
    CHECK(stats_csv_row("K4", 2013, s) == "K4,2013,4,6,1,3.0,1.0,0.0,1.0,1.0,1,");
    CHECK(stats_csv_row("K4", 2013, s, 4) == "K4,2013,4,6,1,3.0000,1.0000,0.0000,1.0000,1.0000,1,");
}
