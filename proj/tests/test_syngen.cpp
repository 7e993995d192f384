#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "collabnet/corpus.hpp"
#include "collabnet/error.hpp"
#include "collabnet/format.hpp"
#include "collabnet/metrics.hpp"
#include "collabnet/philox.hpp"
#include "collabnet/syngen.hpp"

using namespace collabnet;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using P = Philox4x32;
    CHECK(P::block({0, 0, 0, 0}, {0, 0}) == P::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(P::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          P::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(P::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          P::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    const double u = P::uniform({1, 2, 3, 4}, {5, 6});
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("record count, ingestibility and determinism") {
    auto c = default_gen_config();
    c.n_papers = 3000;
    auto a = generate(c);
    CHECK(a.records.size() == 3000);
    const auto text = a.to_jsonl();
    auto in = ingest(text, SpecialtyMap::bundled());
    CHECK(in.report.rejections.empty());
    CHECK(in.corpus.size() == 3000);
    CHECK(generate(c).to_jsonl() == text);
    CHECK(generate(c).truth_csv() == a.truth_csv());
    c.seed = 43;
    CHECK(generate(c).to_jsonl() != text);
}

TEST_CASE("truth log agrees with records and participation counts") {
    auto c = default_gen_config();
    c.n_papers = 2000;
    auto g = generate(c);
    std::map<std::string, std::int64_t> part;
    for (std::size_t i = 0; i < g.records.size(); ++i) {
        auto drawn = g.truth[i].countries;
        CHECK(std::set<std::string>(drawn.begin(), drawn.end()).size() == drawn.size());
        std::sort(drawn.begin(), drawn.end());
        CHECK(drawn == g.records[i].countries);
        CHECK(g.truth[i].citations == g.records[i].citations);
        for (const auto& cc : drawn) ++part[cc];
    }
    for (std::size_t k = 0; k < g.countries.size(); ++k) CHECK(g.participation[k] == part[g.countries[k]]);
    CHECK(split_lines(g.truth_csv()).size() == 2001);
}

TEST_CASE("uniform attachment gives uniform country frequencies") {
    auto c = default_gen_config();
    c.n_papers = 100000;
    c.n_countries = 50;
    c.attachment_strength = 0.0;
    c.countries_per_paper = {{2, 1.0}};
    auto g = generate(c);
    const double p = 2.0 / 50.0;
    const double mean = 100000 * p;
    const double sd = std::sqrt(100000 * p * (1 - p));
    for (auto k : g.participation) CHECK(std::abs(static_cast<double>(k) - mean) <= 3.5 * sd);
}

namespace {

// Straight re-implementation of the attachment rule over the same Philox
// stream addresses; shares nothing with generate() beyond the RNG.
std::vector<std::int64_t> replica_participation(const GenConfig& c) {
    const Philox4x32::Key key{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32)};
    std::vector<std::int64_t> part(c.n_countries, 0);
    std::vector<int> sizes;
    std::vector<double> cum;
    double acc = 0.0;
    for (auto [k, p] : c.countries_per_paper) {
        sizes.push_back(k);
        acc += p;
        cum.push_back(acc);
    }
    for (std::uint32_t i = 0; i < c.n_papers; ++i) {
        const double us = Philox4x32::uniform({i, 2, 0, 0}, key);
        std::size_t si = 0;
        while (si + 1 < cum.size() && us >= cum[si]) ++si;
        std::vector<double> w(c.n_countries);
        for (std::size_t k = 0; k < c.n_countries; ++k)
            w[k] = std::pow(static_cast<double>(part[k]) + 1.0, c.attachment_strength);
        std::vector<std::size_t> picked;
        for (int j = 0; j < sizes[si]; ++j) {
            double total = 0.0;
            for (std::size_t k = 0; k < c.n_countries; ++k) total += w[k];
            double t = Philox4x32::uniform({i, 4u + static_cast<std::uint32_t>(j), 0, 0}, key) * total;
            std::size_t k = 0;
            while (true) {
                if (w[k] > 0.0 && t < w[k]) break;
                t -= w[k];
                if (k + 1 == c.n_countries) break;
                ++k;
            }
            while (w[k] == 0.0) --k;
            picked.push_back(k);
            w[k] = 0.0;
        }
        for (auto k : picked) ++part[k];
    }
    return part;
}

}  // namespace

TEST_CASE("attachment matches a direct simulation replica and is heavy-tailed") {
    auto c = default_gen_config();
    c.n_papers = 100000;
    c.attachment_strength = 1.0;
    auto g = generate(c);
    CHECK(g.participation == replica_participation(c));

    std::vector<std::size_t> counts;
    for (auto k : g.participation)
        if (k > 0) counts.push_back(static_cast<std::size_t>(k));
    const auto fit = powerlaw_fit(counts);
    const auto [mn, mx] = std::minmax_element(counts.begin(), counts.end());
    MESSAGE("participation alpha at k_min=1: " << fit.alpha << ", min " << *mn << ", max " << *mx);
    CHECK(fit.alpha > 1.0);
    CHECK(static_cast<double>(*mx) / static_cast<double>(*mn) > 10.0);
}

TEST_CASE("raising attachment strength does not lower the maximum participation") {
    int not_lower = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        auto c = default_gen_config();
        c.seed = 1000 + s;
        c.n_papers = 2000;
        c.attachment_strength = 0.0;
        const auto lo = generate(c).participation;
        c.attachment_strength = 1.0;
        const auto hi = generate(c).participation;
        not_lower += *std::max_element(hi.begin(), hi.end()) >= *std::max_element(lo.begin(), lo.end());
    }
    CHECK(not_lower >= 19);
}

TEST_CASE("negative binomial quantiles") {
    CHECK(negative_binomial_quantile(0.0, 5.0, 2.0) == 0);
    // Mean of the inverted distribution over a fine uniform grid.
    double sum = 0.0;
    const int steps = 200000;
    for (int i = 0; i < steps; ++i) sum += static_cast<double>(negative_binomial_quantile((i + 0.5) / steps, 6.0, 2.0));
    CHECK(sum / steps == doctest::Approx(6.0).epsilon(1e-3));
    CHECK(negative_binomial_quantile(0.999999, 6.0, 2.0) > negative_binomial_quantile(0.5, 6.0, 2.0));
}

TEST_CASE("config validation") {
    auto c = default_gen_config();
    c.n_countries = 3;
    c.countries_per_paper = {{4, 1.0}};
    CHECK_THROWS_WITH_AS(generate(c), doctest::Contains("exceeds n_countries"), ValidationError);
    c = default_gen_config();
    c.countries_per_paper = {{1, 0.5}, {2, 0.4}};
    CHECK_THROWS_AS(generate(c), ValidationError);
    c = default_gen_config();
    c.n_countries = 1;
    CHECK_THROWS_AS(generate(c), ValidationError);
    c = default_gen_config();
    c.n_papers = 0;
    CHECK_THROWS_AS(generate(c), ValidationError);
    c = default_gen_config();
    c.attachment_strength = -1.0;
    CHECK_THROWS_AS(generate(c), ValidationError);
}
