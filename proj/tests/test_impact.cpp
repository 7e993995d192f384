#include <doctest.h>

#include <cmath>
#include <map>

#include "collabnet/error.hpp"
#include "collabnet/impact.hpp"
#include "collabnet/syngen.hpp"

using namespace collabnet;

namespace {

PublicationRecord rec(std::string id, std::vector<std::string> countries, std::int64_t citations, int year = 2013,
                      std::string field = "Biology", std::string doctype = "article") {
    PublicationRecord r;
    r.id = std::move(id);
    r.year = year;
    r.specialty = "Virology";
    r.field = std::move(field);
    r.doctype = std::move(doctype);
    r.countries = std::move(countries);
    r.citations = citations;
    return r;
}

}  // namespace

TEST_CASE("baselines") {
    std::vector<PublicationRecord> r{rec("1", {"US"}, 2), rec("2", {"US"}, 4), rec("3", {"US"}, 0, 2013, "Math"),
                                     rec("4", {"US"}, 0, 2013, "Math")};
    auto b = compute_baselines(r);
    auto* bio = b.find({"Biology", 2013, "article"});
    REQUIRE(bio);
    CHECK(bio->mean_citations == 3.0);
    CHECK(bio->usable);
    auto* math = b.find({"Math", 2013, "article"});
    REQUIRE(math);
    CHECK_FALSE(math->usable);
    CHECK_FALSE(try_fwci(r[2], b).has_value());
    CHECK_THROWS_AS(fwci(r[2], b), ValidationError);
    CHECK_THROWS_AS(compute_baselines(std::vector<PublicationRecord>{}), ValidationError);
}

TEST_CASE("fwci values") {
    BaselineTable b;
    b.insert({{"Biology", 2013, "article"}, 2.0, 10, true});
    CHECK(fwci(rec("1", {"US"}, 2), b) == 1.0);
    CHECK(fwci(rec("2", {"US"}, 0), b) == 0.0);
    b.insert({{"Physics", 2013, "article"}, 1.0, 10, true});
    CHECK(fwci(rec("3", {"US"}, 17, 2013, "Physics"), b) == 17.0);
    BaselineTable c;
    c.insert({{"Physics", 2013, "article"}, 100.0, 10, true});
    CHECK(fwci(rec("4", {"US"}, 1718, 2013, "Physics"), c) == doctest::Approx(17.18));
}

TEST_CASE("two-record aggregate") {
    std::vector<PublicationRecord> r{rec("1", {"CN", "US"}, 1), rec("2", {"CN", "US"}, 3), rec("3", {"US"}, 2)};
    auto b = compute_baselines(r);  // mean 2
    auto set = build_observations(r, b);
    REQUIRE(set.observations.size() == 1);
    const auto& o = set.observations[0];
    CHECK(o.publication_count == 2);
    CHECK(o.country_count == 2);
    CHECK(o.mean_fwci == 1.0);
    CHECK(o.log_fwci == std::log(1.1));
    CHECK(o.combo_id() == "CN-US");

    std::vector<PublicationRecord> r2{rec("1", {"CN", "US"}, 1), rec("2", {"CN", "US"}, 3), rec("3", {"US"}, 0),
                                      rec("4", {"US"}, 0)};
    BaselineTable one;
    one.insert({{"Biology", 2013, "article"}, 1.0, 4, true});
    auto s2 = build_observations(r2, one);
    CHECK(s2.observations[0].mean_fwci == 2.0);
    CHECK(s2.observations[0].log_fwci == std::log(2.1));
}

TEST_CASE("canonical combo id") {
    std::vector<PublicationRecord> r{rec("1", {"CN", "DE", "US"}, 1)};
    auto set = build_observations(r, compute_baselines(r));
    CHECK(set.observations[0].combo_id() == "CN-DE-US");
    CHECK(set.observations[0].country_count == 3);
}

TEST_CASE("generated corpus: cell means, group-by oracle, CSV round trip") {
    auto gen = generate(default_gen_config());
    auto b = compute_baselines(gen.records);

    // Independent group-by over the ground-truth log.
    std::map<CellKey, std::pair<double, std::size_t>> cells;
    for (std::size_t i = 0; i < gen.truth.size(); ++i) {
        auto& c = cells[{gen.records[i].field, gen.truth[i].year, gen.truth[i].doctype}];
        c.first += static_cast<double>(gen.truth[i].citations);
        ++c.second;
    }
    REQUIRE(cells.size() == b.cells().size());
    for (const auto& [key, c] : cells)
        CHECK(b.find(key)->mean_citations == doctest::Approx(c.first / static_cast<double>(c.second)).epsilon(1e-14));

    std::map<CellKey, std::pair<double, std::size_t>> fw;
    for (const auto& r : gen.records) {
        auto& c = fw[cell_of(r)];
        c.first += fwci(r, b);
        ++c.second;
    }
    for (const auto& [key, c] : fw) CHECK(std::abs(c.first / static_cast<double>(c.second) - 1.0) <= 1e-12);

    auto set = build_observations(gen.records, b);
    std::map<std::pair<std::string, int>, std::size_t> groups;
    std::size_t multi = 0;
    for (const auto& t : gen.truth) {
        if (t.countries.size() < 2) continue;
        ++multi;
        auto sorted = t.countries;
        std::sort(sorted.begin(), sorted.end());
        std::string id;
        for (const auto& c : sorted) id += (id.empty() ? "" : "-") + c;
        ++groups[{id, t.year}];
    }
    REQUIRE(set.observations.size() == groups.size());
    std::size_t total = 0;
    for (const auto& o : set.observations) {
        CHECK(o.publication_count == groups.at({o.combo_id(), o.year}));
        CHECK(o.log_fwci == std::log(o.mean_fwci + kLogFwciOffset));
        total += o.publication_count;
    }
    CHECK(total == multi);

    auto back = observations_from_csv(observations_to_csv(set.observations));
    REQUIRE(back.size() == set.observations.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].combo == set.observations[i].combo);
        CHECK(back[i].mean_fwci == set.observations[i].mean_fwci);
        CHECK(back[i].log_fwci == set.observations[i].log_fwci);
    }
    CHECK(observations_to_csv({}).rfind("combo_id,year,country_count,publication_count,mean_fwci,log_fwci\n", 0) == 0);
}

TEST_CASE("permuting a record's country list changes nothing downstream") {
    std::vector<PublicationRecord> a{rec("1", {"CN", "DE", "US"}, 3), rec("2", {"US"}, 1)};
    auto b = a;
    std::reverse(b[0].countries.begin(), b[0].countries.end());
    auto oa = build_observations(a, compute_baselines(a));
    auto ob = build_observations(b, compute_baselines(b));
    CHECK(oa.observations[0].combo_id() == ob.observations[0].combo_id());
    CHECK(oa.observations[0].mean_fwci == ob.observations[0].mean_fwci);
}
