#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "collabnet/format.hpp"
#include "collabnet/manifest.hpp"

namespace fs = std::filesystem;
using collabnet::read_file;
using collabnet::split_csv_line;
using collabnet::split_lines;
using collabnet::write_file;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = collabnet::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("collabnet-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit 1 with usage text") {
    auto r = cli({"stats", "--bogus"});
    CHECK(r.code == 1);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    auto h = cli({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("regress") != std::string::npos);
    TempDir d;
    CHECK(cli({"build", "--input", d / "x.jsonl", "--year", "2013", "--format", "svg", "--out", d / "o"}).code == 1);
}

TEST_CASE("validation errors exit 1") {
    TempDir d;
    auto r = cli({"stats", "--input", d / "missing.csv", "--out", d / "s.csv"});
    CHECK(r.code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
    write_file(d / "bad.jsonl", "{\"id\": 1}\n");
    CHECK(cli({"build", "--input", d / "bad.jsonl", "--year", "2013", "--out", d / "o.csv"}).code == 1);
}

TEST_CASE("stats on K4 reports density 1") {
    TempDir d;
    write_file(d / "k4.csv", "source,target,copub_count,cosine\nA,B,1,1.0\nA,C,1,1.0\nA,D,1,1.0\nB,C,1,1.0\nB,D,1,1.0\nC,D,1,1.0\n");
    auto r = cli({"stats", "--input", d / "k4.csv", "--specialty", "K4", "--year", "2013", "--out", d / "s.csv"});
    REQUIRE(r.code == 0);
    auto lines = split_lines(read_file(d / "s.csv"));
    REQUIRE(lines.size() == 2);
    auto cells = split_csv_line(lines[1]);
    CHECK(cells[6] == "1.0");
    CHECK(fs::exists(d / "s.csv.manifest.json"));
}

TEST_CASE("pipeline smoke path with manifests and reruns") {
    TempDir d;
    REQUIRE(cli({"gen", "--seed", "42", "--papers", "4000", "--out", d / "records.jsonl"}).code == 0);
    CHECK(fs::exists(d / "records.truth.csv"));
    const auto input_digest = collabnet::sha256_hex(read_file(d / "records.jsonl"));
    REQUIRE(cli({"ingest", "--input", d / "records.jsonl", "--out", d / "corpus.jsonl"}).code == 0);
    CHECK(read_file(d / "corpus.rejections.csv") == "id,reason\n");
    REQUIRE(cli({"build", "--input", d / "corpus.jsonl", "--specialty", "Virology", "--year", "2013", "--out",
                 d / "virology.csv"})
                .code == 0);
    REQUIRE(cli({"stats", "--input", d / "virology.csv", "--specialty", "Virology", "--year", "2013", "--out",
                 d / "stats.csv"})
                .code == 0);
    auto lines = split_lines(read_file(d / "stats.csv"));
    REQUIRE(lines.size() == 2);
    auto c = split_csv_line(lines[1]);
    const double nodes = std::stod(c[2]), edges = std::stod(c[3]), avg = std::stod(c[5]);
    CHECK(avg * nodes == doctest::Approx(2.0 * edges));
    CHECK(collabnet::sha256_hex(read_file(d / "records.jsonl")) == input_digest);

    for (const char* f : {"records.jsonl", "records.truth.csv", "corpus.jsonl", "corpus.rejections.csv", "virology.csv",
                          "stats.csv"})
        CHECK(fs::exists(d / (std::string(f) + ".manifest.json")));

    // Delete and rerun: byte-identical outputs and manifests.
    const auto stats = read_file(d / "stats.csv");
    const auto manifest = read_file(d / "stats.csv.manifest.json");
    fs::remove(d / "stats.csv");
    fs::remove(d / "stats.csv.manifest.json");
    REQUIRE(cli({"stats", "--input", d / "virology.csv", "--specialty", "Virology", "--year", "2013", "--out",
                 d / "stats.csv"})
                .code == 0);
    CHECK(read_file(d / "stats.csv") == stats);
    CHECK(read_file(d / "stats.csv.manifest.json") == manifest);

    REQUIRE(cli({"stats", "--input", d / "corpus.jsonl", "--all-years", "--fixed", "--out", d / "grid.csv"}).code == 0);
    CHECK(split_lines(read_file(d / "grid.csv")).size() == 1 + 7 * 2);
    REQUIRE(cli({"stats", "--input", d / "corpus.jsonl", "--year", "2008", "--json", "--out", d / "all.json"}).code == 0);
    CHECK(read_file(d / "all.json").find("\"specialty\":\"All Fields\"") != std::string::npos);

    REQUIRE(cli({"trends", "--input", d / "grid.csv", "--out", d / "trends.csv"}).code == 0);
    CHECK(read_file(d / "trends.csv").rfind("specialty,year,nodes,edges,node_share,edge_share", 0) == 0);

    REQUIRE(cli({"regress", "--input", d / "corpus.jsonl", "--out", d / "report.txt", "--csv", d / "report.csv",
                 "--observations-out", d / "obs.csv"})
                .code == 0);
    CHECK(read_file(d / "report.txt").find("All Fields") != std::string::npos);
    REQUIRE(cli({"regress", "--input", d / "obs.csv", "--out", d / "report2.txt"}).code == 0);
    CHECK(read_file(d / "report2.txt").find("Country Count") != std::string::npos);

    REQUIRE(cli({"export", "--input", d / "virology.csv", "--format", "graphml", "--out", d / "v.graphml"}).code == 0);
    CHECK(read_file(d / "v.graphml").find("<graphml") != std::string::npos);
    REQUIRE(cli({"build", "--input", d / "corpus.jsonl", "--year", "2013", "--format", "dot", "--count-mode", "arcs",
                 "--isolate-policy", "keep", "--out", d / "all.dot"})
                .code == 0);
    CHECK(read_file(d / "all.dot").rfind("graph \"All Fields 2013\"", 0) == 0);
    REQUIRE(cli({"build", "--input", d / "corpus.jsonl", "--year", "2013", "--no-header", "--out", d / "nh.csv"}).code == 0);
    CHECK(read_file(d / "nh.csv").find("source,target") == std::string::npos);
}

TEST_CASE("threads do not change stats output; config hash ignores them") {
    TempDir d;
    REQUIRE(cli({"gen", "--seed", "7", "--papers", "3000", "--out", d / "r.jsonl"}).code == 0);
    REQUIRE(cli({"stats", "--input", d / "r.jsonl", "--all-years", "--threads", "1", "--out", d / "a.csv"}).code == 0);
    REQUIRE(cli({"stats", "--input", d / "r.jsonl", "--all-years", "--threads", "4", "--out", d / "b.csv"}).code == 0);
    CHECK(read_file(d / "a.csv") == read_file(d / "b.csv"));
    auto hash = [](const std::string& m) { return m.substr(m.find("config_hash"), 80); };
    CHECK(hash(read_file(d / "a.csv.manifest.json")) == hash(read_file(d / "b.csv.manifest.json")));
    CHECK(cli({"stats", "--input", d / "r.jsonl", "--all-years", "--threads", "0", "--out", d / "c.csv"}).code == 1);
}

TEST_CASE("trends reproduces the published Soil Science change cells") {
    TempDir d;
    write_file(d / "s.csv", "specialty,year,nodes,edges,diameter\nSoil Science,1990,40,66,5\nSoil Science,2000,80,247,5\n"
                            "Soil Science,2008,92,373,4\nSoil Science,2013,100,429,4\n");
    REQUIRE(cli({"trends", "--table2", "--input", d / "s.csv", "--out", d / "t.txt"}).code == 0);
    const auto t = read_file(d / "t.txt");
    CHECK(t.find("\tEdges\t66\t247\t373\t429\t550%") != std::string::npos);
    CHECK(t.find("Soil Science\tNodes\t40\t80\t92\t100\t60") != std::string::npos);
}
