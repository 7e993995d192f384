#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include "collabnet/corpus.hpp"
#include "collabnet/error.hpp"
#include "collabnet/format.hpp"
#include "collabnet/graph.hpp"
#include "collabnet/impact.hpp"
#include "collabnet/lmm.hpp"
#include "collabnet/longit.hpp"
#include "collabnet/manifest.hpp"
#include "collabnet/metrics.hpp"
#include "collabnet/netbuild.hpp"
#include "collabnet/syngen.hpp"

namespace collabnet::cli {

namespace {

constexpr std::string_view kAllFields = "All Fields";

struct Options {
    std::vector<std::string> inputs;
    std::string out;
    std::string map;
    std::string specialty;
    std::optional<int> year;
    std::string isolate_policy = "drop";
    std::string count_mode = "edges";
    std::string format = "csv";
    unsigned threads = 1;
    std::uint64_t seed = 42;
    bool no_header = false;
    bool all_years = false;
    bool table2 = false;
    bool fixed = false;
    bool json = false;
    std::string method = "ml";
    std::string csv_out;
    std::string observations_out;
    std::size_t papers = 0;
    std::size_t countries = 0;
    std::optional<double> attachment;
    std::vector<int> years;
};

/// Sibling path: "dir/name.jsonl" + ".truth.csv" -> "dir/name.truth.csv".
std::string sibling(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    if (p.has_extension()) p.replace_extension();
    return p.string() + suffix;
}

class Run {
public:
    Run(std::string command, std::ostream& err) : err_(err) { manifest_.command = std::move(command); }

    void config(const std::string& key, const std::string& value) { manifest_.config.emplace_back(key, value); }

    std::string read_input(const std::string& path) {
        auto data = read_file(path);
        manifest_.inputs.push_back({path, sha256_hex(data)});
        return data;
    }

    void write(const std::string& path, const std::string& data) {
        write_file(path, data);
        manifest_.outputs.push_back({path, sha256_hex(data)});
    }

    void finish() { write_manifests(manifest_); }

    std::ostream& err() { return err_; }

private:
    RunManifest manifest_;
    std::ostream& err_;
};

bool looks_like_jsonl(std::string_view text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
        return c == '{';
    }
    return false;
}

/// Records of one slice, relabelled when the whole year is requested.
std::vector<PublicationRecord> slice(const Corpus& corpus, const std::string& specialty, int year) {
    if (specialty.empty() || specialty == kAllFields) {
        std::vector<PublicationRecord> out;
        for (const auto& r : corpus.records())
            if (r.year == year) {
                out.push_back(r);
                out.back().specialty = std::string(kAllFields);
            }
        return out;
    }
    return filter(corpus, specialty, year);
}

std::string slice_label(const std::string& specialty) {
    return specialty.empty() ? std::string(kAllFields) : specialty;
}

void cmd_gen(const Options& o, Run& run) {
    auto config = default_gen_config();
    config.seed = o.seed;
    if (o.papers) config.n_papers = o.papers;
    if (o.countries) config.n_countries = o.countries;
    if (o.attachment) config.attachment_strength = *o.attachment;
    if (!o.years.empty()) {
        config.years = o.years;
        auto means = config.citations.cell_means;
        config.citations.cell_means.clear();
        // Keep the per-field, per-doctype means, now for the requested years.
        for (const auto& [cell, m] : means)
            if (cell.year == default_gen_config().years.back())
                for (int y : config.years) config.citations.cell_means[{cell.field, y, cell.doctype}] = m;
    }
    run.config("seed", std::to_string(config.seed));
    run.config("papers", std::to_string(config.n_papers));
    run.config("countries", std::to_string(config.n_countries));
    run.config("attachment", format_real(config.attachment_strength));
    std::string ys;
    for (int y : config.years) ys += (ys.empty() ? "" : ",") + std::to_string(y);
    run.config("years", ys);

    auto result = generate(config);
    run.write(o.out, result.to_jsonl());
    run.write(sibling(o.out, ".truth.csv"), result.truth_csv());
    run.finish();
    run.err() << "generated " << result.records.size() << " records\n";
}

void cmd_ingest(const Options& o, Run& run) {
    SpecialtyMap map = SpecialtyMap::bundled();
    if (!o.map.empty()) map = SpecialtyMap::from_csv(run.read_input(o.map));
    run.config("map", o.map.empty() ? "bundled" : "file");
    auto result = ingest(run.read_input(o.inputs.at(0)), map);
    run.write(o.out, result.corpus.to_jsonl());
    run.write(sibling(o.out, ".rejections.csv"), result.report.to_csv());
    run.finish();
    run.err() << "read " << result.report.input_count << " records: " << result.report.accepted << " accepted, "
              << result.report.rejections.size() << " rejected, " << result.report.replaced << " replaced\n";
}

void cmd_build(const Options& o, Run& run) {
    if (!o.year) throw ValidationError("build requires --year");
    const auto policy = parse_isolate_policy(o.isolate_policy);
    const auto mode = parse_count_mode(o.count_mode);
    const auto fmt = parse_export_format(o.format);
    run.config("specialty", slice_label(o.specialty));
    run.config("year", std::to_string(*o.year));
    run.config("isolate_policy", std::string(to_string(policy)));
    run.config("count_mode", std::string(to_string(mode)));
    run.config("format", o.format);
    run.config("header", o.no_header ? "false" : "true");

    const auto corpus = Corpus::from_jsonl(run.read_input(o.inputs.at(0)));
    const auto records = slice(corpus, o.specialty, *o.year);
    const auto net = build(records, policy, mode);
    run.write(o.out, export_network(net, fmt, {.header = !o.no_header}));
    run.finish();
    run.err() << net.nodes.size() << " nodes, " << net.edges.size() << " edges\n";
}

void cmd_export(const Options& o, Run& run) {
    const auto fmt = parse_export_format(o.format);
    run.config("specialty", o.specialty);
    run.config("year", o.year ? std::to_string(*o.year) : "");
    run.config("format", o.format);
    run.config("header", o.no_header ? "false" : "true");
    auto net = read_edgelist(run.read_input(o.inputs.at(0)), o.specialty, o.year.value_or(0));
    run.write(o.out, export_network(net, fmt, {.header = !o.no_header}));
    run.finish();
}

void cmd_stats(const Options& o, Run& run) {
    const auto policy = parse_isolate_policy(o.isolate_policy);
    const auto mode = parse_count_mode(o.count_mode);
    if (o.threads < 1) throw ValidationError("--threads must be at least 1");
    run.config("specialty", o.specialty);
    run.config("year", o.year ? std::to_string(*o.year) : "");
    run.config("all_years", o.all_years ? "true" : "false");
    run.config("isolate_policy", std::string(to_string(policy)));
    run.config("count_mode", std::string(to_string(mode)));
    run.config("fixed", o.fixed ? "4" : "");
    run.config("json", o.json ? "true" : "false");
    const StatsOptions opts{mode, o.threads};

    struct Row {
        std::string specialty;
        int year;
        NetworkStats stats;
    };
    std::vector<Row> rows;
    const auto text = run.read_input(o.inputs.at(0));
    if (!looks_like_jsonl(text)) {
        auto net = read_edgelist(text, o.specialty, o.year.value_or(0));
        net.count_mode = mode;
        rows.push_back({net.specialty, net.year, compute_stats(net.topology(), opts)});
    } else {
        const auto corpus = Corpus::from_jsonl(text);
        std::vector<int> years;
        if (o.all_years) years = corpus.years();
        else if (o.year) years = {*o.year};
        else throw ValidationError("stats on a corpus requires --year or --all-years");
        std::vector<std::string> specialties;
        if (!o.specialty.empty()) specialties = {o.specialty};
        else if (o.all_years) {
            specialties = {std::string(kAllFields)};
            for (const auto& s : specialty_universe())
                if (s != kOtherSpecialty) specialties.push_back(s);
        } else specialties = {std::string(kAllFields)};
        const bool grid = specialties.size() * years.size() > 1;
        for (const auto& s : specialties)
            for (int y : years) {
                try {
                    auto records = slice(corpus, s, y);
                    auto net = build(records, policy, mode);
                    rows.push_back({s, y, compute_stats(net.topology(), opts)});
                } catch (const ValidationError& e) {
                    if (!grid) throw;
                    run.err() << "skipping " << s << " " << y << ": " << e.what() << "\n";
                }
            }
    }
    std::string data;
    if (o.json) {
        data = "[\n";
        for (std::size_t i = 0; i < rows.size(); ++i)
            data += stats_json(rows[i].specialty, rows[i].year, rows[i].stats) + (i + 1 < rows.size() ? ",\n" : "\n");
        data += "]\n";
    } else {
        data = stats_csv_header() + "\n";
        for (const auto& r : rows) data += stats_csv_row(r.specialty, r.year, r.stats, o.fixed ? 4 : -1) + "\n";
    }
    run.write(o.out, data);
    run.finish();
}

void cmd_regress(const Options& o, Run& run) {
    lmm::LmmSpec spec;
    if (o.method == "ml") spec.method = lmm::Estimation::ML;
    else if (o.method == "reml") spec.method = lmm::Estimation::REML;
    else throw ValidationError("unknown --method '" + o.method + "' (expected ml or reml)");
    run.config("method", o.method);
    run.config("specialty", o.specialty);

    std::vector<lmm::LabeledFit> fits;
    std::vector<ComboObservation> all_obs;
    const auto text = run.read_input(o.inputs.at(0));
    if (!looks_like_jsonl(text)) {
        auto obs = observations_from_csv(text);
        fits.push_back({o.specialty.empty() ? std::string(kAllFields) : o.specialty, lmm::fit(obs, spec)});
    } else {
        const auto corpus = Corpus::from_jsonl(text);
        const auto baselines = compute_baselines(corpus);
        std::vector<std::string> labels;
        if (!o.specialty.empty()) labels = {o.specialty};
        else {
            for (const auto& s : specialty_universe())
                if (s != kOtherSpecialty) labels.push_back(s);
            labels.push_back(std::string(kAllFields));
        }
        for (const auto& label : labels) {
            std::vector<PublicationRecord> records;
            for (const auto& r : corpus.records())
                if (label == kAllFields || r.specialty == label) records.push_back(r);
            auto set = build_observations(records, baselines);
            if (label == kAllFields || labels.size() == 1) all_obs = set.observations;
            try {
                fits.push_back({label, lmm::fit(set.observations, spec)});
            } catch (const ValidationError& e) {
                if (labels.size() == 1) throw;
                run.err() << "skipping " << label << ": " << e.what() << "\n";
            }
        }
        if (!o.observations_out.empty()) run.write(o.observations_out, observations_to_csv(all_obs));
    }
    run.write(o.out, lmm::render_report(fits));
    if (!o.csv_out.empty()) run.write(o.csv_out, lmm::report_csv(fits));
    run.finish();
}

void cmd_trends(const Options& o, Run& run) {
    run.config("table2", o.table2 ? "true" : "false");
    std::vector<TrendSeries> series;
    for (const auto& path : o.inputs) {
        auto part = series_from_stats_csv(run.read_input(path));
        for (auto& s : part) {
            auto it = std::find_if(series.begin(), series.end(), [&](const auto& x) { return x.specialty == s.specialty; });
            if (it == series.end()) series.push_back(std::move(s));
            else {
                it->points.insert(it->points.end(), s.points.begin(), s.points.end());
                std::stable_sort(it->points.begin(), it->points.end(),
                                 [](const auto& a, const auto& b) { return a.year < b.year; });
                it->validate();
            }
        }
    }
    run.write(o.out, o.table2 ? render_table2(series) : trends_csv(series));
    run.finish();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Country collaboration network analysis", "collabnet"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    Options o;

    auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output file")->required(); };
    auto add_input = [&](CLI::App* c, bool many = false) {
        auto* opt = c->add_option("--input", o.inputs, "Input file")->required();
        if (!many) opt->expected(1);
    };
    auto add_slice = [&](CLI::App* c) {
        c->add_option("--specialty", o.specialty, "Specialty label (default: All Fields)");
        c->add_option("--year", o.year, "Snapshot year");
        c->add_option("--isolate-policy", o.isolate_policy, "keep|drop")->check(CLI::IsMember({"keep", "drop"}));
        c->add_option("--count-mode", o.count_mode, "edges|arcs")->check(CLI::IsMember({"edges", "arcs"}));
    };

    auto* gen = app.add_subcommand("gen", "Generate a synthetic corpus and its ground-truth log");
    gen->add_option("--seed", o.seed, "Generator seed");
    gen->add_option("--papers", o.papers, "Number of papers");
    gen->add_option("--countries", o.countries, "Number of countries");
    gen->add_option("--attachment", o.attachment, "Attachment strength (>= 0)");
    gen->add_option("--years", o.years, "Snapshot years")->delimiter(',');
    add_out(gen);

    auto* ing = app.add_subcommand("ingest", "Validate raw records into a corpus");
    add_input(ing);
    ing->add_option("--map", o.map, "journal,specialty CSV (default: bundled list)");
    add_out(ing);

    auto* bld = app.add_subcommand("build", "Build one collaboration network");
    add_input(bld);
    add_slice(bld);
    bld->add_option("--format", o.format, "graphml|dot|csv");
    bld->add_flag("--no-header", o.no_header, "Omit the edge list header");
    add_out(bld);

    auto* st = app.add_subcommand("stats", "Network statistics from a corpus or an edge list");
    add_input(st);
    add_slice(st);
    st->add_flag("--all-years", o.all_years, "Every year (and every specialty unless --specialty)");
    st->add_option("--threads", o.threads, "Worker threads for betweenness");
    st->add_flag("--fixed", o.fixed, "Fixed 4-decimal reals");
    st->add_flag("--json", o.json, "JSON instead of CSV");
    add_out(st);

    auto* reg = app.add_subcommand("regress", "Random-intercept regression of log FWCI");
    add_input(reg);
    reg->add_option("--specialty", o.specialty, "Only this specialty");
    reg->add_option("--method", o.method, "ml|reml");
    reg->add_option("--csv", o.csv_out, "Also write the long-form CSV report");
    reg->add_option("--observations-out", o.observations_out, "Write combo observations (corpus input)");
    add_out(reg);

    auto* tr = app.add_subcommand("trends", "Change tables and convergence shares from stats CSVs");
    add_input(tr, true);
    tr->add_flag("--table2", o.table2, "Render the change table instead of the trend CSV");
    add_out(tr);

    auto* ex = app.add_subcommand("export", "Convert an edge list to another format");
    add_input(ex);
    ex->add_option("--specialty", o.specialty, "Label written into the export");
    ex->add_option("--year", o.year, "Year written into the export");
    ex->add_option("--format", o.format, "graphml|dot|csv");
    ex->add_flag("--no-header", o.no_header, "Omit the edge list header");
    add_out(ex);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 1;
    }

    auto* sub = app.get_subcommands().front();
    Run run(sub->get_name(), err);
    try {
        if (sub == gen) cmd_gen(o, run);
        else if (sub == ing) cmd_ingest(o, run);
        else if (sub == bld) cmd_build(o, run);
        else if (sub == st) cmd_stats(o, run);
        else if (sub == reg) cmd_regress(o, run);
        else if (sub == tr) cmd_trends(o, run);
        else if (sub == ex) cmd_export(o, run);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace collabnet::cli
