#include "collabnet/impact.hpp"

#include <algorithm>

#include <charconv>
#include <cmath>

#include "collabnet/error.hpp"
#include "collabnet/format.hpp"

namespace collabnet {

CellKey cell_of(const PublicationRecord& r) { return {r.field, r.year, r.doctype}; }

const FwciBaseline* BaselineTable::find(const CellKey& key) const {
    auto it = cells_.find(key);
    return it == cells_.end() ? nullptr : &it->second;
}

void BaselineTable::insert(FwciBaseline b) {
    if (b.usable && !(b.mean_citations > 0.0)) throw ValidationError("usable baseline must have a positive mean");
    auto key = b.key;
    if (!cells_.emplace(std::move(key), std::move(b)).second) throw ValidationError("duplicate baseline cell");
}

BaselineTable compute_baselines(std::span<const PublicationRecord> records) {
    if (records.empty()) throw ValidationError("cannot compute citation baselines of an empty corpus");
    struct Acc {
        std::int64_t citations = 0;
        std::size_t count = 0;
    };
    std::map<CellKey, Acc> acc;
    for (const auto& r : records) {
        auto& a = acc[cell_of(r)];
        a.citations += r.citations;
        ++a.count;
    }
    BaselineTable table;
    for (const auto& [key, a] : acc) {
        FwciBaseline b;
        b.key = key;
        b.count = a.count;
        b.mean_citations = static_cast<double>(a.citations) / static_cast<double>(a.count);
        b.usable = a.citations > 0;
        table.insert(std::move(b));
    }
    return table;
}

BaselineTable compute_baselines(const Corpus& corpus) { return compute_baselines(corpus.records()); }

std::optional<double> try_fwci(const PublicationRecord& r, const BaselineTable& baselines) {
    const auto* b = baselines.find(cell_of(r));
    if (b == nullptr || !b->usable) return std::nullopt;
    return static_cast<double>(r.citations) / b->mean_citations;
}

namespace {

std::string describe(const CellKey& k) {
    return "(" + k.field + ", " + std::to_string(k.year) + ", " + k.doctype + ")";
}

}  // namespace

double fwci(const PublicationRecord& r, const BaselineTable& baselines) {
    const auto* b = baselines.find(cell_of(r));
    if (b == nullptr) throw ValidationError("no citation baseline for cell " + describe(cell_of(r)));
    if (!b->usable) throw ValidationError("citation baseline is zero for cell " + describe(cell_of(r)));
    return static_cast<double>(r.citations) / b->mean_citations;
}

std::string ComboObservation::combo_id() const {
    std::string id;
    for (const auto& c : combo) {
        if (!id.empty()) id += '-';
        id += c;
    }
    return id;
}

ObservationSet build_observations(std::span<const PublicationRecord> records, const BaselineTable& baselines) {
    struct Acc {
        std::size_t count = 0;
        double fwci_sum = 0.0;
    };
    std::map<std::pair<std::vector<std::string>, int>, Acc> groups;
    ObservationSet out;
    for (const auto& r : records) {
        if (r.countries.size() < 2) continue;
        const auto* b = baselines.find(cell_of(r));
        if (b == nullptr) {
            out.excluded.push_back({r.id, "no citation baseline for cell " + describe(cell_of(r))});
            continue;
        }
        if (!b->usable) {
            out.excluded.push_back({r.id, "citation baseline is zero for cell " + describe(cell_of(r))});
            continue;
        }
        auto combo = r.countries;
        std::sort(combo.begin(), combo.end());
        combo.erase(std::unique(combo.begin(), combo.end()), combo.end());
        auto& a = groups[{std::move(combo), r.year}];
        ++a.count;
        a.fwci_sum += static_cast<double>(r.citations) / b->mean_citations;
    }
    for (const auto& [key, a] : groups) {
        ComboObservation o;
        o.combo = key.first;
        o.year = key.second;
        o.country_count = o.combo.size();
        o.publication_count = a.count;
        o.mean_fwci = a.fwci_sum / static_cast<double>(a.count);
        o.log_fwci = std::log(o.mean_fwci + kLogFwciOffset);
        out.observations.push_back(std::move(o));
    }
    // order rows by the exported key, which can differ from vector order for codes of unequal length
    std::stable_sort(out.observations.begin(), out.observations.end(), [](const auto& x, const auto& y) {
        auto ix = x.combo_id(), iy = y.combo_id();
        return ix != iy ? ix < iy : x.year < y.year;
    });
    return out;
}

std::string observations_to_csv(std::span<const ComboObservation> obs) {
    std::string out = "combo_id,year,country_count,publication_count,mean_fwci,log_fwci\n";
    for (const auto& o : obs)
        out += o.combo_id() + "," + std::to_string(o.year) + "," + std::to_string(o.country_count) + "," +
               std::to_string(o.publication_count) + "," + format_real(o.mean_fwci) + "," + format_real(o.log_fwci) +
               "\n";
    return out;
}

namespace {

template <class T>
T parse_col(const std::string& s, std::size_t line, const char* name) {
    T v{};
    auto t = trim(s);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size())
        throw ValidationError("observations line " + std::to_string(line) + ": bad " + name + " '" + s + "'");
    return v;
}

}  // namespace

std::vector<ComboObservation> observations_from_csv(std::string_view csv) {
    std::vector<ComboObservation> out;
    auto lines = split_lines(csv);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto cols = split_csv_line(lines[i]);
        if (i == 0 && trim(cols[0]) == "combo_id") continue;
        if (cols.size() != 6) throw ValidationError("observations line " + std::to_string(i + 1) + ": expected 6 columns");
        ComboObservation o;
        std::string id = trim(cols[0]);
        std::size_t start = 0;
        while (start <= id.size()) {
            auto dash = id.find('-', start);
            auto part = id.substr(start, dash == std::string::npos ? std::string::npos : dash - start);
            if (part.empty()) throw ValidationError("observations line " + std::to_string(i + 1) + ": bad combo_id");
            o.combo.push_back(part);
            if (dash == std::string::npos) break;
            start = dash + 1;
        }
        o.year = parse_col<int>(cols[1], i + 1, "year");
        o.country_count = parse_col<std::size_t>(cols[2], i + 1, "country_count");
        o.publication_count = parse_col<std::size_t>(cols[3], i + 1, "publication_count");
        o.mean_fwci = parse_col<double>(cols[4], i + 1, "mean_fwci");
        o.log_fwci = parse_col<double>(cols[5], i + 1, "log_fwci");
        if (o.country_count != o.combo.size())
            throw ValidationError("observations line " + std::to_string(i + 1) + ": country_count disagrees with combo_id");
        if (o.publication_count < 1)
            throw ValidationError("observations line " + std::to_string(i + 1) + ": publication_count must be >= 1");
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace collabnet
