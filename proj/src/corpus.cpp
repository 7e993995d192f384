#include "collabnet/corpus.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "collabnet/countries.hpp"
#include "collabnet/error.hpp"
#include "collabnet/format.hpp"

namespace collabnet {

using nlohmann::json;
using nlohmann::ordered_json;

const std::vector<std::string>& specialty_universe() {
    static const std::vector<std::string> labels = {
        "Astrophysics", "Mathematical Logic", "Polymer Science", "Seismology",
        "Soil Science", "Virology",           std::string(kOtherSpecialty),
    };
    return labels;
}

namespace {

bool in_universe(std::string_view label) {
    const auto& u = specialty_universe();
    return std::find(u.begin(), u.end(), label) != u.end();
}

std::string universe_list() {
    std::string s;
    for (const auto& l : specialty_universe()) {
        if (!s.empty()) s += ", ";
        s += l;
    }
    return s;
}

struct JournalEntry {
    std::string_view journal;
    std::string_view specialty;
};

// clang-format off
constexpr std::array<JournalEntry, 59> kBundledJournals = {{
    {"Annual Review of Astronomy and Astrophysics", "Astrophysics"},
    {"Astrophysical Letters & Communications", "Astrophysics"},
    {"Astronomy & Astrophysics Supplement Series", "Astrophysics"},
    {"Astronomy and Astrophysics", "Astrophysics"},
    {"Astronomical Journal", "Astrophysics"},
    {"Astronomy Letters-A Journal of Astronomy and Space", "Astrophysics"},
    {"Astrophysics", "Astrophysics"},
    {"Astronomy Reports", "Astrophysics"},
    {"Astrophysical Journal", "Astrophysics"},
    {"Astrophysical Journal Supplement Series", "Astrophysics"},
    {"Astrophysics and Space Science", "Astrophysics"},
    {"Publications of The Astronomical Society of Japan", "Astrophysics"},
    {"Monthly Notices of the Royal Astronomical Society", "Astrophysics"},
    {"Publications of The Astronomical Society of the Pacific", "Astrophysics"},
    {"Solar Physics", "Astrophysics"},
    {"Mathematical Logic Quarterly", "Mathematical Logic"},
    {"Journal of Symbolic Logic", "Mathematical Logic"},
    {"History and Philosophy of Logic", "Mathematical Logic"},
    {"Bulletin of Symbolic Logic", "Mathematical Logic"},
    {"Archive for Mathematical Logic", "Mathematical Logic"},
    {"Annals of Pure and Applied Logic", "Mathematical Logic"},
    {"Progress in Polymer Science", "Polymer Science"},
    {"Polymer Bulletin", "Polymer Science"},
    {"Macromolecular Symposia", "Polymer Science"},
    {"Macromolecules", "Polymer Science"},
    {"Macromolecular Chemistry and Physics", "Polymer Science"},
    {"Journal of Polymer Science Part A-Polymer Chemistry", "Polymer Science"},
    {"Journal of Polymer Science Part B-Polymer Physics", "Polymer Science"},
    {"Journal of Macromolecular Science-Pure and Applied Chemistry", "Polymer Science"},
    {"European Polymer Journal", "Polymer Science"},
    {"Biopolymers/Pva Hydrogels/Anionic Polymerisation Nanocomposites", "Polymer Science"},
    {"Soil Dynamics and Earthquake Engineering", "Seismology"},
    {"Bulletin of The Seismological Society of America", "Seismology"},
    {"Journal of Seismology", "Seismology"},
    {"Physics of The Earth and Planetary interiors", "Seismology"},
    {"Earth Planets and Space", "Seismology"},
    {"Geophysical Journal international", "Seismology"},
    {"Geophysical Research Letters", "Seismology"},
    {"Journal of Geophysical Research-Solid Earth", "Seismology"},
    {"Tectonophysics", "Seismology"},
    {"Advances in Agronomy", "Soil Science"},
    {"Australian Journal of Soil Research", "Soil Science"},
    {"Canadian Journal of Soil Science", "Soil Science"},
    {"Communications in Soil Science and Plant Analysis", "Soil Science"},
    {"European Journal of Soil Science", "Soil Science"},
    {"Forest Ecology and Management", "Soil Science"},
    {"Geoderma", "Soil Science"},
    {"Soil Science Society of America Journal", "Soil Science"},
    {"Soil Science", "Soil Science"},
    {"Soil & Tillage Research", "Soil Science"},
    {"Advances in Virus Research", "Virology"},
    {"Virology", "Virology"},
    {"Archives of Virology", "Virology"},
    {"Journal of General Virology", "Virology"},
    {"Journal of Medical Virology", "Virology"},
    {"Journal of Virology", "Virology"},
    {"Journal of Virological Methods", "Virology"},
    {"Virus Genes", "Virology"},
    {"Virus Research", "Virology"},
}};
// clang-format on


ordered_json record_to_json(const PublicationRecord& r) {
    ordered_json j;
    j["id"] = r.id;
    j["year"] = r.year;
    j["journal"] = r.journal;
    j["specialty"] = r.specialty;
    j["field"] = r.field;
    j["doctype"] = r.doctype;
    j["countries"] = r.countries;
    j["citations"] = r.citations;
    return j;
}

template <class T>
bool get_field(const json& obj, const char* key, T& out, std::string& why) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        why = std::string("missing field '") + key + "'";
        return false;
    }
    if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) {
            why = std::string("field '") + key + "' is not a string";
            return false;
        }
        out = it->template get<std::string>();
    } else {
        if (!it->is_number_integer() && !it->is_number_unsigned()) {
            why = std::string("field '") + key + "' is not an integer";
            return false;
        }
        out = it->template get<T>();
    }
    return true;
}

// Parses and validates one record. On failure returns false and sets `why`;
// `id` is filled as soon as it is known so the rejection can name it.
bool parse_record(const json& obj, PublicationRecord& rec, std::string& why) {
    if (!obj.is_object()) {
        why = "record is not an object";
        return false;
    }
    if (!get_field(obj, "id", rec.id, why)) return false;
    if (rec.id.empty()) {
        why = "empty id";
        return false;
    }
    std::int64_t year = 0;
    if (!get_field(obj, "year", year, why)) return false;
    if (year < 1900 || year > 2100) {
        why = "year out of range [1900, 2100]: " + std::to_string(year);
        return false;
    }
    rec.year = static_cast<int>(year);
    if (!get_field(obj, "journal", rec.journal, why)) return false;
    if (!get_field(obj, "field", rec.field, why)) return false;
    if (!get_field(obj, "doctype", rec.doctype, why)) return false;
    if (!get_field(obj, "citations", rec.citations, why)) return false;
    if (rec.citations < 0) {
        why = "negative citation count";
        return false;
    }
    auto it = obj.find("countries");
    if (it == obj.end() || !it->is_array()) {
        why = "missing field 'countries'";
        return false;
    }
    std::set<std::string> codes;
    for (const auto& c : *it) {
        if (!c.is_string()) {
            why = "country code is not a string";
            return false;
        }
        auto code = normalize_country(c.get<std::string>());
        if (!code) {
            why = "unknown country code: " + c.get<std::string>();
            return false;
        }
        codes.insert(*code);
    }
    if (codes.empty()) {
        why = "empty country set";
        return false;
    }
    rec.countries.assign(codes.begin(), codes.end());
    return true;
}

}  // namespace

SpecialtyMap SpecialtyMap::bundled() {
    SpecialtyMap m;
    for (const auto& e : kBundledJournals) m.add(e.journal, e.specialty);
    return m;
}

void SpecialtyMap::add(std::string_view journal, std::string_view specialty) {
    if (!in_universe(specialty))
        throw ValidationError("unknown specialty label '" + std::string(specialty) + "'; valid labels: " +
                              universe_list());
    std::string key = normalize_label(journal);
    if (key.empty()) throw ValidationError("empty journal name in specialty map");
    if (!entries_.emplace(key, std::string(specialty)).second)
        throw ValidationError("duplicate journal in specialty map: '" + std::string(journal) + "'");
}

SpecialtyMap SpecialtyMap::from_csv(std::string_view text) {
    SpecialtyMap m;
    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto cols = split_csv_line(lines[i]);
        if (cols.size() != 2)
            throw ValidationError("specialty map line " + std::to_string(i + 1) + ": expected 2 columns");
        if (i == 0 && normalize_label(cols[0]) == "journal" && normalize_label(cols[1]) == "specialty") continue;
        m.add(trim(cols[0]), trim(cols[1]));
    }
    return m;
}

std::string SpecialtyMap::resolve(std::string_view journal) const {
    auto it = entries_.find(normalize_label(journal));
    return it == entries_.end() ? std::string(kOtherSpecialty) : it->second;
}

std::string IngestReport::to_csv() const {
    std::string out = "id,reason\n";
    for (const auto& r : rejections) out += csv_field(r.id) + "," + csv_field(r.reason) + "\n";
    return out;
}

Corpus::Corpus(std::vector<PublicationRecord> records) : records_(std::move(records)) {
    std::sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    auto dup = std::adjacent_find(records_.begin(), records_.end(),
                                  [](const auto& a, const auto& b) { return a.id == b.id; });
    if (dup != records_.end()) throw ValidationError("duplicate record id '" + dup->id + "'");
}

std::vector<int> Corpus::years() const {
    std::set<int> ys;
    for (const auto& r : records_) ys.insert(r.year);
    return {ys.begin(), ys.end()};
}

std::vector<std::string> Corpus::specialties() const {
    std::set<std::string> s;
    for (const auto& r : records_) s.insert(r.specialty);
    return {s.begin(), s.end()};
}

std::string Corpus::to_jsonl() const {
    std::string out;
    for (const auto& r : records_) {
        out += record_to_json(r).dump();
        out += '\n';
    }
    return out;
}

Corpus Corpus::from_jsonl(std::string_view text) {
    std::vector<PublicationRecord> recs;
    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        json obj = json::parse(lines[i], nullptr, false);
        PublicationRecord rec;
        std::string why = "malformed JSON";
        if (!obj.is_discarded() && parse_record(obj, rec, why) && get_field(obj, "specialty", rec.specialty, why)) {
            if (in_universe(rec.specialty)) {
                recs.push_back(std::move(rec));
                continue;
            }
            why = "unknown specialty '" + rec.specialty + "'";
        }
        throw ValidationError("corpus line " + std::to_string(i + 1) + ": " + why);
    }
    return Corpus(std::move(recs));
}

IngestResult ingest(std::string_view jsonl, const SpecialtyMap& map) {
    IngestResult result;
    auto& report = result.report;
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<PublicationRecord> recs;
    auto lines = split_lines(jsonl);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        ++report.input_count;
        PublicationRecord rec;
        std::string why;
        json obj = json::parse(lines[i], nullptr, false);
        bool ok = false;
        if (obj.is_discarded()) why = "malformed JSON";
        else ok = parse_record(obj, rec, why);
        if (!ok) {
            std::string id = rec.id.empty() ? "line:" + std::to_string(i + 1) : rec.id;
            report.rejections.push_back({std::move(id), std::move(why)});
            continue;
        }
        rec.specialty = map.resolve(rec.journal);
        ++report.accepted;
        auto [it, inserted] = slot.emplace(rec.id, recs.size());
        if (inserted) {
            recs.push_back(std::move(rec));
        } else {
            recs[it->second] = std::move(rec);
            ++report.replaced;
        }
    }
    result.corpus = Corpus(std::move(recs));
    return result;
}

IngestResult ingest_file(const std::string& path, const SpecialtyMap& map) {
    return ingest(read_file(path), map);
}

std::vector<PublicationRecord> filter(const Corpus& corpus, std::string_view specialty, int year) {
    if (!in_universe(specialty))
        throw ValidationError("unknown specialty '" + std::string(specialty) + "'; valid labels: " + universe_list());
    std::vector<PublicationRecord> out;
    for (const auto& r : corpus.records())
        if (r.specialty == specialty && r.year == year) out.push_back(r);
    return out;
}

}  // namespace collabnet
